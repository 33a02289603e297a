"""
ユーティリティ関数

このモジュールはロガーの設定と、インスタンスファイル（DIMACS, family, cmw, ca）の
読み書きに関するユーティリティ関数を提供します。

ファイル形式は行単位の ASCII 10進数で、'#' から行末まではコメントです。
    family: ヘッダ `family <a> <b>` の後に b 個の値の行が a 行
    cmw:    ヘッダ `cmw <n1> <n2>` の後に n1×n1 の表、空行、n2×n2 の表
    ca:     ヘッダ `ca <頂点数> <s>` の後に `v <id>`、`d <id1> <id2> <値>`、
            `handle <役割> <id>` の行
"""

# 標準ライブラリ
import logging
import os
from collections.abc import Iterator
from logging.handlers import RotatingFileHandler

# ローカルモジュール
from channel import CaInstance
from cnf import CnfFormula, parse_dimacs
from config import config
from exceptions import DimensionError, InstanceFormatError
from family import FamilyFunction
from matching import WeightedBipartiteGraph

# ログディレクトリの作成
if not os.path.exists(config.LOG_DIR):
    os.makedirs(config.LOG_DIR)

# ログファイルのパス
log_file_path = os.path.join(config.LOG_DIR, config.LOG_FILE)

# ロガーの設定（各モジュールは子ロガー f"{LOGGER_NAME}.<module>" を使う）
logger = logging.getLogger(config.LOGGER_NAME)
logger.setLevel(getattr(logging, config.LOG_LEVEL))
logger.propagate = False  # ルートロガーへの伝播を停止

if not logger.handlers:
    # ログフォーマッタ
    formatter = logging.Formatter(config.LOG_FORMAT)

    # ファイルハンドラ（ローテーション設定付き）
    file_handler = RotatingFileHandler(
        log_file_path,
        encoding="utf-8",
        maxBytes=config.LOG_MAX_BYTES,
        backupCount=config.LOG_BACKUP_COUNT,
    )
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

HANDLE_ROLES = ("vL", "vR", "vM", "wL1", "wR1", "wL2", "wR2")


def _content_lines(text: str) -> Iterator[tuple[int, str]]:
    """コメントを除いた (行番号, 内容) を返す。空行も返す"""
    for number, raw in enumerate(text.splitlines(), start=1):
        yield number, raw.split("#", 1)[0].strip()


def _integers(number: int, tokens: list[str]) -> list[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError as e:
        raise InstanceFormatError(number, f"整数ではありません: {' '.join(tokens)!r}") from e


def _header(lines: list[tuple[int, str]], keyword: str, arity: int) -> tuple[int, list[int]]:
    if not lines:
        raise InstanceFormatError(0, f"ヘッダ '{keyword}' がありません")
    number, line = lines[0]
    parts = line.split()
    if not parts or parts[0] != keyword or len(parts) != arity + 1:
        raise InstanceFormatError(number, f"ヘッダの形式が不正です（期待値 '{keyword}' と {arity} 個の数）: {line!r}")
    values = _integers(number, parts[1:])
    if any(value < 0 for value in values):
        raise InstanceFormatError(number, "ヘッダの数値が負です")
    return number, values


def _matrix(lines: list[tuple[int, str]], rows: int, columns: int, where: int) -> tuple[tuple[int, ...], ...]:
    if len(lines) < rows:
        last = lines[-1][0] if lines else where
        raise InstanceFormatError(last, f"{rows} 行が必要ですが {len(lines)} 行しかありません")
    table = []
    for number, line in lines[:rows]:
        values = _integers(number, line.split())
        if len(values) != columns:
            raise InstanceFormatError(number, f"値の数 {len(values)} が {columns} と一致しません")
        if any(value < 0 for value in values):
            raise InstanceFormatError(number, "負の値があります")
        table.append(tuple(values))
    return tuple(table)


def format_family(f: FamilyFunction) -> str:
    lines = [f"family {f.row_count} {f.columns}"]
    lines += [" ".join(map(str, row)) for row in f.rows]
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> FamilyFunction:
    """
    family 形式のテキストを読み込む

    Raises:
        InstanceFormatError: ヘッダ不正、行数・列数の不一致、負の値など（行番号付き）
    """
    lines = [(number, line) for number, line in _content_lines(text) if line]
    number, (rows, columns) = _header(lines, "family", 2)
    if columns < 1:
        raise InstanceFormatError(number, "列数は正でなければなりません")
    body = lines[1:]
    table = _matrix(body, rows, columns, number)
    if len(body) > rows:
        raise InstanceFormatError(body[rows][0], "余分な行があります")
    return FamilyFunction(table, columns)


def format_cmw(graph_1: WeightedBipartiteGraph, graph_2: WeightedBipartiteGraph) -> str:
    lines = [f"cmw {graph_1.side} {graph_2.side}"]
    lines += [" ".join(map(str, row)) for row in graph_1.weights]
    lines.append("")
    lines += [" ".join(map(str, row)) for row in graph_2.weights]
    return "\n".join(lines) + "\n"


def parse_cmw(text: str) -> tuple[WeightedBipartiteGraph, WeightedBipartiteGraph]:
    """
    cmw 形式のテキストを読み込む

    二つの表は空行で区切ります（コメントだけの行は空行として扱いません）。

    Raises:
        InstanceFormatError: ヘッダ不正、区切りの欠落、表の形の不一致など（行番号付き）
    """
    # コメントだけの行は読み飛ばし、本当の空行を区切りとして残す
    raw = text.splitlines()
    lines = [(number, line) for number, line in _content_lines(text) if line or not raw[number - 1].strip()]
    while lines and not lines[0][1]:
        lines.pop(0)
    number, (side_1, side_2) = _header(lines, "cmw", 2)
    if side_1 < 1 or side_2 < 1:
        raise InstanceFormatError(number, "グラフの頂点数は 1 以上が必要です")
    body = lines[1:]
    first = _matrix(body, side_1, side_1, number)
    rest = body[side_1:]
    if not rest or rest[0][1]:
        where = rest[0][0] if rest else (body[-1][0] if body else number)
        raise InstanceFormatError(where, "二つのグラフの間に空行が必要です")
    rest = [(line_number, line) for line_number, line in rest if line]
    second = _matrix(rest, side_2, side_2, number)
    if len(rest) > side_2:
        raise InstanceFormatError(rest[side_2][0], "余分な行があります")
    return WeightedBipartiteGraph(first), WeightedBipartiteGraph(second)


def format_ca(instance: CaInstance) -> str:
    lines = [f"ca {instance.vertex_count} {instance.span_bound}"]
    lines += [f"v {vertex}" for vertex in instance.vertices]
    lines += [f"d {x} {y} {value}" for x, y, value in instance.triples()]
    lines += [f"handle {role} {instance.handles[role]}" for role in HANDLE_ROLES if role in instance.handles]
    return "\n".join(lines) + "\n"


def parse_ca(text: str) -> CaInstance:
    """
    ca 形式のテキストを読み込む

    Raises:
        InstanceFormatError: ヘッダ不正、頂点数の不一致、未知の頂点や役割、
            同じ組への異なる距離など（行番号付き）
    """
    lines = [(number, line) for number, line in _content_lines(text) if line]
    number, (count, span) = _header(lines, "ca", 2)
    if span < 1:
        raise InstanceFormatError(number, "スパンの上限は正でなければなりません")

    vertices: list[str] = []
    known: set[str] = set()
    distances: dict[frozenset[str], int] = {}
    handles: dict[str, str] = {}
    for line_number, line in lines[1:]:
        parts = line.split()
        kind = parts[0]
        if kind == "v":
            if len(parts) != 2:
                raise InstanceFormatError(line_number, f"'v <id>' の形式ではありません: {line!r}")
            if parts[1] in known:
                raise InstanceFormatError(line_number, f"頂点 {parts[1]!r} が重複しています")
            vertices.append(parts[1])
            known.add(parts[1])
        elif kind == "d":
            if len(parts) != 4:
                raise InstanceFormatError(line_number, f"'d <id1> <id2> <値>' の形式ではありません: {line!r}")
            x, y = parts[1], parts[2]
            (value,) = _integers(line_number, parts[3:])
            if x not in known or y not in known:
                raise InstanceFormatError(line_number, f"未宣言の頂点です: {x!r}, {y!r}")
            if x == y or value < 0:
                raise InstanceFormatError(line_number, f"d({x}, {y}) = {value} は使えません")
            key = frozenset((x, y))
            if distances.get(key, value) != value:
                raise InstanceFormatError(line_number, f"d({x}, {y}) に異なる値があります")
            distances[key] = value
        elif kind == "handle":
            if len(parts) != 3 or parts[1] not in HANDLE_ROLES:
                raise InstanceFormatError(line_number, f"役割は {HANDLE_ROLES} のいずれかです: {line!r}")
            if parts[2] not in known:
                raise InstanceFormatError(line_number, f"未宣言の頂点です: {parts[2]!r}")
            handles[parts[1]] = parts[2]
        else:
            raise InstanceFormatError(line_number, f"不明な行です: {line!r}")

    if len(vertices) != count:
        raise InstanceFormatError(number, f"頂点数 {len(vertices)} がヘッダの {count} と一致しません")
    triples = [(*sorted(key), value) for key, value in distances.items()]
    try:
        return CaInstance.build(vertices, triples, span, handles)  # type: ignore[arg-type]
    except DimensionError as e:
        raise InstanceFormatError(number, str(e)) from e


def read_text(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def save_text(path: str, text: str) -> None:
    """テキストを保存する（親ディレクトリが無ければ作る）"""
    directory = os.path.dirname(path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)
        logger.info(f"ディレクトリ作成: {directory}")
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"保存: {path} ({len(text)} 文字)")


def load_formula(path: str, width: int | None = None) -> CnfFormula:
    """DIMACSファイルを読み込む（width が None の場合は設定値）"""
    logger.debug(f"DIMACS読み込み: {path}")
    return parse_dimacs(read_text(path), config.DEFAULT_WIDTH if width is None else width)


def load_ca(path: str) -> CaInstance:
    logger.debug(f"CAインスタンス読み込み: {path}")
    return parse_ca(read_text(path))
