"""
CNF論理式

このモジュールはCNF論理式の表現、出現位置の索引付け（I_i, J_i, P_i）、
DIMACS形式の読み書き、総当たりの充足可能性オラクルを提供します。

出現位置は節優先で番号付けします: 節 i の p 番目のリテラルは
width·(i−1)+p 番目の出現です。
"""

# 標準ライブラリ
import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

# ローカルモジュール
from config import config
from exceptions import DimacsError, FormulaError, OracleTooLargeError

logger = logging.getLogger(f"{config.LOGGER_NAME}.cnf")

SUPPORTED_WIDTHS = (1, 2, 3)

# (変数番号, 極性) 極性 True が肯定リテラル
Literal = tuple[int, bool]
Clause = tuple[Literal, ...]
Assignment = tuple[bool, ...]


@dataclass(frozen=True)
class CnfFormula:
    """
    幅が一定のCNF論理式

    Attributes:
        variable_count: 変数の数 n
        clauses: 節の列。各節はちょうど width 個のリテラル
        width: 節の幅（1, 2, 3 のいずれか）
    """

    variable_count: int
    clauses: tuple[Clause, ...]
    width: int = 3

    def __post_init__(self) -> None:
        if self.width not in SUPPORTED_WIDTHS:
            raise FormulaError(f"節の幅は {SUPPORTED_WIDTHS} のいずれかです: {self.width}")
        if self.variable_count < 0:
            raise FormulaError(f"変数の数が負です: {self.variable_count}")
        for index, clause in enumerate(self.clauses, start=1):
            if len(clause) != self.width:
                raise FormulaError(f"節 {index} のリテラル数が {len(clause)} です（期待値 {self.width}）")
            for variable, _ in clause:
                if not 1 <= variable <= self.variable_count:
                    raise FormulaError(f"節 {index} の変数 {variable} が範囲 [1, {self.variable_count}] の外です")

    @classmethod
    def from_signed(cls, variable_count: int, clauses: Iterable[Iterable[int]], width: int = 3) -> "CnfFormula":
        """
        DIMACS流の符号付き整数リストから論理式を作る

        Examples:
            >>> CnfFormula.from_signed(3, [[1, 2], [-1, 3]], width=2).clause_count
            2
        """
        converted = []
        for clause in clauses:
            literals = []
            for value in clause:
                if value == 0:
                    raise FormulaError("リテラル 0 は使えません")
                literals.append((abs(value), value > 0))
            converted.append(tuple(literals))
        return cls(variable_count, tuple(converted), width)

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    @property
    def occurrence_count(self) -> int:
        return self.width * len(self.clauses)

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        """割り当て（assignment[i-1] が変数 i の値）で全ての節が充足されるか"""
        if len(assignment) != self.variable_count:
            raise FormulaError(f"割り当ての長さ {len(assignment)} が変数の数 {self.variable_count} と一致しません")
        return all(any(assignment[variable - 1] == polarity for variable, polarity in clause) for clause in self.clauses)


@dataclass(frozen=True)
class OccurrenceIndex:
    """
    出現位置の索引

    Attributes:
        total_occurrences: 出現の総数 width·m
        var_occurrences: 変数 i の出現集合 I_i（添字 i-1）
        clause_occurrences: 節 i の出現集合 J_i（添字 i-1、昇順）
    """

    total_occurrences: int
    var_occurrences: tuple[frozenset[int], ...]
    clause_occurrences: tuple[tuple[int, ...], ...]
    occurrence_variables: tuple[int, ...]

    def variable_of(self, occurrence: int) -> int:
        """出現番号（1始まり）の変数番号を返す"""
        if not 1 <= occurrence <= self.total_occurrences:
            raise FormulaError(f"出現番号 {occurrence} が範囲外です")
        return self.occurrence_variables[occurrence - 1]


def occurrence_index(formula: CnfFormula) -> OccurrenceIndex:
    """
    論理式の出現位置を節優先で索引付けする

    Args:
        formula: 論理式

    Returns:
        I_i が [width·m] を分割し、J_i = {width·(i−1)+1, …, width·i} となる索引

    Examples:
        >>> f = CnfFormula.from_signed(3, [[1, 2], [-1, 3]], width=2)
        >>> [sorted(s) for s in occurrence_index(f).var_occurrences]
        [[1, 3], [2], [4]]
    """
    width = formula.width
    buckets: list[set[int]] = [set() for _ in range(formula.variable_count)]
    owners: list[int] = []
    clause_occurrences = []
    for clause_number, clause in enumerate(formula.clauses, start=1):
        first = width * (clause_number - 1) + 1
        clause_occurrences.append(tuple(range(first, first + width)))
        for position, (variable, _) in enumerate(clause):
            buckets[variable - 1].add(first + position)
            owners.append(variable)
    return OccurrenceIndex(
        total_occurrences=formula.occurrence_count,
        var_occurrences=tuple(frozenset(bucket) for bucket in buckets),
        clause_occurrences=tuple(clause_occurrences),
        occurrence_variables=tuple(owners),
    )


def satisfying_subsets(formula: CnfFormula, clause_index: int) -> tuple[frozenset[int], ...]:
    """
    節を充足する出現集合 P_i を列挙する

    K ⊆ J_i に属する出現を値 1、それ以外を値 0 とし、出現を互いに独立な
    変数とみなして節を評価します。各出現はちょうど一つの偽値を持つため
    |P_i| = 2^width − 1 です。

    Args:
        formula: 論理式
        clause_index: 節番号（1始まり）

    Returns:
        特性値（LSB規約の Σ 2^{j−1}）の昇順に並べた部分集合の列

    Raises:
        FormulaError: 節番号が範囲外の場合
    """
    if not 1 <= clause_index <= formula.clause_count:
        raise FormulaError(f"節番号 {clause_index} が範囲 [1, {formula.clause_count}] の外です")
    clause = formula.clauses[clause_index - 1]
    first = formula.width * (clause_index - 1) + 1
    subsets = []
    # J_i の出現番号は連続するので、マスク昇順がそのまま特性値昇順になる
    for mask in range(1 << formula.width):
        bits = [bool(mask >> position & 1) for position in range(formula.width)]
        if any(bit == polarity for bit, (_, polarity) in zip(bits, clause, strict=True)):
            subsets.append(frozenset(first + position for position, bit in enumerate(bits) if bit))
    return tuple(subsets)


def sat_oracle(formula: CnfFormula, budget: int | None = None) -> Assignment | None:
    """
    総当たりで充足割り当てを探す

    辞書式順（変数 1 が最上位、偽 < 真）で最初の充足割り当てを返します。
    巧妙なソルバーと共通のバグを隠さないよう、意図的に全列挙です。

    Args:
        formula: 論理式
        budget: 列挙する割り当て数の上限（None の場合は設定値）

    Returns:
        充足割り当て、充足不能の場合は None

    Raises:
        OracleTooLargeError: 2^n が予算を超える場合
    """
    limit = config.resolve_budget(budget)
    required = 1 << formula.variable_count
    if required > limit:
        raise OracleTooLargeError(f"SATオラクル: 2^{formula.variable_count} 個の割り当ては予算 {limit} を超えます", required, limit)

    logger.debug(f"SATオラクル開始: n={formula.variable_count}, m={formula.clause_count}")
    for assignment in itertools.product((False, True), repeat=formula.variable_count):
        if formula.evaluate(assignment):
            return assignment
    return None


def parse_dimacs(text: str, width: int = 3) -> CnfFormula:
    """
    DIMACS CNF テキストを読み込む

    'c' 行と空行は読み飛ばし、'%' 行で読み込みを終えます。各節は
    0 で終端し、ちょうど width 個のリテラルを持つ必要があります。

    Args:
        text: DIMACS形式のテキスト
        width: 節の幅

    Returns:
        節とリテラルの順序を保った論理式

    Raises:
        DimacsError: ヘッダ不正、幅の合わない節、範囲外の変数など（行番号付き）
    """
    if width not in SUPPORTED_WIDTHS:
        raise DimacsError(0, f"節の幅は {SUPPORTED_WIDTHS} のいずれかです: {width}")

    header: tuple[int, int] | None = None
    header_line = 0
    clauses: list[Clause] = []
    pending: list[Literal] = []
    line_number = 0

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError(line_number, "ヘッダが重複しています")
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsError(line_number, f"ヘッダの形式が不正です: {line!r}")
            try:
                variable_count, clause_count = int(parts[2]), int(parts[3])
            except ValueError as e:
                raise DimacsError(line_number, f"ヘッダの数値が不正です: {line!r}") from e
            if variable_count < 0 or clause_count < 0:
                raise DimacsError(line_number, "ヘッダの数値が負です")
            header = (variable_count, clause_count)
            header_line = line_number
            continue
        if header is None:
            raise DimacsError(line_number, "ヘッダより前に節があります")

        for token in line.split():
            try:
                value = int(token)
            except ValueError as e:
                raise DimacsError(line_number, f"整数ではありません: {token!r}") from e
            if value == 0:
                if len(pending) != width:
                    raise DimacsError(line_number, f"節のリテラル数が {len(pending)} です（期待値 {width}）")
                clauses.append(tuple(pending))
                pending = []
                continue
            if abs(value) > header[0]:
                raise DimacsError(line_number, f"変数 {abs(value)} が範囲 [1, {header[0]}] の外です")
            pending.append((abs(value), value > 0))

    if header is None:
        raise DimacsError(line_number, "ヘッダ 'p cnf' がありません")
    if pending:
        raise DimacsError(line_number, "最後の節が 0 で終端されていません")
    if len(clauses) != header[1]:
        raise DimacsError(header_line, f"節の数 {len(clauses)} がヘッダの {header[1]} と一致しません")

    formula = CnfFormula(header[0], tuple(clauses), width)
    logger.info(f"DIMACS読み込み: n={formula.variable_count}, m={formula.clause_count}, width={width}")
    return formula


def format_dimacs(formula: CnfFormula) -> str:
    """論理式をDIMACS CNFテキストに書き出す（1行1節）"""
    lines = [f"p cnf {formula.variable_count} {formula.clause_count}"]
    for clause in formula.clauses:
        literals = " ".join(str(variable if polarity else -variable) for variable, polarity in clause)
        lines.append(f"{literals} 0")
    return "\n".join(lines) + "\n"
