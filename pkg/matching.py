"""
Common Matching Weight

完全二部グラフの完全マッチングの重み集合を総当たりで求めるオラクルと、
f-族を完全二部グラフに圧縮する語の圧縮リダクションを提供します。

マッチングは 0 始まりの置換のタプル π で表し、左頂点 i を右頂点 π[i]
に対応させます。
"""

# 標準ライブラリ
import itertools
import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from operator import getitem
from typing import NamedTuple

# ローカルモジュール
from cnf import CnfFormula
from config import config
from exceptions import DimensionError, OracleTooLargeError, ReductionTooLargeError
from family import FamilyFunction, Selector, WeightSet, cnf_to_families
from weave import build_permutation, word_rank, words

logger = logging.getLogger(f"{config.LOGGER_NAME}.matching")

Matching = tuple[int, ...]


@dataclass(frozen=True)
class WeightedBipartiteGraph:
    """
    辺に非負整数の重みを持つ完全二部グラフ K_{n,n}

    Attributes:
        weights: n×n の重み表（行が左頂点、列が右頂点）
    """

    weights: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.weights)
        if n < 1:
            raise DimensionError("頂点数は 1 以上が必要です")
        for index, row in enumerate(self.weights, start=1):
            if len(row) != n:
                raise DimensionError(f"重み表の行 {index} の長さ {len(row)} が {n} と一致しません")
            if any(value < 0 for value in row):
                raise DimensionError(f"重み表の行 {index} に負の値があります")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "WeightedBipartiteGraph":
        return cls(tuple(tuple(int(value) for value in row) for row in rows))

    @property
    def side(self) -> int:
        return len(self.weights)

    @property
    def max_weight(self) -> int:
        return max(max(row) for row in self.weights)

    def weight(self, left: int, right: int) -> int:
        """w(v¹_left, v²_right)（どちらも1始まり）"""
        return self.weights[left - 1][right - 1]

    def matching_weight(self, matching: Sequence[int]) -> int:
        if sorted(matching) != list(range(self.side)):
            raise DimensionError(f"{tuple(matching)} は [0, {self.side}) の置換ではありません")
        return sum(map(getitem, self.weights, matching))


@dataclass(frozen=True)
class ReductionTrace:
    """
    語の圧縮の記録

    Attributes:
        source_rows: 元の表の行数 a
        k: アルファベットの大きさ（表の列数）
        b: b·k^{b−1} ≥ a を満たす最小の正整数
        c: b·k^{b−1}
        beta: 語の順位ごとの位置 → [c] の値（ŵ_i ≠ 1̂ の位置は None）
    """

    source_rows: int
    k: int
    b: int
    c: int
    beta: tuple[tuple[int | None, ...], ...]

    @property
    def side(self) -> int:
        return self.k**self.b

    def is_minimal(self) -> bool:
        """(b−1)·k^{b−2} < a ≤ b·k^{b−1} を確かめる（b = 1 では左側は自明）"""
        upper = self.source_rows <= self.c
        if self.b == 1:
            return upper
        return upper and (self.b - 1) * self.k ** (self.b - 2) < self.source_rows


class CommonMatching(NamedTuple):
    """最小の共通マッチング重みと、それを与える二つのマッチング"""

    weight: int
    matching_1: Matching
    matching_2: Matching


def _check_factorial(graph: WeightedBipartiteGraph, budget: int | None) -> None:
    limit = config.resolve_budget(budget)
    required = math.factorial(graph.side)
    if required > limit:
        raise OracleTooLargeError(f"マッチングの列挙: {graph.side}! 通りは予算 {limit} を超えます", required, limit)


def matching_witnesses(graph: WeightedBipartiteGraph, budget: int | None = None) -> dict[int, Matching]:
    """
    各マッチング重みに、それを与える辞書式最小の置換を対応させる

    Raises:
        OracleTooLargeError: n! が予算を超える場合
    """
    _check_factorial(graph, budget)
    rows = graph.weights
    witnesses: dict[int, Matching] = {}
    for permutation in itertools.permutations(range(graph.side)):
        witnesses.setdefault(sum(map(getitem, rows, permutation)), permutation)
    return witnesses


def matching_weight_set(graph: WeightedBipartiteGraph, budget: int | None = None) -> WeightSet:
    """
    完全マッチングの重み集合 {Σ_i w(i, π(i))} を求める

    Returns:
        昇順・重複なしの重みの列

    Raises:
        OracleTooLargeError: n! が予算を超える場合

    Examples:
        >>> matching_weight_set(WeightedBipartiteGraph.from_rows([[5, 9], [0, 0]]))
        (5, 9)
    """
    return tuple(sorted(matching_witnesses(graph, budget)))


def cmw_oracle(graph_1: WeightedBipartiteGraph, graph_2: WeightedBipartiteGraph, budget: int | None = None) -> CommonMatching | None:
    """
    重みの等しい完全マッチングの組を総当たりで探す

    Returns:
        最小の共通重みとそのマッチング、存在しない場合は None

    Raises:
        OracleTooLargeError: どちらかの n! が予算を超える場合
    """
    witnesses_1 = matching_witnesses(graph_1, budget)
    witnesses_2 = matching_witnesses(graph_2, budget)
    common = witnesses_1.keys() & witnesses_2.keys()
    logger.debug(f"CMWオラクル: 重みの種類 {len(witnesses_1)} と {len(witnesses_2)}, 共通 {len(common)}")
    if not common:
        return None
    weight = min(common)
    return CommonMatching(weight, witnesses_1[weight], witnesses_2[weight])


def minimal_word_length(rows: int, k: int) -> int:
    """
    b·k^{b−1} ≥ rows を満たす最小の正整数 b

    Examples:
        >>> minimal_word_length(4, 2)
        2
    """
    if k < 1:
        raise DimensionError(f"アルファベットの大きさは正でなければなりません: {k}")
    b = 1
    while b * k ** (b - 1) < rows:
        b += 1
    return b


def _canonical_beta(k: int, b: int) -> tuple[tuple[int | None, ...], ...]:
    # 語を順位順、位置を昇順に走査し、1̂ の位置に 1, 2, 3, … を割り当てる
    counter = itertools.count(1)
    return tuple(tuple(next(counter) if letter == 1 else None for letter in word) for word in words(k, b))


def family_to_graph(f: FamilyFunction, budget: int | None = None) -> tuple[WeightedBipartiteGraph, ReductionTrace]:
    """
    表 f:[a]×[k] を、マッチング重み集合が X_f に等しい K_{k^b,k^b} に変換する

    f をゼロ行で c = b·k^{b−1} 行に拡張し、正準な β を作り、
    weight(t̂, u) = Σ_{i: β(t̂,i)≠⊥} f(β(t̂,i), u_i) とします。

    Args:
        f: 表（列数 k がアルファベットの大きさ）
        budget: グラフの片側の頂点数 k^b の上限

    Returns:
        (グラフ, 記録)。matching_weight_set(グラフ) = family_set(f)

    Raises:
        ReductionTooLargeError: k^b が予算を超える場合
    """
    k = f.columns
    b = minimal_word_length(f.row_count, k)
    c = b * k ** (b - 1)
    side = k**b
    limit = config.resolve_budget(budget)
    if side > limit:
        raise ReductionTooLargeError(f"語の圧縮: 頂点数 {k}^{b} は予算 {limit} を超えます", side, limit)

    extended = f.padded(c)
    beta = _canonical_beta(k, b)
    codomain = list(words(k, b))
    weights = []
    for prescribed in beta:
        marked = [(position, row) for position, row in enumerate(prescribed) if row is not None]
        weights.append(tuple(sum(extended.value(row, target[position]) for position, row in marked) for target in codomain))

    trace = ReductionTrace(f.row_count, k, b, c, beta)
    logger.info(f"FI → CMW: a={f.row_count}, k={k}, b={b}, c={c}, 頂点数 {side}")
    return WeightedBipartiteGraph(tuple(weights)), trace


def selector_to_matching(trace: ReductionTrace, f: FamilyFunction, selector: Sequence[int]) -> Matching:
    """
    セレクタ σ を、重みが Σ_i f(i, σ(i)) に等しい完全マッチングに変換する

    α(û, i) = σ(β(û, i)) を 1̂ の位置に指定して build_permutation を呼び、
    得た置換 φ をマッチング û ↦ φ(û) として返します。長さ a のセレクタは
    ゼロ行に列 1 を選んで c に延ばします。

    Raises:
        DimensionError: 表・セレクタ・記録の次元が合わない場合
    """
    if f.columns != trace.k or f.row_count != trace.source_rows:
        raise DimensionError(f"表 {f.row_count}×{f.columns} は記録 (a={trace.source_rows}, k={trace.k}) と一致しません")
    if len(selector) == trace.source_rows:
        chosen: Selector = tuple(selector) + (1,) * (trace.c - trace.source_rows)
    elif len(selector) == trace.c:
        chosen = tuple(selector)
    else:
        raise DimensionError(f"セレクタの長さ {len(selector)} は a={trace.source_rows} でも c={trace.c} でもありません")
    if any(not 1 <= choice <= trace.k for choice in chosen):
        raise DimensionError(f"セレクタの値は [1, {trace.k}] の範囲です")

    alpha = {word: tuple(None if row is None else chosen[row - 1] for row in prescribed) for word, prescribed in zip(words(trace.k, trace.b), trace.beta, strict=True)}
    permutation = build_permutation(alpha, trace.k, trace.b)
    return permutation.forward


def cnf_to_cmw(formula: CnfFormula, budget: int | None = None) -> tuple[WeightedBipartiteGraph, WeightedBipartiteGraph]:
    """
    CNF論理式を Common Matching Weight のインスタンスに変換する

    Returns:
        (G1, G2)。片側の頂点数は k=2 と k=2^width−1 に対する k^b

    Raises:
        ReductionTooLargeError: k^b が予算を超える場合
    """
    f, g = cnf_to_families(formula)
    graph_1, _ = family_to_graph(f, budget)
    graph_2, _ = family_to_graph(g, budget)
    return graph_1, graph_2


def matching_word_pairs(trace: ReductionTrace, matching: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """マッチングを (定義域の語, 値域の語) の対の列として読む"""
    domain = list(words(trace.k, trace.b))
    return [(word, domain[matching[word_rank(word, trace.k)]]) for word in domain]
