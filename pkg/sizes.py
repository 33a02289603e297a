"""
サイズ統計

このモジュールはリダクション連鎖の各段のインスタンスサイズを集計し、
サイズの恒等式（k^b の最小性、片側 k^b 頂点、8n₁+8n₂+1 頂点）を確認します。
"""

# 標準ライブラリ
import logging
from dataclasses import asdict, dataclass

# サードパーティライブラリ
import pandas as pd

# ローカルモジュール
from channel import CaInstance
from cnf import CnfFormula
from config import config
from family import cnf_to_families
from gadget import MergedGadget, cmw_to_ca
from matching import ReductionTrace, WeightedBipartiteGraph, family_to_graph

logger = logging.getLogger(f"{config.LOGGER_NAME}.sizes")

# 表示用の項目名
STAT_LABELS = {
    "variables": "変数の数 n",
    "clauses": "節の数 m",
    "width": "節の幅",
    "occurrences": "出現の数",
    "rows_1": "f の行数 a₁",
    "alphabet_1": "f の列数 k₁",
    "word_length_1": "b₁",
    "side_1": "G₁ の片側頂点数 k₁^b₁",
    "minimal_1": "b₁ の最小性",
    "rows_2": "g の行数 a₂",
    "alphabet_2": "g の列数 k₂",
    "word_length_2": "b₂",
    "side_2": "G₂ の片側頂点数 k₂^b₂",
    "minimal_2": "b₂ の最小性",
    "ca_vertices": "CA の頂点数",
    "max_distance": "最大距離 ℓ",
    "span_bound": "スパン上限 s",
    "bit_size": "ビットサイズ r",
}


@dataclass(frozen=True)
class ReductionSizes:
    """リダクション連鎖の各段のサイズ"""

    variables: int
    clauses: int
    width: int
    occurrences: int
    rows_1: int
    alphabet_1: int
    word_length_1: int
    side_1: int
    minimal_1: bool
    rows_2: int
    alphabet_2: int
    word_length_2: int
    side_2: int
    minimal_2: bool
    ca_vertices: int
    max_distance: int
    span_bound: int
    bit_size: int


def bit_size(instance: CaInstance) -> int:
    """0 でない距離のビット長の和にスパン上限のビット長を足した値"""
    return sum(value.bit_length() for value in instance.distances.values()) + instance.span_bound.bit_length()


def sizes_from_artifacts(
    formula: CnfFormula,
    graphs: tuple[WeightedBipartiteGraph, WeightedBipartiteGraph],
    traces: tuple[ReductionTrace, ReductionTrace],
    merged: MergedGadget,
) -> ReductionSizes:
    (g1, g2), (t1, t2) = graphs, traces
    return ReductionSizes(
        variables=formula.variable_count,
        clauses=formula.clause_count,
        width=formula.width,
        occurrences=formula.occurrence_count,
        rows_1=t1.source_rows,
        alphabet_1=t1.k,
        word_length_1=t1.b,
        side_1=g1.side,
        minimal_1=t1.is_minimal(),
        rows_2=t2.source_rows,
        alphabet_2=t2.k,
        word_length_2=t2.b,
        side_2=g2.side,
        minimal_2=t2.is_minimal(),
        ca_vertices=merged.instance.vertex_count,
        max_distance=merged.instance.max_distance,
        span_bound=merged.span_bound,
        bit_size=bit_size(merged.instance),
    )


def reduction_sizes(formula: CnfFormula, budget: int | None = None) -> ReductionSizes:
    """
    論理式をリダクション連鎖に通し、各段のサイズを集計する

    Raises:
        ReductionTooLargeError: グラフの片側 k^b が予算を超える場合
    """
    f, g = cnf_to_families(formula)
    g1, t1 = family_to_graph(f, budget)
    g2, t2 = family_to_graph(g, budget)
    merged = cmw_to_ca(g1, g2)
    sizes = sizes_from_artifacts(formula, (g1, g2), (t1, t2), merged)
    logger.info(f"サイズ集計: n={sizes.variables}, m={sizes.clauses}, 片側 {sizes.side_1} と {sizes.side_2}, CA {sizes.ca_vertices} 頂点")
    return sizes


def size_identity_violations(sizes: ReductionSizes) -> list[str]:
    """
    成り立たないサイズの恒等式を列挙する

    Returns:
        違反の説明のリスト（空なら全て成立）
    """
    violations = []
    for index in (1, 2):
        k, b, side = getattr(sizes, f"alphabet_{index}"), getattr(sizes, f"word_length_{index}"), getattr(sizes, f"side_{index}")
        if side != k**b:
            violations.append(f"G{index} の片側頂点数 {side} が k^b = {k}^{b} と一致しません")
        if not getattr(sizes, f"minimal_{index}"):
            violations.append(f"b{index} = {b} が最小ではありません")
    expected = 8 * sizes.side_1 + 8 * sizes.side_2 + 1
    if sizes.ca_vertices != expected:
        violations.append(f"CA の頂点数 {sizes.ca_vertices} が 8n₁+8n₂+1 = {expected} と一致しません")
    if sizes.max_distance > sizes.span_bound:
        violations.append(f"最大距離 {sizes.max_distance} がスパン上限 {sizes.span_bound} を超えます")
    if sizes.occurrences != sizes.width * sizes.clauses:
        violations.append(f"出現の数 {sizes.occurrences} が width·m と一致しません")
    return violations


def stats_frame(sizes: ReductionSizes) -> pd.DataFrame:
    """サイズを (項目, 値) の表にする"""
    rows = [(STAT_LABELS[key], value) for key, value in asdict(sizes).items()]
    return pd.DataFrame(rows, columns=["項目", "値"])
