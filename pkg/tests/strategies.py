"""
テスト用の hypothesis ストラテジー
"""

from hypothesis import strategies as st

from channel import CaInstance
from cnf import CnfFormula
from family import FamilyFunction
from matching import WeightedBipartiteGraph


@st.composite
def formulas(draw: st.DrawFn, width: int = 3, max_variables: int = 4, max_clauses: int = 3) -> CnfFormula:
    """幅が一定のランダムな論理式"""
    n = draw(st.integers(1, max_variables))
    literal = st.tuples(st.integers(1, n), st.booleans())
    clauses = draw(st.lists(st.tuples(*[literal] * width), max_size=max_clauses))
    return CnfFormula(n, tuple(clauses), width)


@st.composite
def family_functions(draw: st.DrawFn, max_rows: int = 4, max_columns: int = 3, max_value: int = 20) -> FamilyFunction:
    """ランダムな表 f:[a]×[k]→ℕ"""
    rows = draw(st.integers(0, max_rows))
    columns = draw(st.integers(1, max_columns))
    table = draw(st.lists(st.lists(st.integers(0, max_value), min_size=columns, max_size=columns), min_size=rows, max_size=rows))
    return FamilyFunction.from_rows(table, columns)


@st.composite
def graphs(draw: st.DrawFn, max_side: int = 4, max_weight: int = 5) -> WeightedBipartiteGraph:
    """ランダムな完全二部グラフ"""
    side = draw(st.integers(1, max_side))
    row = st.lists(st.integers(0, max_weight), min_size=side, max_size=side)
    return WeightedBipartiteGraph.from_rows(draw(st.lists(row, min_size=side, max_size=side)))


@st.composite
def ca_instances(draw: st.DrawFn, max_vertices: int = 3, max_distance: int = 5, max_span: int = 6) -> CaInstance:
    """頂点 x0, x1, … を持つランダムな CA インスタンス"""
    count = draw(st.integers(1, max_vertices))
    vertices = [f"x{index}" for index in range(count)]
    triples = [(vertices[i], vertices[j], draw(st.integers(0, max_distance))) for i in range(count) for j in range(i + 1, count)]
    return CaInstance.build(vertices, triples, draw(st.integers(1, max_span)))
