"""
Channel Assignment

Channel Assignment のインスタンス I = (V, d, s)、適正彩色の判定、
検証用オラクルとしての厳密ソルバーを提供します。

厳密ソルバーは頂点の順序を分枝とする分枝限定法です。最適彩色を色で
並べた順序に左詰め配置を施すと最適スパンが得られるので、全順序の
最小値を取れば厳密になります。
"""

# 標準ライブラリ
import itertools
import logging
import time
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

# ローカルモジュール
from config import config
from exceptions import ColoringError, DimensionError, OracleTooLargeError, RigidityError, SolverBudgetError

logger = logging.getLogger(f"{config.LOGGER_NAME}.channel")

# 向きの正規化に使うハンドルの組（先に見つかったものを使う）
ORIENTATION_ROLES = (("vL", "vR"), ("wL1", "wR1"), ("wL", "wR"))


@dataclass(frozen=True)
class CaInstance:
    """
    Channel Assignment のインスタンス

    Attributes:
        vertices: 頂点の識別子（順序付き）
        distances: 0 でない最小距離 {frozenset({x, y}): d(x, y)}
        span_bound: スパンの上限 s
        handles: 役割名 → 頂点の識別子（vL, vR, vM, wL1, … など）
    """

    vertices: tuple[str, ...]
    distances: Mapping[frozenset[str], int]
    span_bound: int
    handles: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        vertices: Iterable[str],
        distances: Iterable[tuple[str, str, int]],
        span_bound: int,
        handles: Mapping[str, str] | None = None,
    ) -> "CaInstance":
        """
        頂点列と (x, y, d) の列からインスタンスを作る

        同じ組が複数回現れる場合は値が一致しなければなりません。0 の距離は
        保持しません（未記載の組と同じ意味です）。

        Raises:
            DimensionError: 頂点が無い、未知の頂点、自己ループ、負の距離、値の衝突、不正なスパン上限
        """
        ordered = tuple(vertices)
        known = set(ordered)
        if not ordered:
            raise DimensionError("頂点の無いインスタンスは作れません")
        if len(known) != len(ordered):
            raise DimensionError("頂点の識別子が重複しています")
        if span_bound < 1:
            raise DimensionError(f"スパンの上限は正でなければなりません: {span_bound}")
        table: dict[frozenset[str], int] = {}
        for x, y, value in distances:
            if x not in known or y not in known:
                raise DimensionError(f"未知の頂点です: {x!r}, {y!r}")
            if x == y:
                if value != 0:
                    raise DimensionError(f"d({x}, {x}) は 0 でなければなりません")
                continue
            if value < 0:
                raise DimensionError(f"d({x}, {y}) = {value} は負です")
            key = frozenset((x, y))
            previous = table.get(key, 0)
            if key in table and previous != value:
                raise DimensionError(f"d({x}, {y}) に異なる値 {previous} と {value} があります")
            if value:
                table[key] = value
        roles = dict(handles or {})
        for role, vertex in roles.items():
            if vertex not in known:
                raise DimensionError(f"ハンドル {role} の頂点 {vertex!r} がありません")
        return cls(ordered, table, span_bound, roles)

    def distance(self, x: str, y: str) -> int:
        if x == y:
            return 0
        return self.distances.get(frozenset((x, y)), 0)

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def max_distance(self) -> int:
        """ℓ = max d"""
        return max(self.distances.values(), default=0)

    @cached_property
    def position(self) -> dict[str, int]:
        return {vertex: index for index, vertex in enumerate(self.vertices)}

    def triples(self) -> list[tuple[str, str, int]]:
        """0 でない距離を頂点順に (x, y, d) で並べる"""
        result = []
        for key, value in self.distances.items():
            x, y = sorted(key, key=self.position.__getitem__)
            result.append((x, y, value))
        result.sort(key=lambda item: (self.position[item[0]], self.position[item[1]]))
        return result

    def renamed(self, mapping: Mapping[str, str]) -> "CaInstance":
        """頂点の識別子を付け替える（mapping に無い頂点はそのまま）"""
        rename = lambda vertex: mapping.get(vertex, vertex)  # noqa: E731
        return CaInstance.build(
            (rename(vertex) for vertex in self.vertices),
            ((rename(x), rename(y), value) for x, y, value in self.triples()),
            self.span_bound,
            {role: rename(vertex) for role, vertex in self.handles.items()},
        )

    def with_handles(self, handles: Mapping[str, str]) -> "CaInstance":
        return CaInstance.build(self.vertices, self.triples(), self.span_bound, handles)


@dataclass(frozen=True)
class Coloring:
    """
    彩色 c: V → ℤ

    Attributes:
        colors: 頂点の識別子 → 色
    """

    colors: Mapping[str, int]

    def __getitem__(self, vertex: str) -> int:
        return self.colors[vertex]

    def __len__(self) -> int:
        return len(self.colors)

    @property
    def span(self) -> int:
        return span_of(self)

    def shifted(self, delta: int) -> "Coloring":
        return Coloring({vertex: color + delta for vertex, color in self.colors.items()})

    def reflected(self) -> "Coloring":
        """c'(x) = max + min − c(x)（最小色と最大色は保たれる）"""
        low, high = min(self.colors.values()), max(self.colors.values())
        return Coloring({vertex: low + high - color for vertex, color in self.colors.items()})

    def normalized(self, orientation: tuple[str, str] | None = None) -> "Coloring":
        """
        最小色を 1 に平行移動し、orientation = (x, y) があれば c(x) ≤ c(y) に向きを揃える
        """
        coloring = self.shifted(1 - min(self.colors.values()))
        if orientation is not None and coloring[orientation[0]] > coloring[orientation[1]]:
            coloring = coloring.reflected()
        return coloring

    def key(self, vertices: Sequence[str]) -> tuple[int, ...]:
        return tuple(self.colors[vertex] for vertex in vertices)


class Violation(NamedTuple):
    """最初に見つかった距離制約違反"""

    x: str
    y: str
    required: int
    actual: int


class SolveResult(NamedTuple):
    """
    厳密ソルバーの結果

    span が None の場合は上限 cap 以下の適正彩色が存在しません（exceeds_cap）。
    """

    span: int | None
    ordering: tuple[str, ...] | None
    coloring: Coloring | None
    nodes: int

    @property
    def exceeds_cap(self) -> bool:
        return self.span is None


class YesColorings(NamedTuple):
    """
    正規化したYES彩色の列挙結果

    rigid が False の場合、スパンが s 未満の貪欲彩色があり、件数は下界に過ぎません。
    """

    colorings: tuple[Coloring, ...]
    rigid: bool


def _check_total(instance: CaInstance, coloring: Coloring) -> None:
    missing = [vertex for vertex in instance.vertices if vertex not in coloring.colors]
    if missing:
        raise ColoringError(f"彩色されていない頂点があります: {missing[:5]}")


def is_proper(instance: CaInstance, coloring: Coloring) -> tuple[bool, Violation | None]:
    """
    彩色が適正か（全ての x ≠ y で |c(x) − c(y)| ≥ d(x, y)）を判定する

    Returns:
        (適正か, 頂点順で最初の違反)

    Raises:
        ColoringError: 彩色が全域でない場合
    """
    _check_total(instance, coloring)
    for x, y, required in instance.triples():
        actual = abs(coloring[x] - coloring[y])
        if actual < required:
            return False, Violation(x, y, required, actual)
    return True, None


def span_of(coloring: Coloring) -> int:
    """
    スパン max c − min c + 1 を返す

    Raises:
        ColoringError: 彩色が空の場合
    """
    if not coloring.colors:
        raise ColoringError("空の彩色のスパンは定義されません")
    values = coloring.colors.values()
    return max(values) - min(values) + 1


def orientation_pair(instance: CaInstance) -> tuple[str, str] | None:
    """向きの正規化に使う頂点の組（ハンドルが無ければ None）"""
    for left, right in ORIENTATION_ROLES:
        if left in instance.handles and right in instance.handles:
            return instance.handles[left], instance.handles[right]
    return None


def greedy_for_order(instance: CaInstance, ordering: Sequence[str]) -> Coloring:
    """
    順序に沿って左詰めに色を置く

    c(o_1) = 1、c(o_i) = max(c(o_{i−1}), max_{j<i} c(o_j) + d(o_j, o_i)) とします。
    結果は適正で順序に沿って単調であり、そのような彩色の中で成分ごとに最小です。

    Raises:
        DimensionError: ordering が頂点集合の置換でない場合
    """
    if sorted(ordering) != sorted(instance.vertices):
        raise DimensionError("順序が頂点集合の置換ではありません")
    colors: dict[str, int] = {}
    last = 1
    for vertex in ordering:
        color = last
        for placed, placed_color in colors.items():
            color = max(color, placed_color + instance.distance(placed, vertex))
        colors[vertex] = color
        last = color
    return Coloring(colors)


class _Search:
    """頂点の順序を分枝とする深さ優先探索の状態"""

    def __init__(self, instance: CaInstance, node_budget: int, time_limit: float | None) -> None:
        self.names = tuple(sorted(instance.vertices))
        size = len(self.names)
        self.matrix = [[instance.distance(x, y) for y in self.names] for x in self.names]
        # 距離の大きい順の組。両端が未配置の組から下界を作る
        self.pairs = sorted(
            ((self.matrix[i][j], i, j) for i in range(size) for j in range(i + 1, size) if self.matrix[i][j]),
            reverse=True,
        )
        self.node_budget = node_budget
        self.deadline = None if time_limit is None else time.monotonic() + time_limit
        self.nodes = 0
        self.stack: list[int] = []
        self.colors: list[int] = [0] * size

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise SolverBudgetError(f"探索ノード数が上限 {self.node_budget} に達しました", self.nodes, self.node_budget)
        if self.deadline is not None and self.nodes % 1024 == 0 and time.monotonic() > self.deadline:
            raise SolverBudgetError("探索時間が上限に達しました", self.nodes, self.node_budget)

    def bound(self, mask: int, lowers: list[int], ceiling: int) -> int:
        """
        未配置の頂点から得られるスパンの下界

        各頂点の最小色に加え、両端が未配置の組 (u, v) では
        max(c(u), c(v)) ≥ min(lower_u, lower_v) + d(u, v) を使います。
        """
        unplaced = [v for v in range(len(self.names)) if not mask >> v & 1]
        top = max(lowers[v] for v in unplaced)
        best = top
        if best >= ceiling:
            return best
        for distance, u, v in self.pairs:
            if top + distance <= best:
                break
            if mask >> u & 1 or mask >> v & 1:
                continue
            best = max(best, min(lowers[u], lowers[v]) + distance)
            if best >= ceiling:
                break
        return best

    def children(self, mask: int, last: int, lowers: list[int]) -> list[tuple[int, int]]:
        return [(v, max(last, lowers[v])) for v in range(len(self.names)) if not mask >> v & 1]

    def place(self, vertex: int, color: int, lowers: list[int]) -> list[int]:
        row = self.matrix[vertex]
        return [max(lower, color + row[u]) for u, lower in enumerate(lowers)]


def solve_exact(
    instance: CaInstance,
    cap: int | None = None,
    budget: int | None = None,
    time_limit: float | None = None,
) -> SolveResult:
    """
    最小スパンを分枝限定法で厳密に求める

    頂点を識別子の辞書式順で分枝し、部分順序の下界が既知の最良スパン
    以上、または cap を超える場合に枝を刈ります。同じ状態（配置済み集合と
    未配置頂点の最小色）に再び到達した枝は探索済みとして刈ります。
    見つかる証拠は最適な順序のうち辞書式最小のものです。

    Args:
        instance: インスタンス
        cap: スパンの上限（None の場合は制限なし）
        budget: 探索ノード数の上限（None の場合は設定値）
        time_limit: 実時間の上限（秒、None の場合は設定値）

    Returns:
        最小スパンと証拠。cap 以下の彩色が無い場合は span が None

    Raises:
        SolverBudgetError: ノード数または実時間が上限に達した場合（「cap 超過」とは区別）
        DimensionError: 頂点が無い場合
    """
    node_budget = config.SOLVER_NODE_BUDGET if budget is None else budget
    limit = config.SOLVER_TIME_LIMIT if time_limit is None else time_limit
    search = _Search(instance, node_budget, limit)
    size = len(search.names)
    if size == 0:
        raise DimensionError("頂点の無いインスタンスにはスパンがありません")

    best = cap + 1 if cap is not None else sum(max(row) for row in search.matrix) + 2
    best_order: tuple[int, ...] | None = None
    seen: set[tuple[int, tuple[int, ...]]] = set()
    started = time.monotonic()

    def descend(mask: int, last: int, lowers: list[int]) -> None:
        nonlocal best, best_order
        search.tick()
        if len(search.stack) == size:
            if last < best:
                best, best_order = last, tuple(search.stack)
            return
        options = search.children(mask, last, lowers)
        if search.bound(mask, [max(last, lower) for lower in lowers], best) >= best:
            return
        state = (mask, tuple(color for _, color in options))
        if state in seen:
            return
        seen.add(state)
        for vertex, color in options:
            if color >= best:
                continue
            search.stack.append(vertex)
            descend(mask | 1 << vertex, color, search.place(vertex, color, lowers))
            search.stack.pop()

    descend(0, 1, [1] * size)
    elapsed = time.monotonic() - started

    if best_order is None:
        logger.info(f"厳密解: |V|={size}, cap={cap} 以下の彩色なし ({search.nodes} ノード, {elapsed:.2f} 秒)")
        return SolveResult(None, None, None, search.nodes)
    ordering = tuple(search.names[v] for v in best_order)
    coloring = greedy_for_order(instance, ordering)
    logger.info(f"厳密解: |V|={size}, スパン {best} ({search.nodes} ノード, {elapsed:.2f} 秒)")
    return SolveResult(best, ordering, coloring, search.nodes)


def enumerate_yes_colorings(
    instance: CaInstance,
    budget: int | None = None,
    orientation: tuple[str, str] | None = None,
) -> YesColorings:
    """
    スパン s 以下に収まる貪欲彩色を全て列挙し、正規化して返す

    正規化は最小色 1 と、向きの組 (v_L, v_R) がある場合の c(v_L) ≤ c(v_R) です。
    全てのYES彩色にスラックが無い（剛性がある）場合、貪欲彩色で数え上げは
    完全になります。スパンが s 未満の貪欲彩色があれば rigid は False です。

    Args:
        instance: インスタンス
        budget: 探索ノード数の上限（None の場合は設定値）
        orientation: 向きを揃える頂点の組（None の場合はハンドルから決める）

    Raises:
        SolverBudgetError: 探索ノード数が上限に達した場合
    """
    node_budget = config.SOLVER_NODE_BUDGET if budget is None else budget
    pair = orientation if orientation is not None else orientation_pair(instance)
    search = _Search(instance, node_budget, None)
    size = len(search.names)
    ceiling = instance.span_bound + 1
    found: dict[tuple[int, ...], Coloring] = {}
    rigid = True

    def descend(mask: int, last: int, lowers: list[int]) -> None:
        nonlocal rigid
        search.tick()
        if len(search.stack) == size:
            coloring = Coloring({search.names[v]: search.colors[v] for v in search.stack}).normalized(pair)
            if last < instance.span_bound:
                rigid = False
            found.setdefault(coloring.key(instance.vertices), coloring)
            return
        if search.bound(mask, [max(last, lower) for lower in lowers], ceiling) >= ceiling:
            return
        for vertex, color in search.children(mask, last, lowers):
            if color >= ceiling:
                continue
            search.stack.append(vertex)
            search.colors[vertex] = color
            descend(mask | 1 << vertex, color, search.place(vertex, color, lowers))
            search.stack.pop()

    if size:
        descend(0, 1, [1] * size)
    colorings = tuple(found[key] for key in sorted(found))
    logger.info(f"YES彩色の列挙: |V|={size}, {len(colorings)} 通り, rigid={rigid} ({search.nodes} ノード)")
    return YesColorings(colorings, rigid)


def check_spanned(instance: CaInstance, x: str, y: str, budget: int | None = None) -> bool:
    """
    インスタンスが (x, y)-spanned か（全YES彩色で |c(x) − c(y)| = s − 1）を判定する

    列挙したYES彩色に反例があれば False を返します。反例が無くても
    列挙に剛性が無い場合は結論を出せません。

    Raises:
        RigidityError: 反例が無いが列挙が完全である保証が無い場合
        SolverBudgetError: 列挙の探索ノード数が上限に達した場合
    """
    result = enumerate_yes_colorings(instance, budget)
    target = instance.span_bound - 1
    if any(abs(coloring[x] - coloring[y]) != target for coloring in result.colorings):
        return False
    if not result.rigid:
        raise RigidityError(f"({x}, {y})-spanned の判定: 列挙にスラックがあり完全ではありません")
    return True


def brute_force_colorings(instance: CaInstance, budget: int | None = None) -> list[Coloring]:
    """
    色を [1, s] に限った全ての適正彩色（＝平行移動を除いた全YES彩色）を列挙する

    Raises:
        OracleTooLargeError: s^|V| が予算を超える場合
    """
    limit = config.resolve_budget(budget)
    required = instance.span_bound**instance.vertex_count
    if required > limit:
        raise OracleTooLargeError(f"彩色の総当たり: {instance.span_bound}^{instance.vertex_count} 通りは予算 {limit} を超えます", required, limit)
    triples = [(instance.position[x], instance.position[y], value) for x, y, value in instance.triples()]
    result = []
    for colors in itertools.product(range(1, instance.span_bound + 1), repeat=instance.vertex_count):
        if all(abs(colors[i] - colors[j]) >= value for i, j, value in triples):
            result.append(Coloring(dict(zip(instance.vertices, colors, strict=True))))
    return result


def brute_force_min_span(instance: CaInstance, budget: int | None = None) -> int | None:
    """[1, s] の総当たりで得られる最小スパン（YES彩色が無ければ None）"""
    spans = [coloring.span for coloring in brute_force_colorings(instance, budget)]
    return min(spans, default=None)
