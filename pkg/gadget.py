"""
Channel Assignment のガジェット

完全二部グラフから (v_L, v_R)-spanned なインスタンスを作る構成、
extend と merge の二つの結合子、そして二つのグラフから一つの
インスタンスを作る Common Matching Weight → Channel Assignment の
リダクションを提供します。

ガジェットの頂点は v1…v{4n}, w1…w{2n−1}, a1…an, b1…bn です。
区間 i = (c(v_{2i−1}), c(v_{2i})) に a_{π(i)+1} が入るとき、π を 0 始まりの
タプルで表します。
"""

# 標準ライブラリ
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

# ローカルモジュール
from channel import CaInstance, Coloring, is_proper
from config import config
from exceptions import ColoringError, DimensionError, GadgetError
from matching import WeightedBipartiteGraph

logger = logging.getLogger(f"{config.LOGGER_NAME}.gadget")

SHARED_MIDDLE = "vM"
GADGET_PREFIXES = ("g1.", "g2.")
MERGED_ROLES = ("vM", "wL1", "wR1", "wL2", "wR2")


@dataclass(frozen=True)
class GadgetConstants:
    """
    ガジェットの定数

    Attributes:
        n: グラフの片側の頂点数
        m: 辺の重みの最大値
        M: n·m + 1
        l: (4n − 1)·M（v_L から v_M までの基本のずれ）
        s: (8n − 1)·M（スパンの上限）
    """

    n: int
    m: int
    M: int
    l: int  # noqa: E741
    s: int

    def __post_init__(self) -> None:
        if self.M <= self.n * self.m:
            raise GadgetError(f"M={self.M} は n·m={self.n * self.m} より大きくなければなりません")
        if (4 * self.n - 1) * 2 * self.M + self.n * self.m != self.s - 1:
            raise GadgetError(f"(4n−1)·2M + n·m = s − 1 が成り立ちません: n={self.n}, m={self.m}")

    @classmethod
    def for_graph(cls, graph: WeightedBipartiteGraph) -> "GadgetConstants":
        n, m = graph.side, graph.max_weight
        big = n * m + 1
        return cls(n=n, m=m, M=big, l=(4 * n - 1) * big, s=(8 * n - 1) * big)


@dataclass(frozen=True)
class Gadget:
    """
    一つのグラフから作ったガジェット

    Attributes:
        instance: 8n − 1 頂点のインスタンス（ハンドル vL, vR, vM 付き）
        constants: ガジェットの定数
        graph: 元のグラフ
    """

    instance: CaInstance
    constants: GadgetConstants
    graph: WeightedBipartiteGraph

    @property
    def n(self) -> int:
        return self.constants.n


@dataclass(frozen=True)
class MergedGadget:
    """
    二つのガジェットを v_M で重ね、extend と merge でまとめたインスタンス

    Attributes:
        instance: 8n₁ + 8n₂ + 1 頂点のインスタンス（ハンドル vM, wL1, wR1, wL2, wR2 付き）
        gadgets: 元の二つのガジェット
        l_max: max(l₁, l₂)
        extensions: 各ガジェットに使った (l, r)
    """

    instance: CaInstance
    gadgets: tuple[Gadget, Gadget]
    l_max: int
    extensions: tuple[tuple[int, int], tuple[int, int]]

    @property
    def span_bound(self) -> int:
        return self.instance.span_bound

    @cached_property
    def renaming(self) -> tuple[dict[str, str], dict[str, str]]:
        """各ガジェットの頂点名 → まとめたインスタンスでの頂点名"""
        return tuple(_prefix_mapping(gadget, prefix) for gadget, prefix in zip(self.gadgets, GADGET_PREFIXES, strict=True))  # type: ignore[return-value]


def _gadget_distances(graph: WeightedBipartiteGraph, constants: GadgetConstants) -> Iterable[tuple[str, str, int]]:
    n, m, big, s = constants.n, constants.m, constants.M, constants.s
    top = 4 * n
    for i in range(1, top + 1):
        for j in range(i + 1, top + 1):
            yield f"v{i}", f"v{j}", s - 1 if (i, j) == (1, top) else (j - i) * 2 * big
    for i in range(1, 2 * n):
        for j in range(1, top + 1):
            yield f"w{i}", f"v{j}", abs(4 * i + 1 - 2 * j) * big
    for i in range(1, n + 1):
        for j in range(1, top + 1):
            if j <= 2 * n:
                a_value = big + graph.weight(i, j // 2) if j % 2 == 0 else big
                b_value = (2 * n - j + 1) * 2 * big + big
            else:
                a_value = (j - 2 * n) * 2 * big + big
                b_value = big + m - graph.weight(i, j // 2 - n) if j % 2 == 0 else big
            yield f"a{i}", f"v{j}", a_value
            yield f"b{i}", f"v{j}", b_value
        for j in range(1, 2 * n):
            yield f"a{i}", f"w{j}", 2 * big
            yield f"b{i}", f"w{j}", 2 * big
        for j in range(i + 1, n + 1):
            yield f"a{i}", f"a{j}", 4 * big
            yield f"b{i}", f"b{j}", 4 * big
        yield f"a{i}", f"b{i}", n * 4 * big


def matchings_to_ca(graph: WeightedBipartiteGraph) -> Gadget:
    """
    グラフ G から (v_L, v_R)-spanned なガジェットを作る

    全てのYES彩色で c(v_M) − c(v_L) − l は G のある完全マッチングの重みに
    等しく、逆に全ての完全マッチングの重みがこの形で実現されます。

    Examples:
        >>> gadget = matchings_to_ca(WeightedBipartiteGraph.from_rows([[2]]))
        >>> gadget.constants.s, gadget.instance.distance("a1", "b1")
        (21, 12)
    """
    constants = GadgetConstants.for_graph(graph)
    n = constants.n
    vertices = (
        [f"v{i}" for i in range(1, 4 * n + 1)]
        + [f"w{i}" for i in range(1, 2 * n)]
        + [f"a{i}" for i in range(1, n + 1)]
        + [f"b{i}" for i in range(1, n + 1)]
    )
    handles = {"vL": "v1", "vR": f"v{4 * n}", "vM": f"w{n}"}
    instance = CaInstance.build(vertices, _gadget_distances(graph, constants), constants.s, handles)
    if instance.vertex_count != 8 * n - 1:
        raise GadgetError(f"ガジェットの頂点数 {instance.vertex_count} が 8n−1 = {8 * n - 1} と一致しません")
    logger.debug(f"ガジェット: n={n}, m={constants.m}, M={constants.M}, l={constants.l}, s={constants.s}")
    return Gadget(instance, constants, graph)


def _check_permutation(gadget: Gadget, pi: Sequence[int]) -> None:
    if sorted(pi) != list(range(gadget.n)):
        raise DimensionError(f"{tuple(pi)} は [0, {gadget.n}) の置換ではありません")


def claim_sequence(gadget: Gadget, pi: Sequence[int]) -> list[str]:
    """
    π に対応する頂点の並び

    v_1, a_{π(1)}, v_2, w_1, …, v_{2n}, w_n, v_{2n+1}, b_{π(1)}, v_{2n+2}, w_{n+1}, …, v_{4n}
    """
    _check_permutation(gadget, pi)
    n = gadget.n
    sequence = []
    for i in range(1, n + 1):
        sequence += [f"v{2 * i - 1}", f"a{pi[i - 1] + 1}", f"v{2 * i}", f"w{i}"]
    for i in range(1, n + 1):
        sequence += [f"v{2 * n + 2 * i - 1}", f"b{pi[i - 1] + 1}", f"v{2 * n + 2 * i}"]
        if i < n:
            sequence.append(f"w{n + i}")
    return sequence


def claim_coloring(gadget: Gadget, pi: Sequence[int]) -> Coloring:
    """
    π に対応するYES彩色を作る

    claim_sequence の並びに沿って c(v_1) = 1、次の色 = 前の色 + d(前, 次) とします。
    結果は適正でスパンはちょうど s、c(v_M) − c(v_L) = l + Σ_i w(π(i), i) です。

    Raises:
        DimensionError: π が置換でない場合
    """
    sequence = claim_sequence(gadget, pi)
    colors = {sequence[0]: 1}
    for previous, current in zip(sequence, sequence[1:], strict=False):
        colors[current] = colors[previous] + gadget.instance.distance(previous, current)
    return Coloring(colors)


def matching_offset(gadget: Gadget, pi: Sequence[int]) -> int:
    """l + Σ_i w(π(i), i)（claim_coloring での c(v_M) − c(v_L)）"""
    _check_permutation(gadget, pi)
    return gadget.constants.l + sum(gadget.graph.weight(pi[i] + 1, i + 1) for i in range(gadget.n))


def extract_permutation(gadget: Gadget, coloring: Coloring) -> tuple[int, ...]:
    """
    YES彩色から区間ごとの a 頂点を読み取り、π を返す

    c(v_L) > c(v_R) の彩色は反転してから読みます。

    Raises:
        ColoringError: v の色が狭義単調でない、または区間の a 頂点がちょうど一つでない場合
    """
    n = gadget.n
    handles = gadget.instance.handles
    if coloring[handles["vL"]] > coloring[handles["vR"]]:
        coloring = coloring.reflected()
    v_colors = [coloring[f"v{i}"] for i in range(1, 4 * n + 1)]
    if any(left >= right for left, right in zip(v_colors, v_colors[1:], strict=False)):
        raise ColoringError("v 頂点の色が狭義単調増加ではありません")

    pi = []
    for i in range(1, n + 1):
        low, high = coloring[f"v{2 * i - 1}"], coloring[f"v{2 * i}"]
        inside = [j for j in range(1, n + 1) if low < coloring[f"a{j}"] < high]
        if len(inside) != 1:
            raise ColoringError(f"区間 {i} に a 頂点が {len(inside)} 個あります")
        pi.append(inside[0] - 1)
    if len(set(pi)) != n:
        raise ColoringError(f"読み取った対応 {tuple(pi)} が置換ではありません")
    return tuple(pi)


def ca_extend(
    instance: CaInstance,
    v_left: str,
    v_right: str,
    l: int,  # noqa: E741
    r: int,
    names: tuple[str, str] = ("wL", "wR"),
    roles: tuple[str, str] = ("wL", "wR"),
) -> CaInstance:
    """
    (v_L, v_R)-spanned なインスタンスの両端に w_L, w_R を足す

    d'(w_L, w_R) = l + s − 1 + r、d'(w_L, x) = l、d'(w_R, x) = r とし、
    スパン上限を l + s + r にします。さらに d'(w_L, v_R) = l + s − 1、
    d'(w_R, v_L) = r + s − 1 として元のインスタンスの向きを w_L, w_R に
    固定します。c'(w_L) ≤ c'(w_R) のYES彩色では c'(v_L) = c'(w_L) + l、
    c'(v_R) = c'(w_R) − r が成り立ちます。

    Raises:
        GadgetError: ハンドルの頂点が無い、新しい頂点名が既にある、l または r が負の場合
    """
    known = set(instance.vertices)
    if v_left not in known or v_right not in known:
        raise GadgetError(f"頂点 {v_left!r}, {v_right!r} がインスタンスにありません")
    if l < 0 or r < 0:
        raise GadgetError(f"l, r は非負でなければなりません: l={l}, r={r}")
    w_left, w_right = names
    if w_left in known or w_right in known or w_left == w_right:
        raise GadgetError(f"新しい頂点名 {names} が既存の頂点と重なります")

    span = instance.span_bound
    distances = list(instance.triples())
    distances.append((w_left, w_right, l + span - 1 + r))
    for vertex in instance.vertices:
        # 反対側の端点との距離で内側の向きを固定する
        distances.append((w_left, vertex, l + span - 1 if vertex == v_right else l))
        distances.append((w_right, vertex, r + span - 1 if vertex == v_left else r))
    handles = {**instance.handles, roles[0]: w_left, roles[1]: w_right}
    return CaInstance.build(instance.vertices + names, distances, l + span + r, handles)


def extend_coloring(coloring: Coloring, v_left: str, v_right: str, l: int, r: int, names: tuple[str, str] = ("wL", "wR")) -> Coloring:  # noqa: E741
    """c(v_L) ≤ c(v_R) の彩色に c(w_L) = c(v_L) − l, c(w_R) = c(v_R) + r を足す"""
    if coloring[v_left] > coloring[v_right]:
        raise ColoringError(f"c({v_left}) > c({v_right}) の彩色は延長できません")
    return Coloring({**coloring.colors, names[0]: coloring[v_left] - l, names[1]: coloring[v_right] + r})


def ca_merge(
    first: CaInstance,
    first_ends: tuple[str, str],
    second: CaInstance,
    second_ends: tuple[str, str],
    shared: Iterable[str] | None = None,
) -> CaInstance:
    """
    (u, v)-spanned な I₁ と (w, z)-spanned な I₂ を ({u, w}, {v, z})-spanned なインスタンスにまとめる

    同じ識別子の頂点は同一視します。両方に含まれる組は max(d₁, d₂)、
    {u, w}×{v, z} の組は s − 1 とします。頂点順は V₁ の後に V₂ \\ V₁ です。
    ハンドルは矛盾しない役割だけを引き継ぎます。

    Args:
        first: I₁
        first_ends: (u, v)
        second: I₂
        second_ends: (w, z)
        shared: 同一視を意図した頂点（指定した場合は V₁ ∩ V₂ と一致しなければならない）

    Raises:
        GadgetError: スパン上限が異なる、端点が無い、意図しない識別子の衝突がある場合
    """
    if first.span_bound != second.span_bound:
        raise GadgetError(f"スパン上限が異なります: {first.span_bound} と {second.span_bound}")
    u, v = first_ends
    w, z = second_ends
    if u not in first.position or v not in first.position or w not in second.position or z not in second.position:
        raise GadgetError("端点の頂点がインスタンスにありません")
    common = set(first.vertices) & set(second.vertices)
    if shared is not None and set(shared) != common:
        raise GadgetError(f"共有頂点 {sorted(common)} が指定 {sorted(shared)} と一致しません")

    span = first.span_bound
    table: dict[frozenset[str], int] = {}
    for source in (first, second):
        for key, value in source.distances.items():
            table[key] = max(table.get(key, 0), value)
    for left in {u, w}:
        for right in {v, z}:
            if left != right:
                table[frozenset((left, right))] = span - 1

    vertices = first.vertices + tuple(vertex for vertex in second.vertices if vertex not in common)
    handles = {}
    for role in first.handles.keys() | second.handles.keys():
        candidates = {source.handles[role] for source in (first, second) if role in source.handles}
        if len(candidates) == 1:
            handles[role] = candidates.pop()
    triples = [(*sorted(key), value) for key, value in table.items()]
    return CaInstance.build(vertices, triples, span, handles)  # type: ignore[arg-type]


def _prefix_mapping(gadget: Gadget, prefix: str) -> dict[str, str]:
    middle = gadget.instance.handles["vM"]
    return {vertex: SHARED_MIDDLE if vertex == middle else prefix + vertex for vertex in gadget.instance.vertices}


def clamp_distances(instance: CaInstance, limit: int) -> CaInstance:
    """limit を超える距離を limit に置き換える（YES/NO は変わらない）"""
    triples = [(x, y, min(value, limit)) for x, y, value in instance.triples()]
    return CaInstance.build(instance.vertices, triples, instance.span_bound, instance.handles)


def cmw_to_ca(graph_1: WeightedBipartiteGraph, graph_2: WeightedBipartiteGraph) -> MergedGadget:
    """
    二つのグラフから、等しい重みの完全マッチングの組があるときに限りYESのインスタンスを作る

    両ガジェットの v_M を共有頂点 "vM" に付け替え、l_max = max(l₁, l₂)、
    s = l_max + max(s₁ − l₁, s₂ − l₂) として各ガジェットを extend で
    スパン s に揃えてから、延長した端点で merge します。最後に全ての
    距離を s 以下に切り詰めます。

    Raises:
        GadgetError: 頂点数や重みの上界の恒等式が成り立たない場合
    """
    gadgets = (matchings_to_ca(graph_1), matchings_to_ca(graph_2))
    c1, c2 = gadgets[0].constants, gadgets[1].constants
    l_max = max(c1.l, c2.l)
    span = l_max + max(c1.s - c1.l, c2.s - c2.l)
    extensions = ((l_max - c1.l, span - (l_max + c1.s - c1.l)), (l_max - c2.l, span - (l_max - c2.l + c2.s)))

    extended = []
    for index, (gadget, prefix, (left, right)) in enumerate(zip(gadgets, GADGET_PREFIXES, extensions, strict=True), start=1):
        mapping = _prefix_mapping(gadget, prefix)
        renamed = gadget.instance.renamed(mapping)
        extended.append(
            ca_extend(
                renamed,
                mapping[gadget.instance.handles["vL"]],
                mapping[gadget.instance.handles["vR"]],
                left,
                right,
                names=(f"{prefix}wL", f"{prefix}wR"),
                roles=(f"wL{index}", f"wR{index}"),
            )
        )

    merged = ca_merge(
        extended[0],
        (f"{GADGET_PREFIXES[0]}wL", f"{GADGET_PREFIXES[0]}wR"),
        extended[1],
        (f"{GADGET_PREFIXES[1]}wL", f"{GADGET_PREFIXES[1]}wR"),
        shared={SHARED_MIDDLE},
    )
    handles = {
        "vM": SHARED_MIDDLE,
        "wL1": f"{GADGET_PREFIXES[0]}wL",
        "wR1": f"{GADGET_PREFIXES[0]}wR",
        "wL2": f"{GADGET_PREFIXES[1]}wL",
        "wR2": f"{GADGET_PREFIXES[1]}wR",
    }
    instance = clamp_distances(merged, span).with_handles(handles)

    expected = 8 * c1.n + 8 * c2.n + 1
    if instance.vertex_count != expected:
        raise GadgetError(f"頂点数 {instance.vertex_count} が 8n₁+8n₂+1 = {expected} と一致しません")
    if span > 8 * (c1.n * c1.M + c2.n * c2.M):
        raise GadgetError(f"スパン上限 {span} が 8(n₁M₁ + n₂M₂) を超えます")
    logger.info(f"CMW → CA: n₁={c1.n}, n₂={c2.n}, 頂点数 {expected}, s={span}, l_max={l_max}")
    return MergedGadget(instance, gadgets, l_max, extensions)


def compose_yes_coloring(merged: MergedGadget, pi_1: Sequence[int], pi_2: Sequence[int]) -> Coloring:
    """
    二つの置換から、まとめたインスタンスのYES彩色を組み立てる

    各ガジェットの claim_coloring を extend に合わせて延長し、c(w_L) = 1 に
    平行移動してから頂点名を付け替えて重ねます。

    Raises:
        GadgetError: 二つの置換の重みが異なり v_M の色が一致しない場合
    """
    parts = []
    for gadget, mapping, prefix, (left, right), pi in zip(merged.gadgets, merged.renaming, GADGET_PREFIXES, merged.extensions, (pi_1, pi_2), strict=True):
        handles = gadget.instance.handles
        coloring = extend_coloring(claim_coloring(gadget, pi), handles["vL"], handles["vR"], left, right, names=("@wL", "@wR"))
        coloring = coloring.shifted(1 - coloring["@wL"])
        rename = {**mapping, "@wL": f"{prefix}wL", "@wR": f"{prefix}wR"}
        parts.append({rename[vertex]: color for vertex, color in coloring.colors.items()})

    if parts[0][SHARED_MIDDLE] != parts[1][SHARED_MIDDLE]:
        raise GadgetError(f"v_M の色が一致しません: {parts[0][SHARED_MIDDLE]} と {parts[1][SHARED_MIDDLE]}（マッチングの重みが異なります）")
    return Coloring({**parts[0], **parts[1]})


def split_coloring(merged: MergedGadget, coloring: Coloring) -> tuple[Coloring, Coloring]:
    """まとめたインスタンスの彩色を、各ガジェットの頂点名での彩色に分ける"""
    return tuple(Coloring({vertex: coloring[name] for vertex, name in mapping.items()}) for mapping in merged.renaming)  # type: ignore[return-value]


def merged_weight(merged: MergedGadget, coloring: Coloring) -> int:
    """
    YES彩色から共通のマッチング重み c(v_M) − c(w_L¹) − l_max を読み取る

    c(w_L¹) > c(w_R¹) の彩色は反転してから読みます。
    """
    handles = merged.instance.handles
    if coloring[handles["wL1"]] > coloring[handles["wR1"]]:
        coloring = coloring.reflected()
    return coloring[handles["vM"]] - coloring[handles["wL1"]] - merged.l_max


def verify_composed(merged: MergedGadget, coloring: Coloring) -> bool:
    """組み立てた彩色が適正でスパンが s に等しいか"""
    proper, violation = is_proper(merged.instance, coloring)
    if not proper:
        logger.warning(f"組み立てた彩色が適正ではありません: {violation}")
        return False
    return coloring.span == merged.span_bound
