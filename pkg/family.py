"""
f-族と Family Intersection

このモジュールは表 f:[a]×[b]→ℕ、その f-族 X_f の列挙、総当たりによる
Family Intersection の判定、CNF からの出現ビットによるリダクションを提供します。

ビット規約は LSB です: 出現 j は 2^{j−1} に対応します。表示用の
MSB 規約は reverse_bits で切り替えます。
"""

# 標準ライブラリ
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from typing import NamedTuple

# ローカルモジュール
from cnf import Assignment, CnfFormula, occurrence_index, satisfying_subsets
from config import config
from exceptions import DimensionError, FormulaError, OracleTooLargeError

logger = logging.getLogger(f"{config.LOGGER_NAME}.family")

Selector = tuple[int, ...]
WeightSet = tuple[int, ...]


@dataclass(frozen=True)
class FamilyFunction:
    """
    関数 f:[a]×[b]→ℕ の表

    Attributes:
        rows: a 行 b 列の非負整数の表
        columns: 列数 b（a = 0 でも保持するため明示）
    """

    rows: tuple[tuple[int, ...], ...]
    columns: int

    def __post_init__(self) -> None:
        if self.columns < 1:
            raise DimensionError(f"列数は正でなければなりません: {self.columns}")
        for index, row in enumerate(self.rows, start=1):
            if len(row) != self.columns:
                raise DimensionError(f"行 {index} の長さ {len(row)} が列数 {self.columns} と一致しません")
            if any(value < 0 for value in row):
                raise DimensionError(f"行 {index} に負の値があります")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], columns: int | None = None) -> "FamilyFunction":
        table = tuple(tuple(int(value) for value in row) for row in rows)
        if columns is None:
            if not table:
                raise DimensionError("行が無い表には列数の指定が必要です")
            columns = len(table[0])
        return cls(table, columns)

    @property
    def row_count(self) -> int:
        return len(self.rows)

    def value(self, row: int, column: int) -> int:
        """f(row, column) を返す（どちらも1始まり）"""
        return self.rows[row - 1][column - 1]

    def padded(self, row_count: int) -> "FamilyFunction":
        """ゼロ行を追加して row_count 行に拡張する"""
        if row_count < self.row_count:
            raise DimensionError(f"{self.row_count} 行の表を {row_count} 行に縮めることはできません")
        zero = (0,) * self.columns
        return FamilyFunction(self.rows + (zero,) * (row_count - self.row_count), self.columns)

    def map_values(self, transform: Callable[[int], int]) -> "FamilyFunction":
        return FamilyFunction(tuple(tuple(transform(value) for value in row) for row in self.rows), self.columns)

    def selector_sum(self, selector: Sequence[int]) -> int:
        """Σ_i f(i, σ(i)) を返す"""
        if len(selector) != self.row_count:
            raise DimensionError(f"セレクタの長さ {len(selector)} が行数 {self.row_count} と一致しません")
        if any(not 1 <= choice <= self.columns for choice in selector):
            raise DimensionError(f"セレクタの値は [1, {self.columns}] の範囲です: {tuple(selector)}")
        return sum(row[choice - 1] for row, choice in zip(self.rows, selector, strict=True))

    def max_family_value(self) -> int:
        return sum(max(row) for row in self.rows)


class FamilyIntersection(NamedTuple):
    """X_f ∩ X_g の最小の共通値と、それを与えるセレクタ"""

    value: int
    selector_f: Selector
    selector_g: Selector


def _check_enumeration(f: FamilyFunction, budget: int | None) -> None:
    limit = config.resolve_budget(budget)
    required = f.columns**f.row_count
    if required > limit:
        raise OracleTooLargeError(f"f-族の列挙: {f.columns}^{f.row_count} 個のセレクタは予算 {limit} を超えます", required, limit)


def family_witnesses(f: FamilyFunction, budget: int | None = None) -> dict[int, Selector]:
    """
    X_f の各要素に、その値を与える辞書式最小のセレクタを対応させる

    最終行から順に部分和集合を広げます。列を昇順に走査し、最初に
    得た値だけを残すので、各値のセレクタは辞書式最小になります。

    Raises:
        OracleTooLargeError: b^a が予算を超える場合
    """
    _check_enumeration(f, budget)
    suffix: dict[int, Selector] = {0: ()}
    for row in reversed(f.rows):
        extended: dict[int, Selector] = {}
        for column, value in enumerate(row, start=1):
            for tail_value, tail in suffix.items():
                extended.setdefault(value + tail_value, (column,) + tail)
        suffix = extended
    return suffix


def family_set(f: FamilyFunction, budget: int | None = None) -> WeightSet:
    """
    f-族 X_f = {Σ_i f(i, σ(i))} を列挙する

    Args:
        f: 表
        budget: セレクタ数 b^a の上限

    Returns:
        昇順・重複なしの値の列（a = 0 の場合は (0,)）

    Raises:
        OracleTooLargeError: b^a が予算を超える場合

    Examples:
        >>> family_set(FamilyFunction.from_rows([[5, 0], [2, 0], [8, 0]]))
        (0, 2, 5, 7, 8, 10, 13, 15)
    """
    return tuple(sorted(family_witnesses(f, budget)))


def family_intersect(f: FamilyFunction, g: FamilyFunction, budget: int | None = None) -> FamilyIntersection | None:
    """
    X_f ∩ X_g が空でないかを総当たりで判定する

    Returns:
        最小の共通値とそのセレクタ、共通部分が空の場合は None

    Raises:
        OracleTooLargeError: どちらかの列挙が予算を超える場合
    """
    witnesses_f = family_witnesses(f, budget)
    witnesses_g = family_witnesses(g, budget)
    common = witnesses_f.keys() & witnesses_g.keys()
    logger.debug(f"Family Intersection: |X_f|={len(witnesses_f)}, |X_g|={len(witnesses_g)}, 共通={len(common)}")
    if not common:
        return None
    value = min(common)
    return FamilyIntersection(value, witnesses_f[value], witnesses_g[value])


def characteristic_value(occurrences: Iterable[int]) -> int:
    """出現集合の特性値 Σ_{j∈K} 2^{j−1}"""
    return sum(1 << (j - 1) for j in occurrences)


def cnf_to_families(formula: CnfFormula) -> tuple[FamilyFunction, FamilyFunction]:
    """
    CNF論理式を Family Intersection のインスタンスに変換する

    f(i, 1) = Σ_{j∈I_i} 2^{j−1}, f(i, 2) = 0 とし、g(i, j) は節 i の
    j 番目の充足出現集合の特性値とします。

    Returns:
        (f: [n]×[2], g: [m]×[2^width − 1])。X_f ∩ X_g ≠ ∅ ⟺ 論理式が充足可能
    """
    index = occurrence_index(formula)
    f = FamilyFunction(tuple((characteristic_value(occurrences), 0) for occurrences in index.var_occurrences), 2)
    g_rows = tuple(
        tuple(characteristic_value(subset) for subset in satisfying_subsets(formula, clause)) for clause in range(1, formula.clause_count + 1)
    )
    g = FamilyFunction(g_rows, (1 << formula.width) - 1)
    logger.info(f"CNF → FI: f は {f.row_count}×2, g は {g.row_count}×{g.columns}, 出現数 {index.total_occurrences}")
    return f, g


def reverse_bits(value: int, bits: int) -> int:
    """
    value の下位 bits ビットを反転した値を返す（MSB表示規約への切り替え）

    Examples:
        >>> reverse_bits(0b0101, 4)
        10
    """
    if value >> bits:
        raise ValueError(f"{value} は {bits} ビットに収まりません")
    return int(format(value, f"0{bits}b")[::-1], 2) if bits else 0


def decode_family_value(formula: CnfFormula, value: int) -> Assignment | None:
    """
    共通値の2進展開を出現の割り当てとして読み、変数の割り当てに戻す

    Returns:
        全ての出現が変数ごとに一致する場合はその割り当て（出現の無い変数は偽）、
        一致しない場合は None
    """
    index = occurrence_index(formula)
    if value >> index.total_occurrences:
        return None
    assignment = []
    for occurrences in index.var_occurrences:
        bits = {bool(value >> (j - 1) & 1) for j in occurrences}
        if len(bits) > 1:
            return None
        assignment.append(bits.pop() if bits else False)
    return tuple(assignment)


def assignment_to_selectors(formula: CnfFormula, assignment: Sequence[bool]) -> tuple[Selector, Selector]:
    """
    充足割り当てから X_f と X_g で同じ値を与えるセレクタの組を作る

    σ_f(i) は変数 i が真なら 1、偽なら 2。σ_g(i) は節 i の真となる出現の
    集合が P_i の何番目かを表します。

    Raises:
        FormulaError: 割り当てが論理式を充足しない場合
    """
    if not formula.evaluate(assignment):
        raise FormulaError("割り当てが論理式を充足しません")
    index = occurrence_index(formula)
    selector_f = tuple(1 if value else 2 for value in assignment)
    selector_g = []
    for clause in range(1, formula.clause_count + 1):
        chosen = frozenset(j for j in index.clause_occurrences[clause - 1] if assignment[index.variable_of(j) - 1])
        selector_g.append(satisfying_subsets(formula, clause).index(chosen) + 1)
    return selector_f, tuple(selector_g)
