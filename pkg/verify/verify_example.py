import os
import sys

# プロジェクトルートをパスに追加
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cnf import parse_dimacs, sat_oracle
from family import cnf_to_families, family_intersect, family_set, reverse_bits
from sizes import reduction_sizes, stats_frame


def test_example_chain():
    print("Testing (a or b) and (not a or c)...")

    formula = parse_dimacs("p cnf 3 2\n1 2 0\n-1 3 0\n", width=2)
    print(f"SAT oracle: {sat_oracle(formula)}")

    # 1. f と g の表
    f, g = cnf_to_families(formula)
    print(f"f = {f.rows}")
    print(f"g = {g.rows}")

    # 2. MSB 表示の族
    bits = formula.occurrence_count
    msb = lambda values: sorted(format(reverse_bits(value, bits), f"0{bits}b") for value in values)
    print(f"X_f (MSB) = {msb(family_set(f))}")
    print(f"X_g (MSB) = {msb(family_set(g))}")
    common = set(family_set(f)) & set(family_set(g))
    print(f"共通部分 (MSB) = {msb(common)}")

    result = family_intersect(f, g)
    if result is None or len(common) != 4:
        print("Error: 共通部分が期待と異なります")
        return

    # 3. サイズ
    sizes = reduction_sizes(formula)
    print(stats_frame(sizes).to_string(index=False))
    if (sizes.side_1, sizes.side_2, sizes.ca_vertices) == (4, 9, 105):
        print("Verification SUCCESS: サイズが期待通りです。")
    else:
        print("Verification FAILED: サイズが期待と異なります。")


if __name__ == "__main__":
    test_example_chain()
