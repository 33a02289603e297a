import itertools
import os
import sys
import time

# プロジェクトルートをパスに追加
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from channel import solve_exact
from gadget import cmw_to_ca, merged_weight
from matching import WeightedBipartiteGraph


def test_single_edge_pairs(max_weight=3):
    print(f"Testing 1×1 graph pairs with weights 0..{max_weight}...")

    failures = []
    for weight_1, weight_2 in itertools.product(range(max_weight + 1), repeat=2):
        merged = cmw_to_ca(WeightedBipartiteGraph.from_rows([[weight_1]]), WeightedBipartiteGraph.from_rows([[weight_2]]))
        started = time.perf_counter()
        result = solve_exact(merged.instance, cap=merged.span_bound)
        elapsed = time.perf_counter() - started

        answer = "NO" if result.exceeds_cap else "YES"
        detail = "" if result.coloring is None else f", 重み {merged_weight(merged, result.coloring)}"
        print(f"({weight_1}, {weight_2}): {answer} ({result.nodes} ノード, {elapsed:.2f} 秒{detail})")
        if (not result.exceeds_cap) != (weight_1 == weight_2):
            failures.append((weight_1, weight_2))

    if failures:
        print(f"Verification FAILED: {failures}")
    else:
        print("Verification SUCCESS: 重みが等しい組だけがYESです。")


if __name__ == "__main__":
    test_single_edge_pairs()
