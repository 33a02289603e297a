import os
import sys

# プロジェクトルートをパスに追加
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli import build_artifacts
from cnf import parse_dimacs
from utils import format_ca, format_cmw, load_ca, parse_cmw, read_text, save_text


def test_persistence():
    print("Testing instance files...")

    # 1. Reduce
    formula = parse_dimacs("p cnf 3 2\n1 2 0\n-1 3 0\n", width=2)
    artifacts = build_artifacts(formula)
    print(f"CA: {artifacts.merged.instance.vertex_count} 頂点, s={artifacts.merged.span_bound}")

    # 2. Save
    print("Saving data...")
    save_text("data/example.cmw", format_cmw(*artifacts.graphs))
    save_text("data/example.ca", format_ca(artifacts.merged.instance))
    if os.path.exists("data/example.ca"):
        print("File created successfully.")
    else:
        print("Error: File not created.")
        return

    # 3. Load
    print("Loading data...")
    graphs = parse_cmw(read_text("data/example.cmw"))
    instance = load_ca("data/example.ca")
    if graphs == artifacts.graphs and instance.distances == artifacts.merged.instance.distances:
        print("Success!")
    else:
        print("Error: 読み込んだインスタンスが一致しません。")


if __name__ == "__main__":
    test_persistence()
