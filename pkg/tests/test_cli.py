import os
import random
from pathlib import Path

import pytest
from hypothesis import given, settings

from cli import EXIT_BUDGET, EXIT_DISAGREEMENT, EXIT_INPUT_ERROR, EXIT_VERIFIED, StageStatus, build_artifacts, main, run_verification
from cnf import CnfFormula, parse_dimacs
from exceptions import OracleTooLargeError
from tests.strategies import formulas
from utils import load_ca, parse_cmw, save_text

EXAMPLE_DIMACS = "p cnf 3 2\n1 2 0\n-1 3 0\n"
CONTRADICTION_DIMACS = "p cnf 1 2\n1 0\n-1 0\n"
SQUARE_DIMACS = "p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n"
STAGES = ["SAT", "FamilyIntersection", "CommonMatchingWeight", "ChannelAssignment"]


def write(tmp_path: Path, name: str, text: str) -> str:
    path = os.path.join(tmp_path, name)
    save_text(path, text)
    return path


class TestRunVerification:
    def test_satisfiable_example(self) -> None:
        report = run_verification(parse_dimacs(EXAMPLE_DIMACS, width=2))
        assert report.agreed
        assert [stage.name for stage in report.stages] == STAGES
        assert report.stage("SAT").witness == "010"
        assert report.stage("FamilyIntersection").witness == "共通値 2"
        assert report.stage("CommonMatchingWeight").verdict is True
        channel = report.stage("ChannelAssignment")
        assert channel.status is StageStatus.CONSTRUCTIVE
        assert channel.verdict is True
        assert "105" in channel.reason
        assert report.sizes is not None and report.sizes.ca_vertices == 105

    def test_contradiction(self) -> None:
        report = run_verification(parse_dimacs(CONTRADICTION_DIMACS, width=1))
        assert report.agreed
        assert report.stage("SAT").verdict is False
        assert report.stage("FamilyIntersection").verdict is False
        assert report.stage("CommonMatchingWeight").verdict is False
        channel = report.stage("ChannelAssignment")
        assert channel.status is StageStatus.SKIPPED
        assert channel.reason

    def test_unsatisfiable_square(self) -> None:
        """幅 2 の充足不能な四節では CMW も 9! 通りの列挙で NO になる"""
        report = run_verification(parse_dimacs(SQUARE_DIMACS, width=2))
        assert report.agreed, report.disagreements
        for name in STAGES[:3]:
            assert report.stage(name).status is StageStatus.VERIFIED
            assert report.stage(name).verdict is False
        assert report.stage("CommonMatchingWeight").size == "片側 4 と 9"
        channel = report.stage("ChannelAssignment")
        assert channel.status is StageStatus.SKIPPED
        assert "105" in channel.reason

    def test_constructive_disabled(self) -> None:
        report = run_verification(parse_dimacs(EXAMPLE_DIMACS, width=2), constructive=False)
        channel = report.stage("ChannelAssignment")
        assert channel.status is StageStatus.SKIPPED
        assert channel.reason

    def test_oracle_skipped_with_reason(self) -> None:
        """予算 9 では f の 2^3 は列挙でき、4! のマッチング列挙は省略される"""
        report = run_verification(parse_dimacs(EXAMPLE_DIMACS, width=2), budget=9)
        assert report.stage("FamilyIntersection").status is StageStatus.VERIFIED
        skipped = report.stage("CommonMatchingWeight")
        assert skipped.status is StageStatus.SKIPPED
        assert "予算" in skipped.reason
        assert report.agreed

    def test_sat_oracle_is_mandatory(self) -> None:
        with pytest.raises(OracleTooLargeError):
            run_verification(parse_dimacs(EXAMPLE_DIMACS, width=2), budget=4)

    def test_frame(self) -> None:
        frame = run_verification(parse_dimacs(CONTRADICTION_DIMACS, width=1)).frame()
        assert list(frame["段"]) == STAGES
        assert list(frame["判定"])[:3] == ["NO", "NO", "NO"]

    @given(formulas(width=1, max_variables=3, max_clauses=4))
    @settings(max_examples=50, deadline=None)
    def test_width_one_chain_agrees(self, formula: CnfFormula) -> None:
        report = run_verification(formula)
        assert report.agreed, report.disagreements
        assert all(stage.status is not StageStatus.SKIPPED for stage in report.stages[:3])

    @pytest.mark.slow
    def test_random_three_cnf(self) -> None:
        """200 個のランダムな 3-CNF で全段の判定が一致する"""
        generator = random.Random(20240607)
        for _ in range(200):
            n = generator.randint(1, 4)
            m = generator.randint(0, 3)
            clauses = [[generator.choice([-1, 1]) * generator.randint(1, n) for _ in range(3)] for _ in range(m)]
            formula = CnfFormula.from_signed(n, clauses)
            report = run_verification(formula)
            assert report.agreed, (clauses, report.disagreements)
            if report.stage("SAT").verdict:
                assert report.stage("ChannelAssignment").status is StageStatus.CONSTRUCTIVE


class TestBuildArtifacts:
    def test_example(self) -> None:
        artifacts = build_artifacts(parse_dimacs(EXAMPLE_DIMACS, width=2))
        assert [graph.side for graph in artifacts.graphs] == [4, 9]
        assert artifacts.merged.instance.vertex_count == 105


class TestMain:
    def test_verify(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = write(tmp_path, "example.cnf", EXAMPLE_DIMACS)
        assert main(["verify", path, "--width", "2"]) == EXIT_VERIFIED
        assert "ChannelAssignment" in capsys.readouterr().out

    def test_reduce_to_cmw(self, tmp_path: Path) -> None:
        source = write(tmp_path, "example.cnf", EXAMPLE_DIMACS)
        target = os.path.join(tmp_path, "out", "example.cmw")
        assert main(["reduce", source, "--width", "2", "--to", "cmw", "-o", target]) == EXIT_VERIFIED
        with open(target, encoding="utf-8") as f:
            graph_1, graph_2 = parse_cmw(f.read())
        assert (graph_1.side, graph_2.side) == (4, 9)

    def test_reduce_to_ca(self, tmp_path: Path) -> None:
        source = write(tmp_path, "contradiction.cnf", CONTRADICTION_DIMACS)
        target = os.path.join(tmp_path, "contradiction.ca")
        assert main(["reduce", source, "--width", "1", "--to", "ca", "-o", target]) == EXIT_VERIFIED
        instance = load_ca(target)
        assert instance.vertex_count == 25
        assert set(instance.handles) == {"vM", "wL1", "wR1", "wL2", "wR2"}

    def test_solve(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = write(tmp_path, "path.ca", "ca 3 5\nv 1\nv 2\nv 3\nd 1 2 2\nd 2 3 2\n")
        assert main(["solve", path, "--cap", "10"]) == EXIT_VERIFIED
        output = capsys.readouterr().out
        assert "最小スパン: 3" in output
        assert "順序: 1 3 2" in output

    def test_solve_exceeds_cap(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = write(tmp_path, "pair.ca", "ca 2 5\nv x\nv y\nd x y 4\n")
        assert main(["solve", path, "--cap", "4"]) == EXIT_VERIFIED
        assert "exceeds cap" in capsys.readouterr().out

    def test_solve_budget(self, tmp_path: Path) -> None:
        path = write(tmp_path, "path.ca", "ca 3 5\nv 1\nv 2\nv 3\nd 1 2 2\nd 2 3 2\n")
        assert main(["solve", path, "--budget", "1"]) == EXIT_BUDGET

    def test_stats(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = write(tmp_path, "example.cnf", EXAMPLE_DIMACS)
        assert main(["stats", path, "--width", "2"]) == EXIT_VERIFIED
        assert "105" in capsys.readouterr().out

    def test_malformed_input(self, tmp_path: Path) -> None:
        path = write(tmp_path, "bad.cnf", "p cnf 1 1\n0\n")
        assert main(["verify", path, "--width", "1"]) == EXIT_INPUT_ERROR

    def test_malformed_ca(self, tmp_path: Path) -> None:
        path = write(tmp_path, "bad.ca", "ca 2 3\nv x\n")
        assert main(["solve", path]) == EXIT_INPUT_ERROR

    def test_solve_empty_instance(self, tmp_path: Path) -> None:
        path = write(tmp_path, "empty.ca", "ca 0 3\n")
        assert main(["solve", path]) == EXIT_INPUT_ERROR

    def test_missing_file(self, tmp_path: Path) -> None:
        assert main(["stats", os.path.join(tmp_path, "missing.cnf")]) == EXIT_INPUT_ERROR

    def test_sat_budget(self, tmp_path: Path) -> None:
        path = write(tmp_path, "example.cnf", EXAMPLE_DIMACS)
        assert main(["verify", path, "--width", "2", "--budget", "4"]) == EXIT_BUDGET

    def test_exit_codes_are_distinct(self) -> None:
        assert len({EXIT_VERIFIED, EXIT_DISAGREEMENT, EXIT_INPUT_ERROR, EXIT_BUDGET}) == 4
