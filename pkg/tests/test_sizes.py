from dataclasses import replace

import pytest
from hypothesis import given, settings

from cnf import CnfFormula, parse_dimacs
from exceptions import ReductionTooLargeError
from sizes import STAT_LABELS, ReductionSizes, reduction_sizes, size_identity_violations, stats_frame
from tests.strategies import formulas


@pytest.fixture(scope="module")
def example_sizes() -> ReductionSizes:
    return reduction_sizes(parse_dimacs("p cnf 3 2\n1 2 0\n-1 3 0\n", width=2))


class TestReductionSizes:
    def test_example(self, example_sizes: ReductionSizes) -> None:
        assert (example_sizes.variables, example_sizes.clauses, example_sizes.occurrences) == (3, 2, 4)
        assert (example_sizes.rows_1, example_sizes.alphabet_1, example_sizes.word_length_1, example_sizes.side_1) == (3, 2, 2, 4)
        assert (example_sizes.rows_2, example_sizes.alphabet_2, example_sizes.word_length_2, example_sizes.side_2) == (2, 3, 2, 9)
        assert example_sizes.ca_vertices == 105
        assert example_sizes.max_distance <= example_sizes.span_bound
        assert size_identity_violations(example_sizes) == []

    def test_contradiction(self) -> None:
        sizes = reduction_sizes(CnfFormula.from_signed(1, [[1], [-1]], width=1))
        assert (sizes.side_1, sizes.side_2, sizes.ca_vertices) == (2, 1, 25)
        assert sizes.minimal_1 and sizes.minimal_2

    def test_no_clauses(self) -> None:
        """節が無い場合 g は 0 行で、G₂ は片側 7 頂点"""
        sizes = reduction_sizes(CnfFormula(3, ()))
        assert (sizes.side_1, sizes.side_2, sizes.ca_vertices) == (4, 7, 89)
        assert size_identity_violations(sizes) == []

    def test_budget(self) -> None:
        with pytest.raises(ReductionTooLargeError):
            reduction_sizes(parse_dimacs("p cnf 3 2\n1 2 0\n-1 3 0\n", width=2), budget=8)

    @given(formulas(width=2, max_variables=3, max_clauses=2))
    @settings(max_examples=20, deadline=None)
    def test_identities_hold(self, formula: CnfFormula) -> None:
        sizes = reduction_sizes(formula)
        assert size_identity_violations(sizes) == []
        assert sizes.bit_size > 0


class TestSizeIdentityViolations:
    def test_detects_vertex_count(self, example_sizes: ReductionSizes) -> None:
        violations = size_identity_violations(replace(example_sizes, ca_vertices=104))
        assert len(violations) == 1
        assert "104" in violations[0]

    def test_detects_non_minimal(self, example_sizes: ReductionSizes) -> None:
        violations = size_identity_violations(replace(example_sizes, minimal_2=False, side_2=10))
        assert len(violations) == 3


class TestStatsFrame:
    def test_labels(self, example_sizes: ReductionSizes) -> None:
        frame = stats_frame(example_sizes)
        assert list(frame.columns) == ["項目", "値"]
        assert len(frame) == len(STAT_LABELS)
        values = dict(zip(frame["項目"], frame["値"], strict=True))
        assert values["CA の頂点数"] == 105
        assert values["G₂ の片側頂点数 k₂^b₂"] == 9
