import itertools

import pytest
from hypothesis import given, settings

from cnf import CnfFormula, format_dimacs, occurrence_index, parse_dimacs, sat_oracle, satisfying_subsets
from exceptions import DimacsError, FormulaError, OracleTooLargeError
from tests.strategies import formulas

EXAMPLE_DIMACS = "c (a or b) and (not a or c)\np cnf 3 2\n1 2 0\n-1 3 0\n"


@pytest.fixture
def example() -> CnfFormula:
    return parse_dimacs(EXAMPLE_DIMACS, width=2)


class TestParseDimacs:
    def test_example_formula(self, example: CnfFormula) -> None:
        """節とリテラルの順序が保たれる"""
        assert example.variable_count == 3
        assert example.clauses == (((1, True), (2, True)), ((1, False), (3, True)))

    def test_width_one(self) -> None:
        """(x)∧(¬x) を幅 1 で読む"""
        formula = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n", width=1)
        assert formula.clauses == (((1, True),), ((1, False),))

    def test_empty_clause_reports_line(self) -> None:
        """空の節は行番号付きのエラー"""
        with pytest.raises(DimacsError) as excinfo:
            parse_dimacs("p cnf 1 1\n0\n", width=1)
        assert excinfo.value.line == 2

    def test_wrong_width(self) -> None:
        with pytest.raises(DimacsError) as excinfo:
            parse_dimacs("p cnf 3 1\n1 2 0\n", width=3)
        assert excinfo.value.line == 2

    def test_variable_out_of_range(self) -> None:
        with pytest.raises(DimacsError) as excinfo:
            parse_dimacs("p cnf 2 1\nc comment\n1 -4 0\n", width=2)
        assert excinfo.value.line == 3

    def test_missing_header(self) -> None:
        with pytest.raises(DimacsError):
            parse_dimacs("1 2 0\n", width=2)

    def test_clause_count_mismatch(self) -> None:
        """節の数の不一致はヘッダ行で報告する"""
        with pytest.raises(DimacsError) as excinfo:
            parse_dimacs("c x\np cnf 2 2\n1 2 0\n", width=2)
        assert excinfo.value.line == 2

    def test_unterminated_clause(self) -> None:
        with pytest.raises(DimacsError):
            parse_dimacs("p cnf 2 1\n1 2\n", width=2)

    def test_clause_across_lines_and_percent_trailer(self) -> None:
        """節は行をまたいでもよく、'%' 以降は読まない"""
        formula = parse_dimacs("p cnf 3 1\n1\n-2 3 0\n%\n0\n", width=3)
        assert formula.clauses == (((1, True), (2, False), (3, True)),)

    def test_format_round_trip(self, example: CnfFormula) -> None:
        assert parse_dimacs(format_dimacs(example), width=2) == example


class TestOccurrenceIndex:
    def test_example(self, example: CnfFormula) -> None:
        """α₁, β₁, α₂, γ₁ の順に出現番号が付く"""
        index = occurrence_index(example)
        assert index.var_occurrences == (frozenset({1, 3}), frozenset({2}), frozenset({4}))
        assert index.clause_occurrences == ((1, 2), (3, 4))
        assert index.variable_of(3) == 1

    def test_repeated_literal(self) -> None:
        """同じリテラルの出現は別々に数える"""
        index = occurrence_index(CnfFormula.from_signed(2, [[1, 1, 2]]))
        assert index.var_occurrences == (frozenset({1, 2}), frozenset({3}))

    def test_no_clauses(self) -> None:
        index = occurrence_index(CnfFormula(3, ()))
        assert index.total_occurrences == 0
        assert all(not occurrences for occurrences in index.var_occurrences)

    def test_occurrence_out_of_range(self, example: CnfFormula) -> None:
        with pytest.raises(FormulaError):
            occurrence_index(example).variable_of(5)

    @given(formulas())
    @settings(max_examples=50, deadline=None)
    def test_occurrences_partition(self, formula: CnfFormula) -> None:
        index = occurrence_index(formula)
        union = sorted(itertools.chain.from_iterable(index.var_occurrences))
        assert union == list(range(1, formula.occurrence_count + 1))


class TestSatisfyingSubsets:
    def test_negated_clause(self, example: CnfFormula) -> None:
        """(¬α₂∨γ₁) は ∅, {4}, {3, 4}"""
        assert satisfying_subsets(example, 2) == (frozenset(), frozenset({4}), frozenset({3, 4}))

    def test_positive_clause(self, example: CnfFormula) -> None:
        assert satisfying_subsets(example, 1) == (frozenset({1}), frozenset({2}), frozenset({1, 2}))

    def test_width_three_has_seven(self) -> None:
        formula = CnfFormula.from_signed(3, [[1, -2, 3]])
        assert len(satisfying_subsets(formula, 1)) == 7

    def test_index_out_of_range(self, example: CnfFormula) -> None:
        with pytest.raises(FormulaError):
            satisfying_subsets(example, 3)


class TestSatOracle:
    def test_example_first_assignment(self, example: CnfFormula) -> None:
        """偽 < 真 の辞書式順で最初の充足割り当て"""
        assert sat_oracle(example) == (False, True, False)

    def test_unsatisfiable(self) -> None:
        assert sat_oracle(CnfFormula.from_signed(1, [[1], [-1]], width=1)) is None

    def test_budget(self) -> None:
        formula = CnfFormula.from_signed(3, [[1, 2, 3]])
        with pytest.raises(OracleTooLargeError) as excinfo:
            sat_oracle(formula, budget=4)
        assert excinfo.value.required == 8

    @given(formulas())
    @settings(max_examples=50, deadline=None)
    def test_agrees_with_evaluate(self, formula: CnfFormula) -> None:
        assignment = sat_oracle(formula)
        if assignment is None:
            assert not any(formula.evaluate(values) for values in itertools.product((False, True), repeat=formula.variable_count))
        else:
            assert formula.evaluate(assignment)

    def test_evaluate_length_mismatch(self, example: CnfFormula) -> None:
        with pytest.raises(FormulaError):
            example.evaluate((True,))
