import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exceptions import DimensionError, PrescriptionError
from weave import WordPermutation, build_permutation, merge_permutations, validate_prescription, word_rank, word_unrank, words

SHAPES = [(k, b) for k in (1, 2, 3) for b in (0, 1, 2, 3) if k**b <= 27]


@st.composite
def prescriptions(draw: st.DrawFn) -> tuple[dict, int, int]:
    """⊥ パターンに従うランダムな指定 α"""
    k, b = draw(st.sampled_from(SHAPES))
    letter = st.integers(1, k)
    alpha = {word: tuple(draw(letter) if own == 1 else None for own in word) for word in words(k, b)}
    return alpha, k, b


@st.composite
def merge_inputs(draw: st.DrawFn) -> tuple[list[WordPermutation], dict, int, int]:
    k, b = draw(st.sampled_from([(k, b) for k, b in SHAPES if b < 3]))
    size = k**b
    parts = [WordPermutation(k, b, tuple(draw(st.permutations(range(size))))) for _ in range(k)]
    rho = {word: draw(st.integers(1, k)) for word in words(k, b)}
    return parts, rho, k, b


class TestWords:
    def test_rank_round_trip(self) -> None:
        for rank, word in enumerate(words(3, 2)):
            assert word_rank(word, 3) == rank
            assert word_unrank(rank, 3, 2) == word

    def test_empty_word(self) -> None:
        assert list(words(2, 0)) == [()]


class TestMergePermutations:
    def test_swaps_for_three_letters(self) -> None:
        """ρ = (3, 1, 3) と恒等置換から、1̂ 始まりの語が ρ の文字を先頭に持つ"""
        identity = WordPermutation.identity(3, 1)
        merged = merge_permutations([identity] * 3, {(1,): 3, (2,): 1, (3,): 3})
        expected = {
            (1, 1): (3, 1),
            (1, 2): (1, 2),
            (1, 3): (3, 3),
            (2, 1): (2, 1),
            (2, 2): (2, 2),
            (2, 3): (2, 3),
            (3, 1): (1, 1),
            (3, 2): (3, 2),
            (3, 3): (1, 3),
        }
        assert merged.as_dict() == expected

    @given(merge_inputs())
    @settings(max_examples=100, deadline=None)
    def test_properties(self, data: tuple[list[WordPermutation], dict, int, int]) -> None:
        """末尾が φ_x(ŵ) に等しく、φ(1̂ŵ) の先頭が ρ(ŵ)"""
        parts, rho, k, b = data
        merged = merge_permutations(parts, rho)
        assert sorted(merged.forward) == list(range(k ** (b + 1)))
        for x in range(1, k + 1):
            for word in words(k, b):
                image = merged((x,) + word)
                assert image[1:] == parts[x - 1](word)
                if x == 1:
                    assert image[0] == rho[word]

    def test_wrong_part_count(self) -> None:
        with pytest.raises(DimensionError):
            merge_permutations([WordPermutation.identity(2, 1)], {(1,): 1, (2,): 1})

    def test_rho_out_of_range(self) -> None:
        parts = [WordPermutation.identity(2, 1)] * 2
        with pytest.raises(PrescriptionError):
            merge_permutations(parts, {(1,): 3, (2,): 1})


class TestBuildPermutation:
    def test_single_letter_word(self) -> None:
        assert build_permutation({(1,): (2,), (2,): (None,)}, k=2, b=1).as_dict() == {(1,): (2,), (2,): (1,)}

    def test_empty_words(self) -> None:
        assert build_permutation({(): ()}, k=3, b=0).as_dict() == {(): ()}

    @given(prescriptions())
    @settings(max_examples=100, deadline=None)
    def test_prescription_is_respected(self, data: tuple[dict, int, int]) -> None:
        alpha, k, b = data
        permutation = build_permutation(alpha, k, b)
        assert sorted(permutation.forward) == list(range(k**b))
        for word, letters in alpha.items():
            image = permutation(word)
            assert permutation.preimage(image) == word
            for position, letter in enumerate(letters):
                if letter is not None:
                    assert image[position] == letter

    def test_letter_outside_marked_position(self) -> None:
        with pytest.raises(PrescriptionError):
            validate_prescription({(1,): (1,), (2,): (1,)}, 2, 1)

    def test_missing_letter(self) -> None:
        with pytest.raises(PrescriptionError):
            build_permutation({(1, 1): (1, None), (1, 2): (2, None), (2, 1): (None, 1), (2, 2): (None, None)}, 2, 2)

    def test_not_a_bijection(self) -> None:
        with pytest.raises(DimensionError):
            WordPermutation(2, 1, (0, 0))
