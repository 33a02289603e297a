"""
語の置換

アルファベット [k] 上の長さ b の語の置換 φ:ĥ[k]^b → [k]^b を、指定した
位置に指定した文字が来るように、置換のマージを再帰的に重ねて構成します。
語の圧縮リダクションで、セレクタを完全マッチングに変換するために使います。

語は文字 1 を最小とする辞書式順位で索引付けします。定義域の語 ŵ と
値域の語 w は同じ型（整数のタプル）で表し、ハットは付けません。
"""

# 標準ライブラリ
import itertools
import logging
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

# ローカルモジュール
from config import config
from exceptions import DimensionError, PrescriptionError

logger = logging.getLogger(f"{config.LOGGER_NAME}.weave")

Word = tuple[int, ...]
# 各語について位置ごとの指定文字。ŵ_i = 1 の位置だけが文字、それ以外は None
Prescription = Mapping[Word, Sequence[int | None]]


def words(k: int, b: int) -> Iterator[Word]:
    """[k]^b の語を辞書式順に列挙する"""
    return itertools.product(range(1, k + 1), repeat=b)


def word_rank(word: Sequence[int], k: int) -> int:
    rank = 0
    for letter in word:
        rank = rank * k + (letter - 1)
    return rank


def word_unrank(rank: int, k: int, b: int) -> Word:
    letters = []
    for _ in range(b):
        rank, digit = divmod(rank, k)
        letters.append(digit + 1)
    return tuple(reversed(letters))


@dataclass(frozen=True)
class WordPermutation:
    """
    ĥ[k]^b から [k]^b への全単射

    Attributes:
        k: アルファベットの大きさ
        b: 語の長さ
        forward: 定義域の語の順位 → 値域の語の順位
    """

    k: int
    b: int
    forward: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1 or self.b < 0:
            raise DimensionError(f"k ≥ 1, b ≥ 0 が必要です: k={self.k}, b={self.b}")
        size = self.k**self.b
        if len(self.forward) != size or sorted(self.forward) != list(range(size)):
            raise DimensionError(f"k={self.k}, b={self.b} の置換表が全単射ではありません")

    @classmethod
    def identity(cls, k: int, b: int) -> "WordPermutation":
        return cls(k, b, tuple(range(k**b)))

    @cached_property
    def backward(self) -> tuple[int, ...]:
        table = [0] * len(self.forward)
        for source, target in enumerate(self.forward):
            table[target] = source
        return tuple(table)

    def __call__(self, word: Sequence[int]) -> Word:
        self._check_word(word)
        return word_unrank(self.forward[word_rank(word, self.k)], self.k, self.b)

    def preimage(self, word: Sequence[int]) -> Word:
        self._check_word(word)
        return word_unrank(self.backward[word_rank(word, self.k)], self.k, self.b)

    def as_dict(self) -> dict[Word, Word]:
        return {word: word_unrank(target, self.k, self.b) for word, target in zip(words(self.k, self.b), self.forward, strict=True)}

    def _check_word(self, word: Sequence[int]) -> None:
        if len(word) != self.b or any(not 1 <= letter <= self.k for letter in word):
            raise DimensionError(f"語 {tuple(word)} は [{self.k}]^{self.b} の元ではありません")


def merge_permutations(parts: Sequence[WordPermutation], rho: Mapping[Word, int]) -> WordPermutation:
    """
    k 個の置換 φ_1…φ_k を長さ b+1 の置換 φ にまとめる

    φ(1̂ŵ) = ρ(ŵ)·φ_1(ŵ)、x̂ ≠ 1̂ で ρ(φ_1⁻¹(φ_x(ŵ))) = x なら φ(x̂ŵ) = 1·φ_x(ŵ)、
    それ以外は φ(x̂ŵ) = x·φ_x(ŵ)。入れ替え操作の順序に依存しない閉じた式です。

    結果は (i) 末尾 b 文字が φ_x(ŵ) に等しく、(ii) φ(1̂ŵ) の先頭が ρ(ŵ) となります。

    Args:
        parts: 同じ (k, b) を持つ k 個の置換
        rho: 長さ b の各語に [k] の文字を対応させる写像

    Raises:
        DimensionError: 置換の数や (k, b) が揃っていない場合
        PrescriptionError: ρ の値が範囲外、または ρ が全域でない場合
    """
    if not parts:
        raise DimensionError("置換が一つもありません")
    k, b = parts[0].k, parts[0].b
    if len(parts) != k or any(part.k != k or part.b != b for part in parts):
        raise DimensionError(f"k={k} 個の同じ次元の置換が必要です")

    domain = list(words(k, b))
    rho_table = []
    for word in domain:
        letter = rho.get(word)
        if letter is None or not 1 <= letter <= k:
            raise PrescriptionError(f"ρ({word}) = {letter} は [1, {k}] の文字ではありません")
        rho_table.append(letter)

    block = k**b
    first = parts[0]
    forward = [0] * (k * block)
    for x, part in enumerate(parts, start=1):
        for rank in range(block):
            tail = part.forward[rank]
            if x == 1:
                head = rho_table[rank]
            elif rho_table[first.backward[tail]] == x:
                head = 1
            else:
                head = x
            forward[(x - 1) * block + rank] = (head - 1) * block + tail
    return WordPermutation(k, b + 1, tuple(forward))


def validate_prescription(alpha: Prescription, k: int, b: int) -> None:
    """
    指定 α が ⊥ パターンに従うか検査する

    全ての語 ŵ ∈ [k]^b と位置 i について α(ŵ, i) ≠ ⊥ ⟺ ŵ_i = 1̂、
    かつ指定文字は [1, k] の範囲でなければなりません。

    Raises:
        PrescriptionError: 違反がある場合
    """
    for word in words(k, b):
        if word not in alpha:
            raise PrescriptionError(f"語 {word} の指定がありません")
        letters = alpha[word]
        if len(letters) != b:
            raise PrescriptionError(f"語 {word} の指定の長さ {len(letters)} が {b} と一致しません")
        for position, (own, letter) in enumerate(zip(word, letters, strict=True), start=1):
            if (own == 1) != (letter is not None):
                raise PrescriptionError(f"語 {word} の位置 {position}: 1̂ の位置にだけ指定が必要です")
            if letter is not None and not 1 <= letter <= k:
                raise PrescriptionError(f"語 {word} の位置 {position}: 文字 {letter} が [1, {k}] の範囲外です")


def _build(alpha: Prescription, k: int, b: int) -> WordPermutation:
    if b == 0:
        return WordPermutation.identity(k, 0)
    tails = list(words(k, b - 1))
    parts = [_build({tail: alpha[(x,) + tail][1:] for tail in tails}, k, b - 1) for x in range(1, k + 1)]
    rho = {}
    for tail in tails:
        letter = alpha[(1,) + tail][0]
        assert letter is not None
        rho[tail] = letter
    return merge_permutations(parts, rho)


def build_permutation(alpha: Prescription, k: int, b: int) -> WordPermutation:
    """
    1̂ の位置で指定された文字を持つ置換 φ を構成する

    先頭文字を取り除いた指定 α_1…α_k で再帰し、ρ(ŵ) = α(1̂ŵ, 1) として
    merge_permutations でまとめます。b = 0 では ε → ε です。

    Args:
        alpha: 各語の位置ごとの指定文字（1̂ の位置以外は None）
        k: アルファベットの大きさ
        b: 語の長さ

    Returns:
        ŵ_i = 1̂ なら φ(ŵ)_i = α(ŵ, i) を満たす置換

    Raises:
        PrescriptionError: α が ⊥ パターンに違反する場合

    Examples:
        >>> build_permutation({(1,): (2,), (2,): (None,)}, k=2, b=1).as_dict()
        {(1,): (2,), (2,): (1,)}
    """
    if k < 1 or b < 0:
        raise DimensionError(f"k ≥ 1, b ≥ 0 が必要です: k={k}, b={b}")
    validate_prescription(alpha, k, b)
    permutation = _build(alpha, k, b)
    logger.debug(f"語の置換を構成: k={k}, b={b}, 語数 {k**b}")
    return permutation
