"""Reduced words in the free group F_r.

Letters are stored as integer codes ``2*gen + (0 if sign == +1 else 1)`` so
that the inverse of a code is ``code ^ 1`` and integer order on codes is the
letter order used for canonical representatives: by generator index, with
the positive letter before its inverse (``a < A < b < B < ...``).

Text form uses ``a``-``z`` for generators and ``A``-``Z`` for their inverses.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

import numpy as np

from .errors import InvalidInputError

MAX_RANK = 26


class Letter(NamedTuple):
    gen: int
    sign: int = 1

    @property
    def code(self) -> int:
        return 2 * self.gen + (self.sign == -1)

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(code >> 1, -1 if code & 1 else 1)

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.sign)

    def __str__(self) -> str:
        return code_to_char(self.code)


def code_to_char(code: int) -> str:
    ch = chr(ord("a") + (code >> 1))
    return ch.upper() if code & 1 else ch


def char_to_code(ch: str) -> int:
    if not ch.isascii() or not ch.isalpha():
        raise InvalidInputError(f"invalid letter {ch!r}")
    gen = ord(ch.lower()) - ord("a")
    return 2 * gen + ch.isupper()


def codes_to_text(codes: Sequence[int]) -> str:
    return "".join(code_to_char(c) for c in codes)


def _check_rank(r: int) -> None:
    if not 1 <= r <= MAX_RANK:
        raise InvalidInputError(f"rank must lie in [1, {MAX_RANK}], got {r}")


# ---------------------------------------------------------------------------
# tuple-level primitives (hot paths use these directly)
# ---------------------------------------------------------------------------

def reduce_codes(codes: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for c in codes:
        if stack and stack[-1] == c ^ 1:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


def inverse_codes(codes: Sequence[int]) -> tuple[int, ...]:
    return tuple(c ^ 1 for c in reversed(codes))


def is_reduced_codes(codes: Sequence[int]) -> bool:
    return all(codes[i] != codes[i + 1] ^ 1 for i in range(len(codes) - 1))


def is_cyclically_reduced_codes(codes: Sequence[int]) -> bool:
    if not is_reduced_codes(codes):
        return False
    return len(codes) < 2 or codes[0] != codes[-1] ^ 1


def cyclic_reduce_codes(codes: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Return ``(cyc, conj)`` with ``conj . cyc . conj^-1 == codes``; input reduced."""
    lo, hi = 0, len(codes)
    while hi - lo >= 2 and codes[lo] == codes[hi - 1] ^ 1:
        lo += 1
        hi -= 1
    return tuple(codes[lo:hi]), tuple(codes[:lo])


def least_rotation(seq: Sequence) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(seq)
    if n == 0:
        return 0
    s = list(seq) * 2
    fail = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            # here i == -1
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k


def min_rotation(seq: Sequence) -> tuple:
    k = least_rotation(seq)
    t = tuple(seq)
    return t[k:] + t[:k]


def abelianize_codes(codes: Iterable[int], r: int) -> tuple[int, ...]:
    counts = [0] * r
    for c in codes:
        counts[c >> 1] += -1 if c & 1 else 1
    return tuple(counts)


# ---------------------------------------------------------------------------
# word types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """A freely reduced word over ``r`` generators."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self) -> None:
        _check_rank(self.rank)
        for c in self.letters:
            if not 0 <= c < 2 * self.rank:
                raise InvalidInputError(
                    f"letter {code_to_char(c) if c >= 0 else c!r} outside rank {self.rank}"
                )
        if not is_reduced_codes(self.letters):
            raise InvalidInputError(f"word {codes_to_text(self.letters)!r} is not reduced")

    @classmethod
    def parse(cls, text: str, rank: int) -> "Word":
        return cls(tuple(char_to_code(ch) for ch in text.strip()), rank)

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return codes_to_text(self.letters)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r}, rank={self.rank})"

    def __mul__(self, other: "Word") -> "Word":
        if other.rank != self.rank:
            raise InvalidInputError("rank mismatch")
        return Word(reduce_codes(self.letters + other.letters), self.rank)

    def inverse(self) -> "Word":
        return Word(inverse_codes(self.letters), self.rank)

    def as_letters(self) -> list[Letter]:
        return [Letter.from_code(c) for c in self.letters]

    @property
    def is_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0] != self.letters[-1] ^ 1

    def rotations(self) -> Iterator[tuple[int, ...]]:
        t = self.letters
        for i in range(max(len(t), 1)):
            yield t[i:] + t[:i]


class CyclicWord(Word):
    """A cyclically reduced word: reduced, and first and last letters are not inverse."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.is_cyclically_reduced:
            raise InvalidInputError(f"word {str(self)!r} is not cyclically reduced")

    def rotate(self, i: int) -> "CyclicWord":
        t = self.letters
        if not t:
            return self
        i %= len(t)
        return CyclicWord(t[i:] + t[:i], self.rank)


class ClassRep(CyclicWord):
    """Least rotation of a cyclic word; one per conjugacy class of F_r."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if least_rotation(self.letters) != 0 and min_rotation(self.letters) != self.letters:
            raise InvalidInputError(f"{str(self)!r} is not its least rotation")


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

RawLetters = Union[str, Iterable[Union[Letter, tuple, int]]]


def _raw_to_codes(raw: RawLetters, r: int) -> list[int]:
    if isinstance(raw, str):
        codes = [char_to_code(ch) for ch in raw]
    else:
        codes = []
        for item in raw:
            if isinstance(item, int):
                codes.append(item)
            else:
                gen, sign = item
                if sign not in (1, -1) or gen < 0:
                    raise InvalidInputError(f"invalid letter {item!r}")
                codes.append(2 * gen + (sign == -1))
    for c in codes:
        if not 0 <= c < 2 * r:
            raise InvalidInputError(f"letter index {c >> 1} not below rank {r}")
    return codes


def free_reduce(raw: RawLetters, r: int) -> Word:
    _check_rank(r)
    return Word(reduce_codes(_raw_to_codes(raw, r)), r)


def cyclic_reduce(w: Word) -> tuple[CyclicWord, Word]:
    cyc, conj = cyclic_reduce_codes(w.letters)
    return CyclicWord(cyc, w.rank), Word(conj, w.rank)


def canonical_rep(c: CyclicWord) -> ClassRep:
    return ClassRep(min_rotation(c.letters), c.rank)


def class_key(w: Word) -> tuple[int, ...]:
    """Canonical conjugacy-class key of any reduced word."""
    cyc, _ = cyclic_reduce_codes(w.letters)
    return min_rotation(cyc)


def abelianize(w: Word) -> tuple[int, ...]:
    return abelianize_codes(w.letters, w.rank)


def count_reduced(r: int, n: int) -> int:
    return 1 if n == 0 else 2 * r * (2 * r - 1) ** (n - 1)


def count_cyclically_reduced(r: int, n: int) -> int:
    if r < 2 or n < 0:
        raise InvalidInputError("need r >= 2 and n >= 0")
    if n == 0:
        return 1
    return (2 * r - 1) ** n + (r - 1) * (-1) ** n + r


def endpoint_sequences(r: int, n: int) -> tuple[int, int]:
    """``(a_n, b_n)``: reduced length-n words whose end letters are inverse / equal."""
    q = 2 * r - 1
    sgn = (r - 1) * (-1) ** n
    return q ** (n - 1) - sgn - r, q ** (n - 1) - sgn + r


def _as_code(s: Union[Letter, int]) -> int:
    return s if isinstance(s, int) else Letter(*s).code


def count_endpoint_pairs(r: int, n: int, s1: Union[Letter, int], s2: Union[Letter, int]) -> int:
    """Reduced words of length ``n`` that begin with ``s1`` and end with ``s2``."""
    if r < 2:
        raise InvalidInputError("need r >= 2")
    if n < 2:
        raise InvalidInputError("endpoint counts need n >= 2")
    c1, c2 = _as_code(s1), _as_code(s2)
    for c in (c1, c2):
        if not 0 <= c < 2 * r:
            raise InvalidInputError(f"letter outside rank {r}")
    a_n, b_n = endpoint_sequences(r, n)
    if c2 == c1 ^ 1:
        return a_n // (2 * r)
    if c2 == c1:
        return b_n // (2 * r)
    rest = (2 * r - 1) ** (n - 1) - a_n // (2 * r) - b_n // (2 * r)
    return rest // (2 * r - 2)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def reduced_word_array(r: int, n: int, first: int | None = None) -> np.ndarray:
    """All reduced words of length ``n`` as rows of codes, in lexicographic order."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    starts = range(2 * r) if first is None else [first]
    arr = np.array(list(starts), dtype=np.uint8).reshape(-1, 1)
    letters = np.arange(2 * r, dtype=np.uint8)
    for _ in range(n - 1):
        m = arr.shape[0]
        ext = np.repeat(arr, 2 * r, axis=0)
        col = np.tile(letters, m)
        keep = col != (ext[:, -1] ^ 1)
        arr = np.concatenate([ext[keep], col[keep, None]], axis=1)
    return arr


def cyclically_reduced_array(r: int, n: int, first: int | None = None) -> np.ndarray:
    arr = reduced_word_array(r, n, first)
    if n < 2:
        return arr
    return arr[arr[:, 0] != (arr[:, -1] ^ 1)]


def enumerate_reduced(r: int, n: int) -> Iterator[Word]:
    for row in reduced_word_array(r, n).tolist():
        yield Word(tuple(row), r)


def enumerate_cyclically_reduced(
    r: int, n: int, first: Union[Letter, int, None] = None
) -> Iterator[CyclicWord]:
    """Cyclically reduced words of length ``n`` in lexicographic order.

    ``first`` restricts to words starting with one letter, which shards the
    enumeration into ``2r`` disjoint parts.
    """
    if r < 2 or n < 0:
        raise InvalidInputError("need r >= 2 and n >= 0")
    code = None if first is None else _as_code(first)
    if n == 0:
        if code is None:
            yield CyclicWord((), r)
        return
    for row in cyclically_reduced_array(r, n, code).tolist():
        yield CyclicWord(tuple(row), r)
