"""Commutators of the free group F_r via Wicks forms ``A B C A^-1 B^-1 C^-1``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from . import parallel
from .errors import ConsistencyError, InvalidInputError
from .freewords import (
    ClassRep,
    CyclicWord,
    Word,
    abelianize_codes,
    codes_to_text,
    cyclic_reduce_codes,
    inverse_codes,
    min_rotation,
    reduce_codes,
    reduced_word_array,
)


@dataclass(frozen=True)
class WicksTripleFree:
    """Decomposition of a cyclic word as ``A B C A^-1 B^-1 C^-1`` without cancellation."""

    A: Word
    B: Word
    C: Word

    @property
    def rank(self) -> int:
        return self.A.rank

    @property
    def partition(self) -> tuple[int, int, int]:
        return len(self.A), len(self.B), len(self.C)

    def word(self) -> CyclicWord:
        a, b, c = self.A.letters, self.B.letters, self.C.letters
        return CyclicWord(a + b + c + inverse_codes(a) + inverse_codes(b) + inverse_codes(c), self.rank)


@dataclass(frozen=True)
class CommutatorWitness:
    U: Word
    V: Word

    def commutator(self) -> Word:
        return self.U * self.V * self.U.inverse() * self.V.inverse()

    def to_dict(self) -> dict:
        return {"U": str(self.U), "V": str(self.V)}


@dataclass(frozen=True)
class CountReport:
    k: int
    exact_count: int
    main_term: Fraction
    wicks_word_count: int

    @property
    def ratio(self) -> Optional[float]:
        if self.main_term == 0:
            return None
        return float(Fraction(self.exact_count) / self.main_term)

    @property
    def words_per_class(self) -> Optional[Fraction]:
        if self.exact_count == 0:
            return None
        return Fraction(self.wicks_word_count, self.exact_count)

    def to_dict(self) -> dict:
        ratio = self.ratio
        return {
            "k": self.k,
            "exact_count": self.exact_count,
            "main_term": str(self.main_term),
            "ratio": None if ratio is None else round(ratio, 6),
            "wicks_word_count": self.wicks_word_count,
        }


# ---------------------------------------------------------------------------
# decision procedure
# ---------------------------------------------------------------------------

def _decompositions(t: tuple[int, ...]) -> list[tuple[tuple[int, ...], ...]]:
    n = len(t)
    if n % 2:
        return []
    half = n // 2
    head, tail = t[:half], t[half:]
    found = []
    for n1 in range(half + 1):
        a = head[:n1]
        if tail[: n1] != inverse_codes(a):
            continue
        for n2 in range(half - n1 + 1):
            b, c = head[n1 : n1 + n2], head[n1 + n2 :]
            if tail[n1:] == inverse_codes(b) + inverse_codes(c):
                found.append((a, b, c))
    return found


def find_wicks_decompositions(c: CyclicWord) -> list[WicksTripleFree]:
    """Every ``(A, B, C)`` whose Wicks word equals ``c`` exactly, with no rotation."""
    r = c.rank
    return [
        WicksTripleFree(Word(a, r), Word(b, r), Word(cc, r))
        for a, b, cc in _decompositions(c.letters)
    ]


def _commutator_codes(u: tuple[int, ...], v: tuple[int, ...]) -> tuple[int, ...]:
    return reduce_codes(u + v + inverse_codes(u) + inverse_codes(v))


def is_commutator_free(w: Word) -> Optional[CommutatorWitness]:
    """Return a verified ``(U, V)`` with ``[U, V] == w``, or ``None`` if ``w`` is no commutator."""
    r = w.rank
    if any(abelianize_codes(w.letters, r)):
        return None
    cyc, conj = cyclic_reduce_codes(w.letters)
    n = len(cyc)
    for i in range(max(n, 1)):
        rot = cyc[i:] + cyc[:i]
        decs = _decompositions(rot)
        if not decs:
            continue
        a, b, c = decs[0]
        # (AB)(CA^-1)(AB)^-1(CA^-1)^-1 = ABCA^-1B^-1C^-1
        u0, v0 = a + b, reduce_codes(c + inverse_codes(a))
        h = conj + cyc[:i]
        hi = inverse_codes(h)
        u = reduce_codes(h + u0 + hi)
        v = reduce_codes(h + v0 + hi)
        if _commutator_codes(u, v) != w.letters:
            raise ConsistencyError(f"witness for {codes_to_text(w.letters)} failed to verify")
        return CommutatorWitness(Word(u, r), Word(v, r))
    return None


# ---------------------------------------------------------------------------
# enumeration by direct construction
# ---------------------------------------------------------------------------

def partitions3(x: int) -> list[tuple[int, int, int]]:
    """Ordered triples of non-negative integers summing to ``x``."""
    return [(n1, n2, x - n1 - n2) for n1 in range(x + 1) for n2 in range(x - n1 + 1)]


@lru_cache(maxsize=8)
def _half_words(r: int, x: int) -> np.ndarray:
    arr = reduced_word_array(r, x)
    arr.flags.writeable = False
    return arr


def wicks_rows_for_partition(r: int, k: int, part: tuple[int, int, int]) -> np.ndarray:
    """Rows of all Wicks words of length ``k`` with ``(|A|, |B|, |C|) == part``.

    The first half ``ABC`` ranges over reduced words; the remaining junctions
    (``C|A^-1``, ``A^-1|B^-1``, ``B^-1|C^-1`` and the wrap-around) are checked
    column-wise, so the cost is linear in the number of half words.
    """
    x = k // 2
    n1, n2, _ = part
    head = _half_words(r, x)
    if x == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    a, b, c = head[:, :n1], head[:, n1 : n1 + n2], head[:, n1 + n2 :]
    full = np.concatenate([head, a[:, ::-1] ^ 1, b[:, ::-1] ^ 1, c[:, ::-1] ^ 1], axis=1)
    ok = np.all(full[:, :-1] != (full[:, 1:] ^ 1), axis=1)
    ok &= full[:, 0] != (full[:, -1] ^ 1)
    return full[ok]


def _bits_per_letter(r: int) -> int:
    return max(1, (2 * r - 1).bit_length())


def packable(r: int, k: int) -> bool:
    return _bits_per_letter(r) * k <= 63


def pack_rows(rows: np.ndarray, r: int) -> np.ndarray:
    """Pack each row of codes into one uint64; numeric order equals lexicographic order."""
    bits = np.uint64(_bits_per_letter(r))
    keys = np.zeros(rows.shape[0], dtype=np.uint64)
    for j in range(rows.shape[1]):
        keys = (keys << bits) | rows[:, j].astype(np.uint64)
    return keys


def unpack_keys(keys: np.ndarray, r: int, k: int) -> np.ndarray:
    bits = _bits_per_letter(r)
    mask = np.uint64((1 << bits) - 1)
    rows = np.empty((keys.shape[0], k), dtype=np.uint8)
    for j in range(k):
        rows[:, k - 1 - j] = ((keys >> np.uint64(bits * j)) & mask).astype(np.uint8)
    return rows


def min_rotation_keys(keys: np.ndarray, r: int, k: int) -> np.ndarray:
    if k <= 1:
        return keys.copy()
    bits = _bits_per_letter(r)
    mask = np.uint64((1 << (bits * k)) - 1)
    best = keys.copy()
    for i in range(1, k):
        left, right = np.uint64(bits * i), np.uint64(bits * (k - i))
        rot = ((keys << left) | (keys >> right)) & mask
        np.minimum(best, rot, out=best)
    return best


def _shard_keys(args: tuple[int, int, tuple[int, int, int]]) -> np.ndarray:
    r, k, part = args
    return np.unique(pack_rows(wicks_rows_for_partition(r, k, part), r))


def _shard_rows(args: tuple[int, int, tuple[int, int, int]]) -> list[tuple[int, ...]]:
    r, k, part = args
    return [tuple(row) for row in wicks_rows_for_partition(r, k, part).tolist()]


def wicks_keys(r: int, k: int, threads: int = 1) -> np.ndarray:
    """Sorted unique packed Wicks words of length ``k`` (requires ``packable(r, k)``)."""
    shards = [(r, k, p) for p in partitions3(k // 2)]
    parts = parallel.ordered_map(_shard_keys, shards, threads)
    return np.unique(np.concatenate(parts)) if parts else np.zeros(0, dtype=np.uint64)


def _wicks_tuples(r: int, k: int, threads: int = 1) -> list[tuple[int, ...]]:
    shards = [(r, k, p) for p in partitions3(k // 2)]
    found: set[tuple[int, ...]] = set()
    for rows in parallel.ordered_map(_shard_rows, shards, threads):
        found.update(rows)
    return sorted(found)


def enumerate_wicks_commutators(r: int, k: int, threads: int = 1) -> Iterator[CyclicWord]:
    """Each distinct Wicks word of length ``k`` once, in lexicographic order."""
    if r < 2:
        raise InvalidInputError("need r >= 2")
    if k % 2 or k < 0:
        return
    if packable(r, k):
        rows = unpack_keys(wicks_keys(r, k, threads), r, k)
        for row in rows.tolist():
            yield CyclicWord(tuple(row), r)
    else:
        for t in _wicks_tuples(r, k, threads):
            yield CyclicWord(t, r)


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

def free_main_term(r: int, k: int) -> Fraction:
    """``(2r-2)^2 (2r-1)^(k/2-1) k^2 / (96 r)`` for even ``k``."""
    if k % 2 or k < 0:
        raise InvalidInputError(f"main term is defined for even k >= 0, got {k}")
    return Fraction((2 * r - 2) ** 2 * k * k, 96 * r) * Fraction(2 * r - 1) ** (k // 2 - 1)


def count_commutator_classes_free(r: int, k: int, threads: int = 1) -> CountReport:
    if r < 2:
        raise InvalidInputError("need r >= 2")
    if k % 2 or k < 0:
        return CountReport(k, 0, Fraction(0), 0)
    main = free_main_term(r, k)
    if packable(r, k):
        keys = wicks_keys(r, k, threads)
        reps = np.unique(min_rotation_keys(keys, r, k))
        return CountReport(k, int(reps.size), main, int(keys.size))
    words = _wicks_tuples(r, k, threads)
    reps = {min_rotation(t) for t in words}
    return CountReport(k, len(reps), main, len(words))


# ---------------------------------------------------------------------------
# forward oracle
# ---------------------------------------------------------------------------

def _join(x: tuple[int, ...], y: tuple[int, ...]) -> tuple[int, ...]:
    # both reduced: cancellation happens only at the junction
    i, n = 0, min(len(x), len(y))
    while i < n and x[-1 - i] == y[i] ^ 1:
        i += 1
    return x[: len(x) - i] + y[i:]


def _oracle_shard(args: tuple[int, int, list[int]]) -> set[tuple[int, ...]]:
    r, max_len, u_indices = args
    words = _witness_words(r, max_len)
    reps: set[tuple[int, ...]] = set()
    seen: set[tuple[int, ...]] = set()
    for i in u_indices:
        u = words[i]
        for v in words:
            comm = _join(_join(u, v), inverse_codes(_join(v, u)))
            cyc, _ = cyclic_reduce_codes(comm)
            if cyc in seen:
                continue
            seen.add(cyc)
            reps.add(min(cyc[j:] + cyc[:j] for j in range(len(cyc))) if cyc else ())
    return reps


@lru_cache(maxsize=4)
def _witness_words(r: int, max_len: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for n in range(max_len + 1):
        out.extend(tuple(row) for row in reduced_word_array(r, n).tolist())
    return out


def forward_commutator_class_keys(r: int, max_witness_len: int, threads: int = 1) -> set[tuple[int, ...]]:
    """Class keys of ``[U, V]`` over all reduced ``U, V`` with ``|U|, |V| <= max_witness_len``."""
    n_words = len(_witness_words(r, max_witness_len))
    n_shards = max(1, min(64, n_words))
    shards = [(r, max_witness_len, list(range(s, n_words, n_shards))) for s in range(n_shards)]
    result: set[tuple[int, ...]] = set()
    for part in parallel.ordered_map(_oracle_shard, shards, threads):
        result |= part
    return result


def forward_commutator_oracle(r: int, max_witness_len: int, threads: int = 1) -> set[ClassRep]:
    return {ClassRep(t, r) for t in forward_commutator_class_keys(r, max_witness_len, threads)}
