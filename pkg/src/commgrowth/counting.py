"""Counts of cyclically reduced words with trivial abelianization and their classes.

``c_k`` is computed by a dynamic program over (exponent-sum vector, last letter);
primitive counts ``p_d`` and class counts follow by Moebius inversion. The
Chebyshev constant-term expression and the asymptotic for ``c_2m`` are
evaluated alongside for comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import chebyshev

from .errors import CapacityError, ConsistencyError, InvalidInputError
from .freewords import count_cyclically_reduced, cyclically_reduced_array


# ---------------------------------------------------------------------------
# arithmetic functions
# ---------------------------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise InvalidInputError(f"cannot factor {n}")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def totient(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


# ---------------------------------------------------------------------------
# c_k, p_d and class counts
# ---------------------------------------------------------------------------

def _shift(arr: np.ndarray, axis: int, step: int) -> np.ndarray:
    out = np.zeros_like(arr)
    src = [slice(None)] * arr.ndim
    dst = [slice(None)] * arr.ndim
    if step > 0:
        src[axis], dst[axis] = slice(None, -step), slice(step, None)
    else:
        src[axis], dst[axis] = slice(-step, None), slice(None, step)
    out[tuple(dst)] = arr[tuple(src)]
    return out


@lru_cache(maxsize=None)
def ck(r: int, k: int) -> int:
    """Cyclically reduced words of length ``k`` in F_r with zero exponent sums."""
    if r < 2 or k < 0:
        raise InvalidInputError("need r >= 2 and k >= 0")
    if k == 0:
        return 1
    if k % 2:
        return 0
    # exact int64 unless the word count could overflow it
    dtype = np.int64 if 2 * r * (2 * r - 1) ** k < 2**62 else object
    # a walk that must return to the origin never strays further than k/2
    radius = k // 2
    size = 2 * radius + 1
    grid = np.indices((size,) * r) - radius
    l1 = np.abs(grid).sum(axis=0)
    total = 0
    for first in range(2 * r):
        # axis 0: last letter code; axes 1..r: exponent sums offset by radius
        state = np.zeros((2 * r,) + (size,) * r, dtype=dtype)
        idx = [first] + [radius] * r
        idx[1 + (first >> 1)] += -1 if first & 1 else 1
        state[tuple(idx)] = 1
        for step in range(2, k + 1):
            all_last = state.sum(axis=0)
            new = np.zeros_like(state)
            for c in range(2 * r):
                new[c] = _shift(all_last - state[c ^ 1], c >> 1, -1 if c & 1 else 1)
            # drop states too far from the origin to close up in the letters left
            new[:, l1 > k - step] = 0
            state = new
        origin = (radius,) * r
        total += sum(int(state[(c,) + origin]) for c in range(2 * r) if c != first ^ 1)
    return total


def ck_bruteforce(r: int, k: int) -> int:
    """Oracle for :func:`ck`: enumerate all cyclically reduced words."""
    if k == 0:
        return 1
    arr = cyclically_reduced_array(r, k)
    zero = np.ones(arr.shape[0], dtype=bool)
    for g in range(r):
        zero &= (arr == 2 * g).sum(axis=1) == (arr == 2 * g + 1).sum(axis=1)
    return int(zero.sum())


def pd(r: int, d: int) -> int:
    """Primitive cyclically reduced length-``d`` words with trivial abelianization."""
    return sum(mobius(d // e) * ck(r, e) for e in divisors(d))


@dataclass(frozen=True)
class TrivialClassCount:
    k: int
    by_primitive: Fraction
    by_totient: Fraction

    @property
    def value(self) -> int:
        return int(self.by_primitive)


def classes_trivial_ab_both(r: int, k: int) -> TrivialClassCount:
    if k < 1:
        raise InvalidInputError("k must be positive")
    divs = divisors(k)
    by_primitive = sum((Fraction(pd(r, d), d) for d in divs), Fraction(0))
    by_totient = sum((Fraction(ck(r, e) * totient(k // e), k) for e in divs), Fraction(0))
    if by_primitive != by_totient:
        raise ConsistencyError(f"class counts disagree at k={k}: {by_primitive} vs {by_totient}")
    if by_primitive.denominator != 1:
        raise ConsistencyError(f"non-integral class count {by_primitive} at k={k}")
    return TrivialClassCount(k, by_primitive, by_totient)


def classes_trivial_ab(r: int, k: int) -> int:
    """Conjugacy classes of length ``k`` inside the commutator subgroup of F_r."""
    return classes_trivial_ab_both(r, k).value


def conjugacy_growth_baseline(r: int, k: int) -> int:
    """All conjugacy classes of F_r of length ``k`` (necklace count)."""
    if r < 2 or k < 1:
        raise InvalidInputError("need r >= 2 and k >= 1")
    total = Fraction(0)
    for d in divisors(k):
        primitive = sum(mobius(d // e) * count_cyclically_reduced(r, e) for e in divisors(d))
        total += Fraction(primitive, d)
    if total.denominator != 1:
        raise ConsistencyError(f"non-integral class count at k={k}")
    return int(total)


# ---------------------------------------------------------------------------
# Laurent polynomials and the Chebyshev constant term
# ---------------------------------------------------------------------------

@dataclass
class LaurentPoly:
    """Integer Laurent polynomial in ``r`` variables, dense in the box ``[-bound, bound]^r``."""

    r: int
    bound: int
    coeffs: np.ndarray = field(repr=False)

    @classmethod
    def zero(cls, r: int, bound: int) -> "LaurentPoly":
        return cls(r, bound, np.zeros((2 * bound + 1,) * r, dtype=object))

    @classmethod
    def constant(cls, r: int, bound: int, value: int) -> "LaurentPoly":
        p = cls.zero(r, bound)
        p.coeffs[(bound,) * r] = value
        return p

    @classmethod
    def monomial(cls, r: int, bound: int, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        if any(abs(e) > bound for e in exps):
            raise CapacityError("monomial outside the exponent box")
        p = cls.zero(r, bound)
        p.coeffs[tuple(e + bound for e in exps)] = coeff
        return p

    @classmethod
    def variable_sum(cls, r: int, bound: int) -> "LaurentPoly":
        """``sum_i (x_i + 1/x_i)``."""
        p = cls.zero(r, bound)
        for i in range(r):
            for s in (1, -1):
                exps = [0] * r
                exps[i] = s
                p = p + cls.monomial(r, bound, exps)
        return p

    def _compatible(self, other: "LaurentPoly") -> None:
        if (self.r, self.bound) != (other.r, other.bound):
            raise InvalidInputError("Laurent polynomials live in different boxes")

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._compatible(other)
        return LaurentPoly(self.r, self.bound, self.coeffs + other.coeffs)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._compatible(other)
        return LaurentPoly(self.r, self.bound, self.coeffs - other.coeffs)

    def __rmul__(self, scalar: int) -> "LaurentPoly":
        return LaurentPoly(self.r, self.bound, self.coeffs * scalar)

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        nz = np.argwhere(self.coeffs != 0)
        return [(tuple(int(i) - self.bound for i in idx), self.coeffs[tuple(idx)]) for idx in nz]

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._compatible(other)
        small, big = (self, other) if len(self.terms()) <= len(other.terms()) else (other, self)
        out = np.zeros_like(big.coeffs)
        for exps, c in small.terms():
            shifted = big.coeffs
            for axis, e in enumerate(exps):
                if e:
                    lost = np.take(shifted, range(-e, 0) if e > 0 else range(0, -e), axis=axis)
                    if np.any(lost != 0):
                        raise CapacityError("product exceeds the exponent box")
                    shifted = _shift(shifted, axis, e)
            out = out + c * shifted
        return LaurentPoly(self.r, self.bound, out)

    def constant_term(self) -> int:
        return int(self.coeffs[(self.bound,) * self.r])

    def evaluate(self, point: Sequence[float]) -> float:
        total = 0.0
        for exps, c in self.terms():
            term = float(c)
            for x, e in zip(point, exps):
                term *= x**e
            total += term
        return total


RIVIN_MAX_K = 16


def chebyshev_poly(r: int, k: int) -> LaurentPoly:
    """``(2 sqrt(2r-1))^k T_k(u / (2 sqrt(2r-1)))`` with ``u = sum(x_i + 1/x_i)``, radical-free.

    Uses ``P_0 = 1``, ``P_1 = u``, ``P_k = 2u P_(k-1) - 4(2r-1) P_(k-2)``.
    """
    if r not in (2, 3) or not 0 <= k <= RIVIN_MAX_K:
        raise CapacityError(f"constant-term engine supports r in {{2, 3}}, k <= {RIVIN_MAX_K}")
    bound = max(k, 1)
    u = LaurentPoly.variable_sum(r, bound)
    prev, cur = LaurentPoly.constant(r, bound, 1), u
    if k == 0:
        return prev
    q4 = 4 * (2 * r - 1)
    for _ in range(k - 1):
        prev, cur = cur, 2 * (u * cur) - q4 * prev
    return cur


def rivin_ct(r: int, k: int) -> int:
    return chebyshev_poly(r, k).constant_term()


def chebyshev_numeric(r: int, k: int, point: Sequence[float]) -> float:
    """Direct floating evaluation of the radical expression at ``point``."""
    scale = 2 * math.sqrt(2 * r - 1)
    v = sum(x + 1 / x for x in point) / scale
    return scale**k * float(chebyshev.chebval(v, [0] * k + [1]))


# ---------------------------------------------------------------------------
# asymptotic for c_2m
# ---------------------------------------------------------------------------

def sharp_sigma(r: int) -> float:
    q = math.sqrt(2 * r - 1)
    return math.sqrt((1 + math.sqrt((r + q) / (r - q))) / q)


def sharp_asymptotic(r: int, m: int) -> float:
    """``4r(2r-1)^(2m-1) / ((2 pi)^(r/2) sigma^r m^(r/2))``."""
    if r < 2 or m < 1:
        raise InvalidInputError("need r >= 2 and m >= 1")
    sigma = sharp_sigma(r)
    return 4 * r * (2 * r - 1) ** (2 * m - 1) / ((2 * math.pi) ** (r / 2) * sigma**r * m ** (r / 2))


def sharp_ratio(r: int, m: int) -> float:
    return ck(r, 2 * m) / sharp_asymptotic(r, m)


# ---------------------------------------------------------------------------
# series table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeriesRow:
    k: int
    c_k: int
    p_k: int
    classes: int
    rivin_ct: Optional[int]
    sharp_ratio: Optional[float]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "c_k": self.c_k,
            "p_k": self.p_k,
            "classes": self.classes,
            "rivin_ct": self.rivin_ct,
            "sharp_ratio": None if self.sharp_ratio is None else round(self.sharp_ratio, 6),
        }


@dataclass(frozen=True)
class SeriesTable:
    r: int
    rows: tuple[SeriesRow, ...]

    def check(self) -> None:
        for row in self.rows:
            if row.c_k != sum(pd(self.r, d) for d in divisors(row.k)):
                raise ConsistencyError(f"divisor-sum identity fails at k={row.k}")


def series_table(r: int, max_k: int) -> SeriesTable:
    rows = []
    for k in range(1, max_k + 1):
        ct = rivin_ct(r, k) if r in (2, 3) and k <= RIVIN_MAX_K else None
        ratio = sharp_ratio(r, k // 2) if k % 2 == 0 else None
        rows.append(SeriesRow(k, ck(r, k), pd(r, k), classes_trivial_ab(r, k), ct, ratio))
    return SeriesTable(r, tuple(rows))


def rivin_discrepancy_report(r: int, max_k: int) -> list[dict]:
    """Rows comparing the constant term with ``c_k``; the two are not expected to agree."""
    rows = []
    for k in range(1, min(max_k, RIVIN_MAX_K) + 1):
        ct, c = rivin_ct(r, k), ck(r, k)
        rows.append({"r": r, "k": k, "constant_term": ct, "c_k": c, "difference": ct - c})
    return rows
