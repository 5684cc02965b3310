"""SL2(Z) and PSL2(Z): generator words, the map to Z/2 * Z/3, commutator tests and trace triples.

Matrices are compared in PSL2, i.e. up to a global sign; ``Mat2.normalized``
picks the representative whose first nonzero entry is positive.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator, Optional, Sequence, Union

from . import parallel
from .errors import ConsistencyError, InvalidInputError
from .freeprod import FPDecision, FPWord, FreeProduct, hecke_group


@dataclass(frozen=True)
class Mat2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if self.a * self.d - self.b * self.c != 1:
            raise InvalidInputError(f"determinant of {self.rows()} is not 1")

    @classmethod
    def parse(cls, text: str) -> "Mat2":
        parts = text.replace(",", " ").replace("(", " ").replace(")", " ").split()
        if len(parts) != 4:
            raise InvalidInputError(f"expected four integers, got {text!r}")
        return cls(*(int(p) for p in parts))

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "Mat2":
        return Mat2(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def __pow__(self, n: int) -> "Mat2":
        base, out = (self if n >= 0 else self.inverse()), IDENTITY
        for _ in range(abs(n)):
            out = out @ base
        return out

    @property
    def trace(self) -> int:
        return self.a + self.d

    def normalized(self) -> "Mat2":
        first = next(x for x in (self.a, self.b, self.c, self.d) if x)
        return self if first > 0 else -self

    def key(self) -> tuple[int, int, int, int]:
        n = self.normalized()
        return (n.a, n.b, n.c, n.d)

    def psl_equal(self, other: "Mat2") -> bool:
        return self.key() == other.key()

    def __str__(self) -> str:
        return f"{self.a} {self.b} {self.c} {self.d}"


IDENTITY = Mat2(1, 0, 0, 1)
S = Mat2(0, -1, 1, 0)
T = Mat2(1, 1, 0, 1)
T_INV = T.inverse()
R = S @ T

_GEN = {"S": S, "T": T, "t": T_INV}


# ---------------------------------------------------------------------------
# generator words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenWord:
    """Word over ``S``, ``T`` and ``t`` (for ``T^-1``)."""

    letters: str = ""

    def __post_init__(self) -> None:
        letters = "".join(self.letters.split())
        bad = set(letters) - set(_GEN)
        if bad:
            raise InvalidInputError(f"unknown generator letters {sorted(bad)}")
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters or "1"

    def __add__(self, other: "GenWord") -> "GenWord":
        return GenWord(self.letters + other.letters)

    def inverse(self) -> "GenWord":
        # S^-1 = -S, which is S in PSL2
        swap = {"S": "S", "T": "t", "t": "T"}
        return GenWord("".join(swap[ch] for ch in reversed(self.letters)))

    def syllables(self) -> list[tuple[str, int]]:
        """Run-length form, with ``T``/``t`` runs merged into signed exponents."""
        out: list[tuple[str, int]] = []
        for ch in self.letters:
            g, e = ("T", 1) if ch == "T" else ("T", -1) if ch == "t" else ("S", 1)
            if out and out[-1][0] == g:
                out[-1] = (g, out[-1][1] + e)
            else:
                out.append((g, e))
        return out


def evaluate(word: Union[GenWord, str]) -> Mat2:
    if isinstance(word, str):
        word = GenWord(word)
    m = IDENTITY
    for ch in word.letters:
        m = m @ _GEN[ch]
    return m


def _t_power(q: int) -> str:
    return "T" * q if q >= 0 else "t" * -q


def decompose_ST(m: Mat2) -> GenWord:
    """A word evaluating to ``±m``, by Euclid's algorithm on the first column.

    Each step replaces ``m`` with ``S T^-q m`` where ``q = floor(a / c)``, so
    ``|c|`` strictly decreases; once ``c = 0`` the matrix is ``±T^b``.
    """
    if not isinstance(m, Mat2):
        raise InvalidInputError("expected a Mat2")
    parts: list[str] = []
    cur = m
    while cur.c != 0:
        q = cur.a // cur.c
        cur = S @ (T ** -q) @ cur
        # m = T^q S^-1 cur, and S^-1 = ±S
        parts.append(_t_power(q) + "S")
    sign = 1 if cur.a == 1 else -1
    parts.append(_t_power(sign * cur.b))
    word = GenWord("".join(parts))
    if not evaluate(word).psl_equal(m):
        raise ConsistencyError(f"decomposition of {m} does not evaluate back")
    return word


def random_genword(rng: random.Random, max_len: int) -> GenWord:
    n = rng.randint(0, max_len)
    return GenWord("".join(rng.choice("STt") for _ in range(n)))


# ---------------------------------------------------------------------------
# bridge to Z/2 * Z/3
# ---------------------------------------------------------------------------

S_LETTER = (1, 1)
R_LETTER = (2, 1)
R2_LETTER = (2, 2)
# T = S^-1 R = ±S R and T^-1 = R^-1 S in PSL2
_TO_FP = {"S": (S_LETTER,), "T": (S_LETTER, R_LETTER), "t": (R2_LETTER, S_LETTER)}
_FROM_FP = {S_LETTER: S, R_LETTER: R, R2_LETTER: R @ R}


@lru_cache(maxsize=1)
def modular_free_product() -> FreeProduct:
    return FreeProduct(*hecke_group(3))


def genword_to_fp(word: GenWord) -> FPWord:
    raw = [letter for ch in word.letters for letter in _TO_FP[ch]]
    return modular_free_product().normalize(raw)


def evaluate_fp(word: FPWord) -> Mat2:
    m = IDENTITY
    for letter in word.letters:
        m = m @ _FROM_FP[tuple(letter)]
    return m


def to_free_product_word(m: Mat2) -> FPWord:
    w = genword_to_fp(decompose_ST(m))
    if not evaluate_fp(w).psl_equal(m):
        raise ConsistencyError(f"free-product word for {m} does not evaluate back")
    return w


def classify_psl2(m: Mat2) -> FPDecision:
    return modular_free_product().is_commutator(to_free_product_word(m))


def is_commutator_psl2(m: Mat2) -> bool:
    return bool(classify_psl2(m))


# ---------------------------------------------------------------------------
# abelianization congruences
# ---------------------------------------------------------------------------

def chi(m: Mat2) -> int:
    a, b, c, d = m.a, m.b, m.c, m.d
    return ((1 - c * c) * (b * d + 3 * (c - 1) * d + c + 3) + c * (a + d - 3)) % 12


def chi_second(m: Mat2) -> int:
    """The companion congruence; equals ``chi(-m)``."""
    a, b, c, d = m.a, m.b, m.c, m.d
    return ((1 - c * c) * (b * d + 3 * (c + 1) * d - c + 3) + c * (a + d + 3)) % 12


def in_commutator_subgroup_psl2(m: Mat2) -> bool:
    return chi(m) == 0 or chi_second(m) == 0


# ---------------------------------------------------------------------------
# trace identity and the Markoff-type surface
# ---------------------------------------------------------------------------

def markoff_eval(x: int, y: int, z: int) -> int:
    return x * x + y * y + z * z - x * y * z - 2


@dataclass(frozen=True)
class TraceTriple:
    x: int
    y: int
    z: int
    T: int

    def __post_init__(self) -> None:
        if markoff_eval(self.x, self.y, self.z) != self.T:
            raise ConsistencyError(f"trace identity fails for {self}")


def commutator(a: Mat2, b: Mat2) -> Mat2:
    return a @ b @ a.inverse() @ b.inverse()


def trace_identity_check(a: Mat2, b: Mat2) -> TraceTriple:
    return TraceTriple(a.trace, b.trace, (a @ b).trace, commutator(a, b).trace)


def psl2_ball(max_len: int) -> list[tuple[GenWord, Mat2]]:
    """Distinct PSL2 elements reachable by words of length ``<= max_len``, shortest word first."""
    seen = {IDENTITY.key()}
    out = [(GenWord(""), IDENTITY)]
    frontier = out[:]
    for _ in range(max_len):
        nxt = []
        for word, m in frontier:
            for ch in "STt":
                nm = (m @ _GEN[ch]).normalized()
                if nm.key() not in seen:
                    seen.add(nm.key())
                    nxt.append((GenWord(word.letters + ch), nm))
        out.extend(nxt)
        frontier = nxt
    return out


Witness = tuple[int, int]


def _scan_shard(args: tuple) -> dict[tuple[int, int, int], Witness]:
    max_len, bound, lo, hi = args
    ball = _ball_cached(max_len)
    found: dict[tuple[int, int, int], Witness] = {}
    for i in range(lo, hi):
        a = ball[i][1]
        for j, (_, b) in enumerate(ball):
            tri = trace_identity_check(a, b)
            if abs(tri.T) > bound:
                continue
            key = (tri.x, tri.y, tri.z)
            if key not in found:
                found[key] = (i, j)
    return found


@lru_cache(maxsize=4)
def _ball_cached(max_len: int) -> tuple[tuple[GenWord, Mat2], ...]:
    return tuple(psl2_ball(max_len))


SCAN_BLOCK = 16


@dataclass(frozen=True)
class MarkoffPoint:
    triple: TraceTriple
    witness_a: GenWord
    witness_b: GenWord

    def to_dict(self) -> dict:
        t = self.triple
        return {
            "x": t.x,
            "y": t.y,
            "z": t.z,
            "T": t.T,
            "witnessA": str(self.witness_a),
            "witnessB": str(self.witness_b),
        }


def markoff_scan(
    max_len: int,
    trace_bound: int,
    out: Optional[Union[str, Path]] = None,
    resume: bool = False,
    threads: int = 1,
) -> list[MarkoffPoint]:
    """Trace triples ``(tr A, tr B, tr AB)`` of pairs from the length-``max_len`` ball.

    Only pairs with ``|tr [A, B]| <= trace_bound`` are kept. Each triple keeps
    the witness pair that comes first in ball order. With ``out`` set, finished
    blocks are checkpointed to ``<out>.ckpt`` and ``resume`` continues from it.
    """
    if max_len < 0 or trace_bound < 0:
        raise InvalidInputError("bounds must be non-negative")
    ball = _ball_cached(max_len)
    blocks = [(lo, min(lo + SCAN_BLOCK, len(ball))) for lo in range(0, len(ball), SCAN_BLOCK)]
    params = {"max_len": max_len, "trace_bound": trace_bound}
    ckpt = Path(str(out) + ".ckpt") if out is not None else None
    merged: dict[tuple[int, int, int], Witness] = {}
    done = 0
    if resume and ckpt is not None and ckpt.exists():
        state = json.loads(ckpt.read_text())
        if state["params"] != params:
            raise InvalidInputError(f"checkpoint {ckpt} was written with different parameters")
        done = state["blocks_done"]
        merged = {tuple(r["triple"]): tuple(r["witness"]) for r in state["found"]}

    step = max(1, threads) * 4
    for start in range(done, len(blocks), step):
        batch = blocks[start : start + step]
        results = parallel.ordered_map(_scan_shard, [(max_len, trace_bound, lo, hi) for lo, hi in batch], threads)
        for shard in results:
            for key, wit in shard.items():
                if key not in merged or wit < merged[key]:
                    merged[key] = wit
        if ckpt is not None:
            state = {
                "params": params,
                "blocks_done": start + len(batch),
                "found": [{"triple": list(k), "witness": list(v)} for k, v in sorted(merged.items())],
            }
            ckpt.write_text(json.dumps(state))

    points = [
        MarkoffPoint(TraceTriple(x, y, z, markoff_eval(x, y, z)), ball[i][0], ball[j][0])
        for (x, y, z), (i, j) in merged.items()
    ]
    points.sort(key=lambda p: (p.triple.T, p.triple.x, p.triple.y, p.triple.z))
    if out is not None:
        with open(out, "w") as fh:
            for p in points:
                fh.write(json.dumps(p.to_dict()) + "\n")
    return points


def random_pairs(seed: int, count: int, max_len: int = 30) -> Iterator[tuple[Mat2, Mat2]]:
    rng = random.Random(seed)
    for _ in range(count):
        yield evaluate(random_genword(rng, max_len)), evaluate(random_genword(rng, max_len))


def random_matrices(seed: int, count: int, max_len: int = 30) -> list[Mat2]:
    rng = random.Random(seed)
    return [evaluate(random_genword(rng, max_len)) for _ in range(count)]


def psl2_fp_abelian_trivial(m: Mat2) -> bool:
    return modular_free_product().has_trivial_abelianization(to_free_product_word(m).letters)


def commutator_words(u: Sequence[str], v: Sequence[str]) -> Mat2:
    """``[eval(u), eval(v)]`` for generator-word strings."""
    return commutator(evaluate(GenWord("".join(u))), evaluate(GenWord("".join(v))))
