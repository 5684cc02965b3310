"""Words in a free product ``G1 * G2`` of two finite groups and their Wicks forms.

A letter is a pair ``(factor, elem)`` with ``factor`` in ``{1, 2}`` and ``elem``
a non-identity index of that factor's table. Tuples of letters compare
lexicographically, which is the order used for canonical class representatives.

The commutator forms follow Wicks' classification for two factors:

====  ==========================================  ==============================
form  shape                                       conditions
====  ==========================================  ==============================
1, 2  ``a``                                       ``a`` a commutator of G1 / G2
3     ``A a1 A^-1 a2^-1``                         ``a1 ~ a2`` in one factor
4     ``a1 A a2^-1 A^-1``                         ``a1 ~ a2`` in one factor
5     ``A B A^-1 B^-1``
6     ``A a1 B a2 A^-1 a3 B^-1 a4``               ``a4 a3 a2 a1 = 1``
7     ``a1 A a2 B a3 A^-1 a4 B^-1``               ``a4 a3 a2 a1 = 1``
8     ``A a1 B b1 C a2 A^-1 b2 B^-1 a3 C^-1 b3``  ``a3 a2 a1 = b3 b2 b1 = 1``
9     ``b1 A a1 B b2 C a2 A^-1 b3 B^-1 a3 C^-1``  ``a3 a2 a1 = b3 b2 b1 = 1``
====  ==========================================  ==============================

Greek letters of one form all lie in the same factor (either one: both factor
assignments are matched). Forms 3 and 4 invert the second occurrence of ``A``;
``literal=True`` matches the variant with both occurrences positive, which is
kept only for comparison since it admits words with nontrivial abelianization.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence

from . import parallel
from .errors import ConsistencyError, InvalidInputError
from .freewords import min_rotation
from .groups import FiniteGroupTable

Letter = tuple[int, int]
Codes = tuple[Letter, ...]


class FPLetter(NamedTuple):
    factor: int
    elem: int


@dataclass(frozen=True)
class FPWord:
    """Normal-form word: non-identity letters, adjacent letters in different factors."""

    letters: Codes

    def __post_init__(self) -> None:
        letters = tuple(FPLetter(int(f), int(e)) for f, e in self.letters)
        object.__setattr__(self, "letters", letters)
        for f, e in letters:
            if f not in (1, 2) or e <= 0:
                raise InvalidInputError(f"invalid free-product letter ({f}, {e})")
        for x, y in zip(letters, letters[1:]):
            if x[0] == y[0]:
                raise InvalidInputError("adjacent letters in the same factor")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @property
    def is_fully_cyclically_reduced(self) -> bool:
        return len(self.letters) < 2 or self.letters[0][0] != self.letters[-1][0]


@dataclass(frozen=True)
class WicksFormFP:
    form_id: int
    subwords: dict[str, FPWord] = field(hash=False)
    greek: dict[str, FPLetter] = field(hash=False)
    literal: bool = False

    @property
    def greek_factor(self) -> Optional[int]:
        factors = {x.factor for x in self.greek.values()}
        return factors.pop() if len(factors) == 1 else None

    def to_dict(self) -> dict:
        return {
            "form": self.form_id,
            "subwords": {k: [list(x) for x in v.letters] for k, v in self.subwords.items()},
            "greek": {k: list(v) for k, v in self.greek.items()},
        }


@dataclass(frozen=True)
class FPDecision:
    accepted: bool
    cyclic: Codes
    conjugator: Codes
    form: Optional[WicksFormFP] = None
    rotation: Optional[int] = None
    witness: Optional[tuple[Codes, Codes]] = None

    def __bool__(self) -> bool:
        return self.accepted


@dataclass(frozen=True)
class FPCountReport:
    k: int
    exact_count: int
    main_term: Optional[Fraction]
    per_form_counts: dict[int, int]
    wicks_word_count: int

    @property
    def ratio(self) -> Optional[float]:
        if not self.main_term:
            return None
        return float(Fraction(self.exact_count) / self.main_term)

    def to_dict(self) -> dict:
        ratio = self.ratio
        return {
            "k": self.k,
            "exact_count": self.exact_count,
            "main_term": None if self.main_term is None else str(self.main_term),
            "ratio": None if ratio is None else round(ratio, 6),
            "per_form_counts": {str(f): n for f, n in sorted(self.per_form_counts.items())},
            "wicks_word_count": self.wicks_word_count,
        }


@dataclass(frozen=True)
class TrivialProductCount:
    k: int
    enumerated: int
    closed_form: int
    path_formula: int
    trivial_abelianization: int


# pattern tokens: upper-case = subword variable, lower-case = single letter;
# a trailing "-" means the slot holds the inverse
FORMS: dict[int, tuple[str, ...]] = {
    3: ("A", "a1", "A-", "a2-"),
    4: ("a1", "A", "a2-", "A-"),
    5: ("A", "B", "A-", "B-"),
    6: ("A", "a1", "B", "a2", "A-", "a3", "B-", "a4"),
    7: ("a1", "A", "a2", "B", "a3", "A-", "a4", "B-"),
    8: ("A", "a1", "B", "b1", "C", "a2", "A-", "b2", "B-", "a3", "C-", "b3"),
    9: ("b1", "A", "a1", "B", "b2", "C", "a2", "A-", "b3", "B-", "a3", "C-"),
}
LITERAL_FORMS: dict[int, tuple[str, ...]] = {
    3: ("A", "a1", "A", "a2-"),
    4: ("a1", "A", "a2-", "A"),
}


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ``parts``-tuples of positive integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        yield tuple(bounds[i + 1] - bounds[i] for i in range(parts))


class FreeProduct:
    """The free product of two validated finite groups."""

    def __init__(self, g1: FiniteGroupTable, g2: FiniteGroupTable):
        for g in (g1, g2):
            g.validate()
            if g.order < 2:
                raise InvalidInputError("free-product factors must be nontrivial")
        self.g1, self.g2 = g1, g2
        self.groups = (None, g1, g2)

    def __repr__(self) -> str:
        return f"FreeProduct(|G1|={self.g1.order}, |G2|={self.g2.order})"

    # -- word arithmetic ---------------------------------------------------

    def _check(self, letters: Iterable[Sequence[int]]) -> list[Letter]:
        out = []
        for f, e in letters:
            if f not in (1, 2) or not 0 <= e < self.groups[f].order:
                raise InvalidInputError(f"letter ({f}, {e}) outside the factors")
            out.append((f, e))
        return out

    def normalize_codes(self, letters: Iterable[Letter]) -> Codes:
        stack: list[Letter] = []
        groups = self.groups
        for f, e in letters:
            if e == 0:
                continue
            if stack and stack[-1][0] == f:
                m = groups[f].mult[stack.pop()[1]][e]
                if m:
                    stack.append((f, m))
            else:
                stack.append((f, e))
        return tuple(stack)

    def normalize(self, raw: Iterable[Sequence[int]]) -> FPWord:
        return FPWord(self.normalize_codes(self._check(raw)))

    def inverse_codes(self, t: Sequence[Letter]) -> Codes:
        groups = self.groups
        return tuple((f, groups[f].inverses[e]) for f, e in reversed(t))

    def multiply(self, *words: Sequence[Letter]) -> Codes:
        return self.normalize_codes(itertools.chain.from_iterable(words))

    def commutator_codes(self, u: Sequence[Letter], v: Sequence[Letter]) -> Codes:
        return self.multiply(u, v, self.inverse_codes(u), self.inverse_codes(v))

    def cyclic_reduce_codes(self, t: Codes) -> tuple[Codes, Codes]:
        """``(cyc, conj)`` with ``conj . cyc . conj^-1 == t``; ``t`` in normal form."""
        conj: list[Letter] = []
        while len(t) >= 2 and t[0][0] == t[-1][0]:
            f = t[0][0]
            first = t[0]
            merged = self.groups[f].mult[t[-1][1]][first[1]]
            conj.append(first)
            t = t[1:-1] + (((f, merged),) if merged else ())
            if merged:
                break
        return t, tuple(conj)

    def cyclic_reduce(self, w: FPWord) -> tuple[FPWord, FPWord]:
        cyc, conj = self.cyclic_reduce_codes(w.letters)
        return FPWord(cyc), FPWord(conj)

    def class_key(self, t: Sequence[Letter]) -> Codes:
        """Canonical key of the conjugacy class of a normal-form word."""
        cyc, _ = self.cyclic_reduce_codes(tuple(t))
        if len(cyc) == 1:
            f, e = cyc[0]
            return ((f, self.groups[f].class_minimum[e]),)
        return min_rotation(cyc)

    def canonical_rep(self, w: FPWord) -> FPWord:
        return FPWord(self.class_key(w.letters))

    def abelian_image(self, t: Sequence[Letter]) -> tuple[bool, bool]:
        """Whether each factor's letter product lies in that factor's derived subgroup."""
        prod = [None, 0, 0]
        for f, e in t:
            prod[f] = self.groups[f].mult[prod[f]][e]
        return (self.g1.in_derived_subgroup(prod[1]), self.g2.in_derived_subgroup(prod[2]))

    def has_trivial_abelianization(self, t: Sequence[Letter]) -> bool:
        return all(self.abelian_image(t))

    # -- Wicks forms -------------------------------------------------------

    def _match_pattern(self, t: Codes, form_id: int, pattern: tuple[str, ...], literal: bool) -> list[WicksFormFP]:
        names = [tok.rstrip("-") for tok in pattern]
        variables = sorted({nm for nm in names if nm[0].isupper()}, key=names.index)
        n_greek = sum(1 for tok in pattern if tok[0].islower())
        rest = len(t) - n_greek
        if rest < 0 or rest % 2:
            return []
        groups = self.groups
        found = []
        for lengths in _compositions(rest // 2, len(variables)):
            size = dict(zip(variables, lengths))
            seg: dict[str, Codes] = {}
            greek: dict[str, Letter] = {}
            pos, ok = 0, True
            for tok in pattern:
                name, inv = tok.rstrip("-"), tok.endswith("-")
                if name[0].isupper():
                    piece = t[pos : pos + size[name]]
                    pos += size[name]
                    if name not in seg:
                        seg[name] = piece
                    elif piece != (self.inverse_codes(seg[name]) if inv else seg[name]):
                        ok = False
                        break
                else:
                    f, e = t[pos]
                    pos += 1
                    greek[name] = (f, groups[f].inverses[e]) if inv else (f, e)
            if ok and self._greek_ok(form_id, greek):
                found.append(
                    WicksFormFP(
                        form_id,
                        {k: FPWord(v) for k, v in seg.items()},
                        {k: FPLetter(*v) for k, v in greek.items()},
                        literal,
                    )
                )
        return found

    def _greek_ok(self, form_id: int, greek: dict[str, Letter]) -> bool:
        if not greek:
            return True
        factors = {f for f, _ in greek.values()}
        if len(factors) != 1:
            return False
        g = self.groups[factors.pop()]
        val = {k: e for k, (_, e) in greek.items()}
        m = g.mult
        if form_id in (3, 4):
            return g.are_conjugate(val["a1"], val["a2"])
        if form_id in (6, 7):
            return m[val["a4"]][m[val["a3"]][m[val["a2"]][val["a1"]]]] == 0
        if form_id in (8, 9):
            return (
                m[val["a3"]][m[val["a2"]][val["a1"]]] == 0
                and m[val["b3"]][m[val["b2"]][val["b1"]]] == 0
            )
        return True

    def match_forms_codes(self, t: Codes, literal: bool = False) -> list[WicksFormFP]:
        if len(t) >= 2 and t[0][0] == t[-1][0]:
            raise InvalidInputError("word is not fully cyclically reduced")
        if len(t) == 0:
            return [WicksFormFP(5, {"A": FPWord(()), "B": FPWord(())}, {}, literal)]
        if len(t) == 1:
            f, e = t[0]
            if self.groups[f].is_factor_commutator(e):
                return [WicksFormFP(f, {}, {"a": FPLetter(f, e)}, literal)]
            return []
        forms = dict(FORMS)
        if literal:
            forms.update(LITERAL_FORMS)
        found = []
        for form_id, pattern in forms.items():
            found.extend(self._match_pattern(t, form_id, pattern, literal))
        return found

    def match_wicks_form(self, c: FPWord, literal: bool = False) -> list[WicksFormFP]:
        """All form matches of ``c`` exactly as written (no rotation)."""
        return self.match_forms_codes(c.letters, literal)

    def form_witness(self, form: WicksFormFP) -> Optional[tuple[Codes, Codes]]:
        """``(U, V)`` with ``[U, V]`` equal to the matched word, for forms 1-5."""
        if form.literal and form.form_id in LITERAL_FORMS:
            return None
        fid = form.form_id
        sub = {k: v.letters for k, v in form.subwords.items()}
        if fid in (1, 2):
            f, e = form.greek["a"]
            x, y = self.groups[f].commutator_pairs[e]
            return self.normalize_codes([(f, x)]), self.normalize_codes([(f, y)])
        if fid in (3, 4):
            f, a1 = form.greek["a1"]
            _, a2 = form.greek["a2"]
            g = self.groups[f].conjugator(a1, a2)
            A = sub["A"]
            if fid == 3:
                u = self.multiply(A, [(f, a1)], self.inverse_codes(A))
                v = self.multiply([(f, g)], self.inverse_codes(A))
            else:
                u = ((f, a1),)
                v = self.multiply(A, [(f, g)])
            return u, v
        if fid == 5:
            return sub["A"], sub["B"]
        return None

    def is_commutator_codes(self, t: Sequence[Letter]) -> FPDecision:
        w = self.normalize_codes(tuple(t))
        cyc, conj = self.cyclic_reduce_codes(w)
        n = len(cyc)
        first_match: Optional[tuple[int, WicksFormFP]] = None
        for i in range(max(n, 1)):
            rot = cyc[i:] + cyc[:i]
            for form in self.match_forms_codes(rot):
                if form.form_id <= 5:
                    witness = self._conjugate_back(form, conj + cyc[:i], w)
                    return FPDecision(True, cyc, conj, form, i, witness)
                if first_match is None:
                    first_match = (i, form)
        if first_match is not None:
            i, form = first_match
            return FPDecision(True, cyc, conj, form, i, None)
        return FPDecision(False, cyc, conj)

    def _conjugate_back(self, form: WicksFormFP, h: Codes, w: Codes) -> tuple[Codes, Codes]:
        u0, v0 = self.form_witness(form)
        hi = self.inverse_codes(h)
        u, v = self.multiply(h, u0, hi), self.multiply(h, v0, hi)
        if self.commutator_codes(u, v) != w:
            raise ConsistencyError(f"form {form.form_id} witness failed for {w}")
        return u, v

    def is_commutator(self, w: FPWord | Sequence[Letter]) -> FPDecision:
        letters = w.letters if isinstance(w, FPWord) else self._check(w)
        return self.is_commutator_codes(letters)

    def search_witness(self, w: Sequence[Letter], max_len: int) -> Optional[tuple[Codes, Codes]]:
        """Bounded search for ``(U, V)``, ``|U|, |V| <= max_len``, with ``[U, V] == w`` exactly."""
        w = self.normalize_codes(tuple(w))
        target = self.class_key(w)
        cyc, conj = self.cyclic_reduce_codes(w)
        words = list(self.enumerate_normal_forms(max_len))
        for u in words:
            for v in words:
                comm = self.commutator_codes(u, v)
                if self.class_key(comm) != target:
                    continue
                h = self._conjugator_between(comm, w)
                if h is None:
                    continue
                hi = self.inverse_codes(h)
                uu, vv = self.multiply(h, u, hi), self.multiply(h, v, hi)
                if self.commutator_codes(uu, vv) == w:
                    return uu, vv
        return None

    def _conjugator_between(self, x: Codes, y: Codes) -> Optional[Codes]:
        """Some ``h`` with ``h x h^-1 == y``."""
        cx, gx = self.cyclic_reduce_codes(x)
        cy, gy = self.cyclic_reduce_codes(y)
        if len(cx) != len(cy):
            return None
        if len(cx) <= 1:
            if not cx:
                return gy if not cy else None
            (f, a), (f2, b) = cx[0], cy[0]
            g = self.groups[f].conjugator(a, b) if f == f2 else None
            if g is None:
                return None
            return self.multiply(gy, [(f, g)], self.inverse_codes(gx))
        n = len(cx)
        for j in range(n):
            if cy[j:] + cy[:j] == cx:
                # cx = P^-1 cy P with P = cy[:j]
                return self.multiply(gy, cy[:j], self.inverse_codes(gx))
        return None

    # -- enumeration -------------------------------------------------------

    def enumerate_normal_forms(self, max_len: int) -> Iterator[Codes]:
        yield ()
        for n in range(1, max_len + 1):
            for f in (1, 2):
                yield from self._alternating(n, f)

    def _alternating(self, n: int, start: int, prefix: Codes = ()) -> Iterator[Codes]:
        factors = [start if i % 2 == 0 else 3 - start for i in range(n)]
        choices = [[(f, e) for e in range(1, self.groups[f].order)] for f in factors]
        skip = len(prefix)
        if prefix:
            if tuple(f for f, _ in prefix) != tuple(factors[:skip]):
                return
            choices = choices[skip:]
        for rest in itertools.product(*choices):
            yield prefix + rest

    def enumerate_cyclic(self, k: int, start: Optional[int] = None, prefix: Codes = ()) -> Iterator[Codes]:
        """Fully cyclically reduced words of length ``k`` in lexicographic order."""
        if k == 0:
            if start in (None, 1) and not prefix:
                yield ()
            return
        if k == 1:
            for f in (1, 2) if start is None else (start,):
                for e in range(1, self.groups[f].order):
                    if not prefix or prefix == ((f, e),):
                        yield ((f, e),)
            return
        if k % 2:
            return
        for f in (1, 2) if start is None else (start,):
            yield from self._alternating(k, f, prefix)

    def forward_oracle(self, max_witness_len: int, max_class_len: Optional[int] = None) -> set[Codes]:
        """Class keys of ``[U, V]`` over all normal-form ``U, V`` up to the witness bound."""
        words = list(self.enumerate_normal_forms(max_witness_len))
        keys: set[Codes] = set()
        for u in words:
            for v in words:
                key = self.class_key(self.commutator_codes(u, v))
                if max_class_len is None or len(key) <= max_class_len:
                    keys.add(key)
        return keys

    def accepted_classes(self, max_len: int) -> set[Codes]:
        """Class keys of all commutator classes up to ``max_len``."""
        out: set[Codes] = set()
        for k in range(max_len + 1):
            for t in self.enumerate_cyclic(k):
                key = self.class_key(t)
                if key == t and self.is_commutator_codes(t):
                    out.add(key)
        return out

    # -- counting ----------------------------------------------------------

    def product_main_term(self, k: int) -> Optional[Fraction]:
        return product_main_term(self.g1.order, self.g2.order, k)

    def _class_shard(self, prefix: Codes, k: int) -> tuple[int, dict[int, int], int]:
        classes, words = 0, 0
        per_form: dict[int, int] = {}
        for t in self.enumerate_cyclic(k, 1, prefix):
            if min_rotation(t) != t:
                continue
            rotations = {t[i:] + t[:i] for i in range(k)}
            hit = False
            for rot in rotations:
                ids = {f.form_id for f in self.match_forms_codes(rot)}
                if ids:
                    hit = True
                    words += 1
                    for fid in ids:
                        per_form[fid] = per_form.get(fid, 0) + 1
            classes += hit
        return classes, per_form, words

    def count_commutator_classes(self, k: int, threads: int = 1) -> FPCountReport:
        main = self.product_main_term(k)
        if k == 0:
            return FPCountReport(0, 1, main, {5: 1}, 1)
        if k == 1:
            per_form: dict[int, int] = {}
            classes = set()
            for f in (1, 2):
                g = self.groups[f]
                for e in range(1, g.order):
                    if g.is_factor_commutator(e):
                        per_form[f] = per_form.get(f, 0) + 1
                        classes.add((f, g.class_minimum[e]))
            return FPCountReport(1, len(classes), main, per_form, sum(per_form.values()))
        if k % 2:
            return FPCountReport(k, 0, main, {}, 0)
        prefixes = [p for p in self._alternating(min(2, k), 1)]
        results = parallel.ordered_map(_fp_class_shard, [(self.g1, self.g2, p, k) for p in prefixes], threads)
        classes, words, per_form = 0, 0, {}
        for c, pf, w in results:
            classes += c
            words += w
            for fid, n in pf.items():
                per_form[fid] = per_form.get(fid, 0) + n
        return FPCountReport(k, classes, main, dict(sorted(per_form.items())), words)

    def count_trivial_product_words(self, k: int) -> TrivialProductCount:
        """Words of length ``k`` (odd positions in G1) whose per-factor letter products are 1."""
        if k <= 0 or k % 4:
            raise InvalidInputError("trivial-product counts need 4 | k > 0")
        enumerated = trivial_ab = 0
        for t in self.enumerate_cyclic(k, 1):
            p1 = p2 = 0
            m1, m2 = self.g1.mult, self.g2.mult
            for i in range(0, k, 2):
                p1 = m1[p1][t[i][1]]
                p2 = m2[p2][t[i + 1][1]]
            enumerated += p1 == 0 and p2 == 0
            trivial_ab += self.g1.in_derived_subgroup(p1) and self.g2.in_derived_subgroup(p2)
        n = k // 2
        closed = (self.g1.order - 1) ** (n - 1) * (self.g2.order - 1) ** (n - 1)
        paths = count_closed_paths_complete(self.g1.order, n, True) * count_closed_paths_complete(
            self.g2.order, n, True
        )
        return TrivialProductCount(k, enumerated, closed, paths, trivial_ab)

    # -- text --------------------------------------------------------------

    def parse(self, text: str) -> FPWord:
        """Dot-separated tokens ``f:i`` or element names, e.g. ``1:1.2:1`` or ``s.r.s.R``."""
        raw: list[Letter] = []
        for token in filter(None, (tok.strip() for tok in text.split("."))):
            if ":" in token:
                f, e = token.split(":", 1)
                raw.append((int(f), int(e)))
                continue
            hits = [
                (f, self.groups[f].names.index(token))
                for f in (1, 2)
                if self.groups[f].names and token in self.groups[f].names
            ]
            if len(hits) != 1:
                raise InvalidInputError(f"cannot resolve token {token!r}")
            raw.append(hits[0])
        return self.normalize(raw)

    def format(self, t: Sequence[Letter]) -> str:
        if not t:
            return "1"
        out = []
        for f, e in t:
            names = self.groups[f].names
            out.append(names[e] if names else f"{f}:{e}")
        return ".".join(out)


def _fp_class_shard(args: tuple) -> tuple[int, dict[int, int], int]:
    g1, g2, prefix, k = args
    return FreeProduct(g1, g2)._class_shard(prefix, k)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def product_main_term(n1: int, n2: int, k: int) -> Optional[Fraction]:
    """Main term of the class count in ``G1 * G2`` (orders ``n1``, ``n2``); ``None`` unless ``4 | k``."""
    if k % 4 or k < 0:
        return None
    lead = (n1 - 1) * (n2 - 2) ** 2 + (n1 - 2) ** 2 * (n2 - 1)
    x = k // 4
    return Fraction(lead * k * k, 192) * Fraction(n1 - 1) ** (x - 1) * Fraction(n2 - 1) ** (x - 1)


def count_closed_paths_complete(m: int, n: int, basepointed: bool = False) -> int:
    """Closed walks of length ``n`` on ``K_m`` from the adjacency spectrum ``{m-1, -1^(m-1)}``."""
    if m < 2 or n < 0:
        raise InvalidInputError("need m >= 2 and n >= 0")
    total = (m - 1) ** n + (m - 1) * (-1) ** n
    if not basepointed:
        return total
    if total % m:
        raise ConsistencyError("closed-walk total not divisible by m")
    return total // m


def closed_paths_shortcut(m: int, n: int, basepointed: bool = False) -> int:
    """The simplified count ``m (m-1)^(n-1)`` (``(m-1)^(n-1)`` basepointed).

    Agrees with :func:`count_closed_paths_complete` only for ``n == 2`` or ``m == 2``.
    """
    return (m - 1) ** (n - 1) * (1 if basepointed else m)


def adjacency_closed_paths(m: int, n: int, basepointed: bool = False) -> int:
    """Oracle: trace (or ``[0, 0]`` entry) of the ``n``-th power of ``K_m``'s adjacency matrix."""
    adj = [[int(i != j) for j in range(m)] for i in range(m)]
    power = [[int(i == j) for j in range(m)] for i in range(m)]
    for _ in range(n):
        power = [[sum(power[i][l] * adj[l][j] for l in range(m)) for j in range(m)] for i in range(m)]
    return power[0][0] if basepointed else sum(power[i][i] for i in range(m))


def hecke_group(q: int) -> tuple[FiniteGroupTable, FiniteGroupTable]:
    """``(Z/2, Z/q)`` tables for the Hecke group ``<S, R | S^2 = R^q = 1>``."""
    if q < 3:
        raise InvalidInputError("Hecke groups need q >= 3")
    names2 = ["1", "r"] + [f"r{i}" for i in range(2, q - 1)] + ["R"]
    return FiniteGroupTable.cyclic(2, ["1", "s"]), FiniteGroupTable.cyclic(q, names2)


def validate_group(t: FiniteGroupTable) -> None:
    t.validate()


def fp_normalize(raw: Iterable[Sequence[int]], g1: FiniteGroupTable, g2: FiniteGroupTable) -> FPWord:
    return FreeProduct(g1, g2).normalize(raw)


def fp_cyclic_reduce(w: FPWord, g1: FiniteGroupTable, g2: FiniteGroupTable) -> tuple[FPWord, FPWord]:
    return FreeProduct(g1, g2).cyclic_reduce(w)


def match_wicks_form_fp(c: FPWord, g1: FiniteGroupTable, g2: FiniteGroupTable, literal: bool = False) -> list[WicksFormFP]:
    return FreeProduct(g1, g2).match_wicks_form(c, literal)


def is_commutator_fp(w: FPWord | Sequence[Letter], g1: FiniteGroupTable, g2: FiniteGroupTable) -> FPDecision:
    return FreeProduct(g1, g2).is_commutator(w)


def count_commutator_classes_fp(g1: FiniteGroupTable, g2: FiniteGroupTable, k: int, threads: int = 1) -> FPCountReport:
    return FreeProduct(g1, g2).count_commutator_classes(k, threads)


def count_trivial_product_words(g1: FiniteGroupTable, g2: FiniteGroupTable, k: int) -> TrivialProductCount:
    return FreeProduct(g1, g2).count_trivial_product_words(k)
