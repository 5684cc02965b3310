"""Finite groups given by multiplication tables (identity at index 0)."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional, Sequence, Union

from .errors import InvalidInputError


class GroupTableError(InvalidInputError):
    pass


@dataclass(frozen=True)
class FiniteGroupTable:
    mult: tuple[tuple[int, ...], ...]
    names: Optional[tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mult", tuple(tuple(int(x) for x in row) for row in self.mult))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def order(self) -> int:
        return len(self.mult)

    def __len__(self) -> int:
        return len(self.mult)

    def mul(self, x: int, y: int) -> int:
        return self.mult[x][y]

    def validate(self) -> None:
        """Check closure, identity at 0, associativity and inverses; raise on failure."""
        n = self.order
        if n == 0:
            raise GroupTableError("empty table")
        for i, row in enumerate(self.mult):
            if len(row) != n:
                raise GroupTableError(f"row {i} has length {len(row)}, expected {n}")
            for x in row:
                if not 0 <= x < n:
                    raise GroupTableError(f"entry {x} in row {i} outside 0..{n - 1}")
        if self.names is not None and len(self.names) != n:
            raise GroupTableError(f"{len(self.names)} names for {n} elements")
        for x in range(n):
            if self.mult[0][x] != x or self.mult[x][0] != x:
                raise GroupTableError(f"index 0 is not a two-sided identity (fails at {x})")
        m = self.mult
        for x in range(n):
            mx = m[x]
            for y in range(n):
                mxy = m[mx[y]]
                my = m[y]
                for z in range(n):
                    if mxy[z] != mx[my[z]]:
                        raise GroupTableError(f"not associative at ({x}, {y}, {z})")
        for x in range(n):
            right = [y for y in range(n) if m[x][y] == 0]
            if len(right) != 1 or m[right[0]][x] != 0:
                raise GroupTableError(f"element {x} has no unique two-sided inverse")

    @cached_property
    def inverses(self) -> tuple[int, ...]:
        return tuple(next(y for y in range(self.order) if self.mult[x][y] == 0) for x in range(self.order))

    def inverse(self, x: int) -> int:
        return self.inverses[x]

    def conjugate(self, g: int, x: int) -> int:
        """``g x g^-1``."""
        return self.mult[self.mult[g][x]][self.inverses[g]]

    def conjugator(self, x: int, y: int) -> Optional[int]:
        """Some ``g`` with ``y == g x g^-1``, or ``None``."""
        for g in range(self.order):
            if self.conjugate(g, x) == y:
                return g
        return None

    def are_conjugate(self, x: int, y: int) -> bool:
        return self.conjugator(x, y) is not None

    @cached_property
    def class_minimum(self) -> tuple[int, ...]:
        """Smallest index in each element's conjugacy class."""
        return tuple(min(self.conjugate(g, x) for g in range(self.order)) for x in range(self.order))

    def commutator(self, x: int, y: int) -> int:
        m, inv = self.mult, self.inverses
        return m[m[m[x][y]][inv[x]]][inv[y]]

    @cached_property
    def commutator_pairs(self) -> dict[int, tuple[int, int]]:
        pairs: dict[int, tuple[int, int]] = {}
        for x in range(self.order):
            for y in range(self.order):
                pairs.setdefault(self.commutator(x, y), (x, y))
        return pairs

    def is_factor_commutator(self, x: int) -> bool:
        return x in self.commutator_pairs

    @cached_property
    def derived_subgroup(self) -> frozenset[int]:
        sub = set(self.commutator_pairs)
        frontier = list(sub)
        while frontier:
            x = frontier.pop()
            for y in list(sub):
                z = self.mult[x][y]
                if z not in sub:
                    sub.add(z)
                    frontier.append(z)
        return frozenset(sub)

    def in_derived_subgroup(self, x: int) -> bool:
        return x in self.derived_subgroup

    @property
    def is_abelian(self) -> bool:
        return self.derived_subgroup == frozenset({0})

    def name(self, x: int) -> str:
        return self.names[x] if self.names else str(x)

    # -- construction -----------------------------------------------------

    @classmethod
    def cyclic(cls, n: int, names: Optional[Sequence[str]] = None) -> "FiniteGroupTable":
        if n < 1:
            raise InvalidInputError("cyclic group order must be positive")
        return cls(tuple(tuple((i + j) % n for j in range(n)) for i in range(n)), names)

    @classmethod
    def from_permutations(
        cls, perms: Sequence[Sequence[int]], names: Optional[Sequence[str]] = None
    ) -> "FiniteGroupTable":
        """Table of a list of permutations closed under composition; ``perms[0]`` is the identity.

        Product ``x * y`` applies ``y`` first, then ``x``.
        """
        perms = [tuple(p) for p in perms]
        index = {p: i for i, p in enumerate(perms)}
        try:
            table = tuple(
                tuple(index[tuple(p[q[i]] for i in range(len(q)))] for q in perms) for p in perms
            )
        except KeyError as exc:
            raise GroupTableError("permutation list is not closed under composition") from exc
        return cls(table, names)

    @classmethod
    def symmetric(cls, n: int) -> "FiniteGroupTable":
        perms = sorted(itertools.permutations(range(n)))
        return cls.from_permutations(perms, [_cycle_name(p) for p in perms])

    @classmethod
    def from_json(cls, data: Union[dict, str, Path]) -> "FiniteGroupTable":
        if not isinstance(data, dict):
            data = json.loads(Path(data).read_text())
        table = data["table"]
        if "order" in data and data["order"] != len(table):
            raise GroupTableError(f"order {data['order']} disagrees with table size {len(table)}")
        group = cls(tuple(tuple(row) for row in table), data.get("names"))
        group.validate()
        return group

    def to_json(self) -> dict:
        out: dict = {"order": self.order, "table": [list(row) for row in self.mult]}
        if self.names:
            out["names"] = list(self.names)
        return out


def _cycle_name(p: Sequence[int]) -> str:
    seen, cycles = set(), []
    for start in range(len(p)):
        if start in seen or p[start] == start:
            continue
        cyc, i = [], start
        while i not in seen:
            seen.add(i)
            cyc.append(str(i + 1))
            i = p[i]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "1"


def named_group(name: str) -> FiniteGroupTable:
    """``Z<n>`` / ``C<n>`` for cyclic, ``S3``/``S4`` for symmetric, or a path to group JSON."""
    s = name.strip()
    if s[:1] in "ZC" and s[1:].isdigit():
        return FiniteGroupTable.cyclic(int(s[1:]))
    if s[:1] == "S" and s[1:].isdigit() and int(s[1:]) <= 5:
        return FiniteGroupTable.symmetric(int(s[1:]))
    path = Path(s)
    if path.exists():
        return FiniteGroupTable.from_json(path)
    raise InvalidInputError(f"unknown group {name!r}")
