"""Eventually periodic subsets of the naturals and a decidable ultrafilter on them.

An ``IndexSet`` is a purely periodic set (modulus and residues) corrected by
finitely many added and removed points. These sets form a Boolean algebra.
Every ultrafilter on that algebra that contains no finite set is given by a
profinite point: a compatible choice of residue modulo every k!.
"""

from __future__ import annotations

import math
from functools import cached_property, lru_cache
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping, NamedTuple, Optional, Sequence

from .errors import ModulusOverflow

DEFAULT_DEPTH = 12


class SetClass(Enum):
    FINITE = "finite"
    COFINITE = "cofinite"
    PROPER_PERIODIC = "proper_periodic"


class Decision(Enum):
    IN = "in"
    OUT = "out"
    UNDECIDED = "undecided"


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@lru_cache(maxsize=65536)
def _minimal_pattern(m: int, residues: frozenset[int]) -> tuple[int, frozenset[int]]:
    if not residues:
        return 1, frozenset()
    if len(residues) == m:
        return 1, frozenset({0})
    for d in _divisors(m):
        if d == m:
            break
        if all(((r % d) in residues) == (r in residues) for r in range(m)):
            return d, frozenset(r for r in residues if r < d)
    return m, residues


@dataclass(frozen=True, init=False)
class IndexSet:
    """``({n : n mod modulus in residues} | added) - removed`` in canonical form.

    The constructor canonicalizes: minimal modulus, and exception sets holding
    only points where the set really differs from its periodic part. Two
    IndexSets are therefore equal as values iff they are equal as sets.
    """

    modulus: int
    residues: frozenset[int]
    added: frozenset[int]
    removed: frozenset[int]

    def __init__(
        self,
        modulus: int = 1,
        residues: Iterable[int] = (),
        added: Iterable[int] = (),
        removed: Iterable[int] = (),
    ):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        res = frozenset(residues)
        if res and (min(res) < 0 or max(res) >= modulus):
            raise ValueError(f"residues must lie in [0, {modulus})")
        add, rem = frozenset(added), frozenset(removed)
        if (add and min(add) < 0) or (rem and min(rem) < 0):
            raise ValueError("exceptions must be natural numbers")
        if add & rem:
            raise ValueError("a point cannot be both added and removed")
        m, res = _minimal_pattern(modulus, res)
        if add:
            add = frozenset([n for n in add if n % m not in res])
        if rem:
            rem = frozenset([n for n in rem if n % m in res])
        # frozen dataclass: write fields directly, this constructor is hot
        self.__dict__.update(modulus=m, residues=res, added=add, removed=rem)

    # -- constructors ------------------------------------------------------------------

    @classmethod
    def empty(cls) -> "IndexSet":
        return cls()

    @classmethod
    def everything(cls) -> "IndexSet":
        return cls(1, {0})

    @classmethod
    def finite(cls, points: Iterable[int]) -> "IndexSet":
        return cls(1, (), added=points)

    @classmethod
    def cofinite(cls, excluded: Iterable[int] = ()) -> "IndexSet":
        return cls(1, {0}, removed=excluded)

    @classmethod
    def periodic(cls, modulus: int, residues: Iterable[int]) -> "IndexSet":
        return cls(modulus, residues)

    @classmethod
    def residue_class(cls, modulus: int, residue: int) -> "IndexSet":
        return cls(modulus, {residue % modulus})

    @classmethod
    def from_head(cls, modulus: int, residues: Iterable[int], head: Sequence[bool]) -> "IndexSet":
        """Periodic part ``residues mod modulus``, with membership on [0, len(head)) given by ``head``."""
        res = frozenset(residues)
        added = [n for n, b in enumerate(head) if b and n % modulus not in res]
        removed = [n for n, b in enumerate(head) if not b and n % modulus in res]
        return cls(modulus, res, added, removed)

    def with_head(self, head: Sequence[bool]) -> "IndexSet":
        """Same set beyond len(head); membership on [0, len(head)) replaced by ``head``."""
        h = len(head)
        added = [n for n in self.added if n >= h] + [n for n, b in enumerate(head) if b]
        removed = [n for n in self.removed if n >= h] + [n for n, b in enumerate(head) if not b]
        return IndexSet(self.modulus, self.residues, added, removed)

    # -- membership --------------------------------------------------------------------

    def periodic_member(self, n: int) -> bool:
        return n % self.modulus in self.residues

    def __contains__(self, n: int) -> bool:
        if n in self.added:
            return True
        if n in self.removed:
            return False
        return n % self.modulus in self.residues

    def member(self, n: int) -> bool:
        return n in self

    def bitmap(self, stop: int) -> list[bool]:
        return [n in self for n in range(stop)]

    def members(self, stop: int) -> list[int]:
        return [n for n in range(stop) if n in self]

    @property
    def exception_bound(self) -> int:
        """One past the largest exception; beyond it the set is purely periodic."""
        return max(self.added | self.removed, default=-1) + 1

    def classify(self) -> SetClass:
        if not self.residues:
            return SetClass.FINITE
        if len(self.residues) == self.modulus:
            return SetClass.COFINITE
        return SetClass.PROPER_PERIODIC

    def is_empty(self) -> bool:
        return not self.residues and not self.added

    # -- Boolean algebra ------------------------------------------------------------------

    def _combine(self, other: "IndexSet", op: Callable[[bool, bool], bool]) -> "IndexSet":
        m = math.lcm(self.modulus, other.modulus)
        res = [r for r in range(m) if op(self.periodic_member(r), other.periodic_member(r))]
        added, removed = [], []
        for n in self.added | self.removed | other.added | other.removed:
            actual = op(n in self, n in other)
            if actual != (n % m in res):
                (added if actual else removed).append(n)
        return IndexSet(m, res, added, removed)

    def union(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda a, b: a or b)

    def intersection(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda a, b: a and not b)

    def symmetric_difference(self, other: "IndexSet") -> "IndexSet":
        return self._combine(other, lambda a, b: a != b)

    def complement(self) -> "IndexSet":
        m = self.modulus
        return IndexSet(m, set(range(m)) - self.residues, self.removed, self.added)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference
    __invert__ = complement

    def issubset(self, other: "IndexSet") -> bool:
        return self.difference(other).is_empty()

    __le__ = issubset

    # -- serialization ---------------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "modulus": self.modulus,
            "residues": sorted(self.residues),
            "added": sorted(self.added),
            "removed": sorted(self.removed),
            "class": self.classify().value,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "IndexSet":
        return cls(
            data.get("modulus", 1),
            data.get("residues", ()),
            data.get("added", ()),
            data.get("removed", ()),
        )

    def __str__(self) -> str:
        parts = [f"{{n = {sorted(self.residues)} mod {self.modulus}}}"]
        if self.added:
            parts.append(f"+ {sorted(self.added)}")
        if self.removed:
            parts.append(f"- {sorted(self.removed)}")
        return " ".join(parts)


class BooleanOps(NamedTuple):
    union: IndexSet
    intersection: IndexSet
    complement: IndexSet


def boolean_ops(a: IndexSet, b: IndexSet) -> BooleanOps:
    return BooleanOps(a | b, a & b, ~a)


# -- ultrafilter -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Ultrafilter:
    """A profinite point r_{1!}, r_{2!}, ..., r_{K!} with r_{(k+1)!} = r_{k!} mod k!.

    A proper periodic set is In iff the point's residue modulo the set's
    modulus is one of the set's residues. Finite sets are always Out and
    cofinite sets always In, so the filter is nonprincipal.
    """

    factorial_residues: tuple[int, ...]

    def __post_init__(self):
        rs = tuple(self.factorial_residues)
        object.__setattr__(self, "factorial_residues", rs)
        if not rs:
            raise ValueError("residue chain must be non-empty")
        fact = 1
        for k, r in enumerate(rs, start=1):
            fact *= k
            if not isinstance(r, int) or not 0 <= r < fact:
                raise ValueError(f"residue {r!r} at depth {k} must lie in [0, {fact})")
            if k > 1 and r % (fact // k) != rs[k - 2]:
                raise ValueError(f"residue chain incompatible at depth {k}")

    @classmethod
    def zero(cls, depth: int = DEFAULT_DEPTH) -> "Ultrafilter":
        return cls((0,) * depth)

    @classmethod
    def from_integer(cls, a: int, depth: int = DEFAULT_DEPTH) -> "Ultrafilter":
        """The point whose residue mod every k! is ``a mod k!``."""
        return cls(tuple(a % math.factorial(k) for k in range(1, depth + 1)))

    @property
    def depth(self) -> int:
        return len(self.factorial_residues)

    @cached_property
    def top_modulus(self) -> int:
        return math.factorial(self.depth)

    def residue(self, m: int) -> int:
        if m < 1 or self.top_modulus % m:
            raise ModulusOverflow(f"modulus {m} does not divide {self.depth}!")
        return self.factorial_residues[-1] % m

    def decide(self, s: IndexSet) -> Decision:
        cls = s.classify()
        if cls is SetClass.FINITE:
            return Decision.OUT
        if cls is SetClass.COFINITE:
            return Decision.IN
        return Decision.IN if self.residue(s.modulus) in s.residues else Decision.OUT

    def contains(self, s: IndexSet) -> bool:
        return self.decide(s) is Decision.IN

    def to_json(self) -> dict:
        return {"factorial_residues": list(self.factorial_residues)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Ultrafilter":
        try:
            return cls(tuple(data["factorial_residues"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed ultrafilter point: {exc}") from exc


# -- empirical classification -------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalSet:
    """An IndexSet inferred from a finite window of evaluations."""

    index_set: IndexSet
    bitmap: tuple[bool, ...]
    empirical: bool = True


@dataclass(frozen=True)
class Undecided:
    bitmap: tuple[bool, ...]


def from_predicate(
    window: int,
    predicate: Callable[[int], bool],
    hint: Optional[int] = None,
    quorum: int = 2,
) -> EmpiricalSet | Undecided:
    """Classify a predicate on [0, window) as an eventually periodic set, if it looks like one.

    The second half of the window must match a periodic pattern exactly (so
    it holds at least ``quorum`` full periods); deviations are tolerated only
    in the first half, at most window/8 of them. The smallest fitting
    modulus up to ``hint`` (default 12) wins.
    """
    bits = tuple(bool(predicate(n)) for n in range(window))
    return classify_bitmap(bits, hint, quorum)


def classify_bitmap(bits: Sequence[bool], hint: Optional[int] = None, quorum: int = 2) -> EmpiricalSet | Undecided:
    bits = tuple(bits)
    window = len(bits)
    m_max = min(hint or DEFAULT_DEPTH, window // (2 * quorum))
    if m_max < 1:
        raise ValueError(f"window {window} too short for quorum {quorum}")
    half = window // 2
    budget = window // 8
    for m in range(1, m_max + 1):
        pattern: dict[int, bool] = {}
        if any(pattern.setdefault(n % m, bits[n]) != bits[n] for n in range(half, window)):
            continue
        res = {r for r, v in pattern.items() if v}
        misses = sum(1 for n in range(half) if bits[n] != (n % m in res))
        if misses <= budget:
            return EmpiricalSet(IndexSet.from_head(m, res, bits), bits)
    return Undecided(bits)
