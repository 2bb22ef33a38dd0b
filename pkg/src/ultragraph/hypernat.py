"""Hypernatural numbers as natural-number sequences modulo the ultrafilter.

Sequences are held in closed forms (affine, periodic, quadratic, a finite
table followed by a tail, and residue-wise quadratics). Internally every
form normalizes to a ``QuasiPoly``: one rational polynomial in ``n`` per
residue class modulo some period, optionally overridden on a finite prefix.
Any comparison of two such sequences has an eventually periodic truth set,
which is what keeps order and equality decidable by the filter.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .errors import FormOverflow
from .index_filter import Decision, IndexSet, Ultrafilter

Poly = tuple[Fraction, ...]  # coefficients, constant term first, no trailing zeros

MAX_DEGREE = 2


# -- polynomial helpers --------------------------------------------------------------


def _trim(coeffs: Iterable) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def _pneg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def _pmul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _peval(p: Poly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _pcompose(outer: Poly, inner: Poly) -> Poly:
    acc: Poly = ()
    for c in reversed(outer):
        acc = _padd(_pmul(acc, inner), (c,) if c else ())
    return acc


def _degree(p: Poly) -> int:
    return len(p) - 1


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _lead_sign(p: Poly) -> int:
    return _sign(p[-1]) if p else 0


def _eventual_start(p: Poly) -> int:
    """Some n0 >= 0 with sign(p(n)) equal to the sign of the leading coefficient for all n >= n0."""
    d = _degree(p)
    if d <= 0:
        return 0
    s = _lead_sign(p)
    if d == 1:
        root = -p[0] / p[1]
        return max(0, math.floor(root) + 1)
    if d == 2:
        c0, c1, c2 = p
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return 0
        sq = math.sqrt(float(disc))
        hi = max((-float(c1) + sq) / (2 * float(c2)), (-float(c1) - sq) / (2 * float(c2)))
        t = max(0, math.floor(hi))
        vertex = -c1 / (2 * c2)
        while not (t >= vertex and _sign(_peval(p, t)) == s):
            t += 1
        return t
    bound = 1 + max(abs(c / p[-1]) for c in p[:-1])
    return math.floor(bound) + 1


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise ValueError(f"sequence value {x} is not an integer")
    return int(x)


# -- quasi-polynomials -----------------------------------------------------------------


_RELATIONS: dict[str, Callable[[int], bool]] = {
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    "=": lambda s: s == 0,
    "!=": lambda s: s != 0,
    ">": lambda s: s > 0,
    ">=": lambda s: s >= 0,
}


@dataclass(frozen=True)
class QuasiPoly:
    """n -> prefix[n] for n < len(prefix), else polys[n % modulus](n)."""

    modulus: int
    polys: tuple[Poly, ...]
    prefix: tuple[int, ...] = ()

    def __post_init__(self):
        polys = tuple(_trim(p) for p in self.polys)
        if len(polys) != self.modulus or self.modulus < 1:
            raise ValueError("need exactly one polynomial per residue class")
        m = self.modulus
        for d in range(1, m):
            if m % d == 0 and all(polys[r] == polys[r % d] for r in range(m)):
                m, polys = d, polys[:d]
                break
        prefix = [int(v) for v in self.prefix]
        while prefix and Fraction(prefix[-1]) == _peval(polys[(len(prefix) - 1) % m], len(prefix) - 1):
            prefix.pop()
        object.__setattr__(self, "modulus", m)
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "prefix", tuple(prefix))

    @classmethod
    def constant(cls, c: int) -> "QuasiPoly":
        return cls(1, ((c,),))

    @classmethod
    def poly(cls, coeffs: Iterable) -> "QuasiPoly":
        return cls(1, (_trim(coeffs),))

    def tail(self, n: int) -> Fraction:
        return _peval(self.polys[n % self.modulus], n)

    def __call__(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return _as_int(self.tail(n))

    def values(self, stop: int) -> list[int]:
        return [self(n) for n in range(stop)]

    @property
    def degree(self) -> int:
        return max(_degree(p) for p in self.polys)

    def is_eventually_periodic(self) -> bool:
        return self.degree <= 0

    def _align(self, other: "QuasiPoly") -> tuple[int, list[Poly], list[Poly]]:
        m = math.lcm(self.modulus, other.modulus)
        return (
            m,
            [self.polys[r % self.modulus] for r in range(m)],
            [other.polys[r % other.modulus] for r in range(m)],
        )

    def _pointwise(self, other: "QuasiPoly", poly_op, int_op) -> "QuasiPoly":
        m, a, b = self._align(other)
        h = max(len(self.prefix), len(other.prefix))
        head = [int_op(self(n), other(n)) for n in range(h)]
        return QuasiPoly(m, tuple(poly_op(p, q) for p, q in zip(a, b)), tuple(head))

    def __add__(self, other: "QuasiPoly | int") -> "QuasiPoly":
        other = _coerce(other)
        return self._pointwise(other, _padd, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other: "QuasiPoly | int") -> "QuasiPoly":
        other = _coerce(other)
        return self._pointwise(other, lambda p, q: _padd(p, _pneg(q)), lambda x, y: x - y)

    def __rsub__(self, other: int) -> "QuasiPoly":
        return _coerce(other) - self

    def __mul__(self, other: "QuasiPoly | int") -> "QuasiPoly":
        other = _coerce(other)
        return self._pointwise(other, _pmul, lambda x, y: x * y)

    __rmul__ = __mul__

    def __neg__(self) -> "QuasiPoly":
        return QuasiPoly(self.modulus, tuple(_pneg(p) for p in self.polys), tuple(-v for v in self.prefix))

    def _select(self, other: "QuasiPoly", want_max: bool) -> "QuasiPoly":
        m, a, b = self._align(other)
        chosen = []
        start = max(len(self.prefix), len(other.prefix))
        for p, q in zip(a, b):
            diff = _padd(p, _pneg(q))
            first = _lead_sign(diff) >= 0
            chosen.append(p if first == want_max else q)
            start = max(start, _eventual_start(diff))
        pick = max if want_max else min
        head = tuple(pick(self(n), other(n)) for n in range(start))
        return QuasiPoly(m, tuple(chosen), head)

    def maximum(self, other: "QuasiPoly | int") -> "QuasiPoly":
        return self._select(_coerce(other), True)

    def minimum(self, other: "QuasiPoly | int") -> "QuasiPoly":
        return self._select(_coerce(other), False)

    def __abs__(self) -> "QuasiPoly":
        return self.maximum(-self)

    def sign_set(self, relation: str, exact: bool = True) -> IndexSet:
        """{n : value(n) <relation> 0}.

        With ``exact=False`` only the periodic part is computed; filter
        decisions never look at the finite exceptions, so this is enough to
        decide and avoids scanning a possibly long head.
        """
        test = _RELATIONS[relation]
        residues = [r for r, p in enumerate(self.polys) if test(_lead_sign(p))]
        if not exact:
            return IndexSet(self.modulus, residues)
        stop = max([len(self.prefix)] + [_eventual_start(p) for p in self.polys])
        head = [test(_sign(self(n))) for n in range(stop)]
        return IndexSet.from_head(self.modulus, residues, head)

    def compare_set(self, relation: str, other: "QuasiPoly | int", exact: bool = True) -> IndexSet:
        return (self - _coerce(other)).sign_set(relation, exact)

    def compose(self, fn: "EventualFunction") -> "QuasiPoly":
        """n -> fn(self(n)) for a function of the natural argument that is eventually quasi-polynomial."""
        denominators = [c.denominator for p in self.polys for c in p] or [1]
        big_d = math.lcm(*denominators)
        m = math.lcm(self.modulus, fn.period * big_d)
        out: list[Poly] = []
        start = len(self.prefix)
        for r in range(m):
            p = self.polys[r % self.modulus]
            if _degree(p) <= 0:
                out.append(_trim((fn.direct(_as_int(_peval(p, 0))),)))
                continue
            if _lead_sign(p) < 0:
                raise ValueError("argument sequence eventually negative")
            t = _as_int(_peval(p, r)) % fn.period
            out.append(_pcompose(fn.polys[t], p))
            start = max(start, _eventual_start(_padd(p, (Fraction(1, 2) - fn.threshold,))))
        head = tuple(fn.direct(self(n)) for n in range(start))
        return QuasiPoly(m, tuple(out), head)

    def preimage(self, s: IndexSet) -> IndexSet:
        """{n : value(n) in s}."""
        ind = EventualFunction.indicator(s)
        return self.compose(ind).sign_set(">")

    def to_json(self) -> dict:
        return to_seqnat(self).to_json()


def _coerce(x: "QuasiPoly | int | SeqNat") -> QuasiPoly:
    if isinstance(x, QuasiPoly):
        return x
    if isinstance(x, SeqNat):
        return x.quasi()
    return QuasiPoly.constant(x)


@dataclass(frozen=True)
class EventualFunction:
    """A function on naturals equal to ``polys[m % period](m)`` for m >= threshold.

    ``direct`` computes the exact value for any m; the polynomial description
    only has to be right from the threshold on.
    """

    threshold: int
    period: int
    polys: tuple[Poly, ...]
    direct: Callable[[int], int] = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(_trim(p) for p in self.polys))
        if len(self.polys) != self.period:
            raise ValueError("need one polynomial per residue of the period")

    @classmethod
    def indicator(cls, s: IndexSet) -> "EventualFunction":
        polys = tuple(((1,) if r in s.residues else ()) for r in range(s.modulus))
        return cls(s.exception_bound, s.modulus, polys, lambda m: int(m in s))

    def formula(self, m: int) -> Fraction:
        return _peval(self.polys[m % self.period], m)


# -- sequence forms ---------------------------------------------------------------------


class SeqNat:
    """Base of the closed sequence forms. Every form evaluates to naturals."""

    def quasi(self) -> QuasiPoly:
        raise NotImplementedError

    def __call__(self, n: int) -> int:
        return self.quasi()(n)

    def values(self, stop: int) -> list[int]:
        return self.quasi().values(stop)

    def to_json(self) -> dict:
        raise NotImplementedError

    def _validate(self) -> None:
        q = self.quasi()
        for r, p in enumerate(q.polys):
            if _degree(p) > MAX_DEGREE:
                raise FormOverflow(f"degree {_degree(p)} exceeds {MAX_DEGREE}")
            # integer-valued on its residue class iff integral at deg+1 consecutive class points
            start = len(q.prefix) + ((r - len(q.prefix)) % q.modulus)
            for k in range(max(_degree(p), 0) + 1):
                _as_int(_peval(p, start + k * q.modulus))
        negative = q.sign_set("<") - IndexSet.finite(range(_TAIL_START.get()))
        if not negative.is_empty():
            raise ValueError(f"{self!r} takes negative values")


# Tails of TableWithTail only need to be natural-valued past the prefix.
_TAIL_START: ContextVar[int] = ContextVar("tail_start", default=0)


@contextmanager
def _tail_from(start: int):
    token = _TAIL_START.set(start)
    try:
        yield
    finally:
        _TAIL_START.reset(token)


def _frac(x) -> Fraction:
    return Fraction(x) if not isinstance(x, str) else Fraction(x.strip())


def _frac_json(x: Fraction):
    return int(x) if x.denominator == 1 else str(x)


@dataclass(frozen=True)
class Affine(SeqNat):
    """n -> a*n + b."""

    a: int
    b: int

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("affine coefficients must be integers")
        self._validate()

    def quasi(self) -> QuasiPoly:
        return QuasiPoly.poly((self.b, self.a))

    def __call__(self, n: int) -> int:
        return self.a * n + self.b

    def to_json(self) -> dict:
        return {"form": "affine", "a": self.a, "b": self.b}


def constant(c: int) -> Affine:
    return Affine(0, c)


@dataclass(frozen=True)
class Periodic(SeqNat):
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if not self.table:
            raise ValueError("periodic table must be non-empty")
        self._validate()

    def quasi(self) -> QuasiPoly:
        return QuasiPoly(len(self.table), tuple((v,) for v in self.table))

    def __call__(self, n: int) -> int:
        return self.table[n % len(self.table)]

    def to_json(self) -> dict:
        return {"form": "periodic", "table": list(self.table)}


@dataclass(frozen=True)
class Poly2(SeqNat):
    """n -> a*n^2 + b*n + c with rational coefficients, integer-valued on the naturals."""

    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _frac(getattr(self, name)))
        self._validate()

    def quasi(self) -> QuasiPoly:
        return QuasiPoly.poly((self.c, self.b, self.a))

    def to_json(self) -> dict:
        return {"form": "poly2", "a": _frac_json(self.a), "b": _frac_json(self.b), "c": _frac_json(self.c)}


@dataclass(frozen=True)
class TableWithTail(SeqNat):
    """prefix[n] for n < len(prefix), tail(n) afterwards (tail indexed by the absolute n)."""

    prefix: tuple[int, ...]
    tail: SeqNat

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(v) for v in self.prefix))
        self._validate()

    def quasi(self) -> QuasiPoly:
        t = self.tail.quasi()
        head = self.prefix + t.prefix[len(self.prefix):]
        return QuasiPoly(t.modulus, t.polys, head)

    def to_json(self) -> dict:
        return {"form": "table_with_tail", "prefix": list(self.prefix), "tail": self.tail.to_json()}


@dataclass(frozen=True)
class Quasi(SeqNat):
    """Residue-wise polynomials: n -> polys[n % modulus](n)."""

    modulus: int
    polys: tuple[Poly, ...]

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(_trim(p) for p in self.polys))
        self._validate()

    def quasi(self) -> QuasiPoly:
        return QuasiPoly(self.modulus, self.polys)

    def to_json(self) -> dict:
        return {
            "form": "quasi",
            "modulus": self.modulus,
            "polys": [[_frac_json(c) for c in p] for p in self.polys],
        }


def to_seqnat(q: QuasiPoly) -> SeqNat:
    """Simplest closed form for a quasi-polynomial; raises FormOverflow past degree 2."""
    if q.degree > MAX_DEGREE:
        raise FormOverflow(f"degree {q.degree} exceeds {MAX_DEGREE}")
    if not q.prefix:
        return _tail_form(q)
    with _tail_from(len(q.prefix)):
        tail = _tail_form(q)
    return TableWithTail(q.prefix, tail)


def _tail_form(q: QuasiPoly) -> SeqNat:
    if q.modulus == 1:
        p = q.polys[0] + (Fraction(0),) * (3 - len(q.polys[0]))
        if q.degree <= 1 and p[0].denominator == 1 and p[1].denominator == 1:
            return Affine(int(p[1]), int(p[0]))
        return Poly2(p[2], p[1], p[0])
    if q.degree <= 0:
        return Periodic(tuple(_as_int(p[0]) if p else 0 for p in q.polys))
    return Quasi(q.modulus, q.polys)


def seqnat_from_json(data: Mapping) -> SeqNat:
    try:
        form = data["form"]
        if form == "affine":
            return Affine(int(data["a"]), int(data["b"]))
        if form == "constant":
            return constant(int(data["value"]))
        if form == "periodic":
            return Periodic(tuple(data["table"]))
        if form == "poly2":
            return Poly2(data["a"], data["b"], data["c"])
        if form == "table_with_tail":
            prefix = tuple(data["prefix"])
            with _tail_from(len(prefix)):
                tail = seqnat_from_json(data["tail"])
            return TableWithTail(prefix, tail)
        if form == "quasi":
            return Quasi(int(data["modulus"]), tuple(tuple(_frac(c) for c in p) for p in data["polys"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed sequence form: {exc}") from exc
    raise ValueError(f"unknown sequence form {data.get('form')!r}")


# -- empirical fitting ---------------------------------------------------------------


def _interpolate(points: Sequence[tuple[int, int]]) -> Poly:
    poly: Poly = ()
    for i, (xi, yi) in enumerate(points):
        term: Poly = (Fraction(yi),)
        for j, (xj, _) in enumerate(points):
            if j != i:
                term = _pmul(term, (Fraction(-xj, xi - xj), Fraction(1, xi - xj)))
        poly = _padd(poly, term)
    return poly


def fit_window(values: Sequence[int], max_modulus: int = 12, max_degree: int = MAX_DEGREE) -> Optional[QuasiPoly]:
    """Find a quasi-polynomial matching the second half of ``values`` exactly.

    Each residue class needs at least one point beyond those determining its
    polynomial. Up to len(values)/8 deviations in the first half become the
    prefix. Returns None when nothing fits.
    """
    w = len(values)
    half = w // 2
    budget = w // 8
    for m in range(1, max_modulus + 1):
        polys = []
        for r in range(m):
            pts = [(n, values[n]) for n in range(half, w) if n % m == r]
            fitted = None
            for d in range(max_degree + 1):
                if len(pts) < d + 2:
                    break
                cand = _interpolate(pts[: d + 1])
                if all(_peval(cand, x) == y for x, y in pts[d + 1 :]):
                    fitted = cand
                    break
            if fitted is None:
                break
            polys.append(fitted)
        else:
            misses = [n for n in range(half) if _peval(polys[n % m], n) != values[n]]
            if len(misses) <= budget:
                head = tuple(values[: misses[-1] + 1]) if misses else ()
                try:
                    return QuasiPoly(m, tuple(polys), head)
                except ValueError:
                    continue
    return None


# -- hypernaturals -----------------------------------------------------------------


class Ordering(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


@dataclass(frozen=True, eq=False)
class HyperNat:
    """The class of a natural-number sequence under the ambient ultrafilter."""

    rep: SeqNat
    filter: Ultrafilter = field(default_factory=Ultrafilter.zero)

    @classmethod
    def of(cls, value: "SeqNat | QuasiPoly | int", filter: Optional[Ultrafilter] = None) -> "HyperNat":
        if isinstance(value, int):
            value = constant(value)
        elif isinstance(value, QuasiPoly):
            value = to_seqnat(value)
        return cls(value, filter or Ultrafilter.zero())

    def quasi(self) -> QuasiPoly:
        return self.rep.quasi()

    def _other(self, other: "HyperNat | int") -> QuasiPoly:
        if isinstance(other, HyperNat):
            if other.filter != self.filter:
                raise ValueError("hypernaturals live under different ultrafilters")
            return other.quasi()
        return QuasiPoly.constant(other)

    def compare(self, other: "HyperNat | int") -> Ordering:
        diff = self.quasi() - self._other(other)
        decided = [
            (o, self.filter.decide(diff.sign_set(rel, exact=False)))
            for o, rel in ((Ordering.LESS, "<"), (Ordering.EQUAL, "="), (Ordering.GREATER, ">"))
        ]
        winners = [o for o, d in decided if d is Decision.IN]
        assert len(winners) == 1, "ultrafilter trichotomy violated"
        return winners[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (HyperNat, int)):
            return NotImplemented
        return self.compare(other) is Ordering.EQUAL

    __hash__ = None  # type: ignore[assignment]

    def __lt__(self, other: "HyperNat | int") -> bool:
        return self.compare(other) is Ordering.LESS

    def __le__(self, other: "HyperNat | int") -> bool:
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other: "HyperNat | int") -> bool:
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other: "HyperNat | int") -> bool:
        return self.compare(other) is not Ordering.LESS

    def _wrap(self, q: QuasiPoly) -> "HyperNat":
        return HyperNat(to_seqnat(q), self.filter)

    def __add__(self, other: "HyperNat | int") -> "HyperNat":
        return self._wrap(self.quasi() + self._other(other))

    __radd__ = __add__

    def __mul__(self, other: "HyperNat | int") -> "HyperNat":
        return self._wrap(self.quasi() * self._other(other))

    __rmul__ = __mul__

    def monus(self, other: "HyperNat | int") -> "HyperNat":
        """Truncated subtraction max(a - b, 0), componentwise."""
        return self._wrap((self.quasi() - self._other(other)).maximum(0))

    def standard_value(self) -> Optional[int]:
        """c if the class equals the constant c, else None."""
        q = self.quasi()
        candidates = sorted({_as_int(p[0]) if p else 0 for p in q.polys if _degree(p) <= 0})
        for c in candidates:
            if self.filter.contains(q.compare_set("=", c, exact=False)):
                return c
        return None

    def is_standard(self) -> bool:
        return self.standard_value() is not None

    def is_unlimited(self) -> bool:
        q = self.quasi()
        unbounded = [r for r, p in enumerate(q.polys) if _degree(p) >= 1 and _lead_sign(p) > 0]
        return self.filter.contains(IndexSet(q.modulus, unbounded))

    def to_json(self) -> dict:
        out = {"form": self.rep.to_json(), "unlimited": self.is_unlimited()}
        std = self.standard_value()
        if std is not None:
            out["standard"] = std
        return out

    def __repr__(self) -> str:
        return f"HyperNat({self.rep!r})"


def compare(a: HyperNat, b: HyperNat) -> Ordering:
    return a.compare(b)


def arith(a: HyperNat, b: HyperNat, op: str) -> HyperNat:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "monus":
        return a.monus(b)
    raise ValueError(f"unknown operation {op!r}")
