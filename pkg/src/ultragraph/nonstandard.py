"""Nonstandard vertices, edges and graph-level decisions over a family <G_n>.

Every question reduces to one truth set {n : ... holds in G_n} and one
ultrafilter decision. Truth sets come from the family's exact sequences
when it has them; otherwise the predicate is evaluated on the window and
classified empirically, and the result is flagged as such.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import graph as G
from .errors import FormOverflow, PreconditionFailed, UltragraphError
from .families import (
    BOOLEAN_QUANTITIES,
    GraphFamily,
    InducedFamily,
    NotHyperfinite,
    NotSymbolic,
    Rule,
    quantity,
)
from .hypernat import HyperNat, Ordering, QuasiPoly, SeqNat, constant, fit_window, to_seqnat
from .index_filter import Decision, EmpiricalSet, IndexSet, Ultrafilter, classify_bitmap


class NonstandardError(UltragraphError):
    pass


class FamilyMismatch(NonstandardError, ValueError):
    pass


class IdenticalVertices(NonstandardError, ValueError):
    pass


class InvalidVertex(NonstandardError, ValueError):
    pass


class Undecidable(NonstandardError):
    """The truth set left the decidable algebra (empirical classification failed)."""

    def __init__(self, message: str, bitmap: tuple[bool, ...] = ()):
        super().__init__(message)
        self.bitmap = bitmap


class NotConnected(NonstandardError, PreconditionFailed):
    pass


class NotInCf(NonstandardError, PreconditionFailed):
    pass


class DegreeBoundViolated(NonstandardError, PreconditionFailed):
    pass


class LengthFormOverflow(NonstandardError, FormOverflow):
    def __init__(self, message: str, table: list[int]):
        super().__init__(message)
        self.table = table


@dataclass(frozen=True)
class Truth:
    """A truth set over the indices, or the raw window bitmap when it could not be classified."""

    index_set: Optional[IndexSet]
    exact: bool
    bitmap: Optional[tuple[bool, ...]] = None

    def decide(self, uf: Ultrafilter) -> Decision:
        if self.index_set is None:
            return Decision.UNDECIDED
        return uf.decide(self.index_set)

    def to_json(self) -> dict:
        if self.index_set is None:
            return {"undecided": True, "bitmap": [int(b) for b in self.bitmap or ()]}
        out = self.index_set.to_json()
        out["exact"] = self.exact
        return out


@dataclass(frozen=True)
class NSVertex:
    graph: "NonstandardGraph"
    index_map: SeqNat

    def at(self, n: int) -> int:
        return self.index_map(n)


@dataclass(frozen=True)
class NSEdge:
    endpoints: tuple[NSVertex, NSVertex]
    certificate: IndexSet


@dataclass(frozen=True)
class NSPath:
    graph: "NonstandardGraph"
    start: NSVertex
    end: NSVertex
    length: HyperNat
    exact: bool

    def at(self, n: int) -> Optional[G.Path]:
        return self.graph.family.path_at(n, self.start.at(n), self.end.at(n))

    @property
    def unlimited(self) -> bool:
        return self.length.is_unlimited()


@dataclass(frozen=True)
class Counts:
    p: HyperNat
    q: HyperNat
    r: HyperNat
    identity_holds: bool
    exact: bool


@dataclass(frozen=True)
class NSMetrics:
    radius: HyperNat
    diameter: HyperNat
    bound_ok: bool
    exact: bool


@dataclass(frozen=True)
class Criteria:
    dirac: bool
    ore: bool
    posa: bool


@dataclass(frozen=True)
class ColoringSummary:
    k: int
    max_colors: int
    valid: bool
    per_index: tuple[tuple[int, int], ...]  # (n, colors used)


@dataclass(frozen=True)
class NonstandardGraph:
    """*G = [G_n] under a fixed ultrafilter; questions are answered by filter decisions."""

    family: GraphFamily
    filter: Ultrafilter = field(default_factory=Ultrafilter.zero)

    @property
    def window(self) -> int:
        return self.family.window

    # -- truth sets ------------------------------------------------------------------------

    def _classify(self, pred: Callable[[int], bool]) -> Truth:
        bits = tuple(bool(pred(n)) for n in range(self.window))
        result = classify_bitmap(bits)
        if isinstance(result, EmpiricalSet):
            return Truth(result.index_set, exact=False, bitmap=bits)
        return Truth(None, exact=False, bitmap=bits)

    def truth(self, exact: Callable[[], IndexSet], per_index: Callable[[int], bool]) -> Truth:
        try:
            return Truth(exact(), exact=True)
        except NotSymbolic:
            return self._classify(per_index)

    def quantity_truth(self, name: str) -> Truth:
        """{n : the 0/1 invariant ``name`` is 1 on G_n}."""
        assert name in BOOLEAN_QUANTITIES
        fam = self.family
        return self.truth(
            lambda: fam.sequence(name).sign_set(">"),
            lambda n: bool(quantity(name, fam.graph_at(n))),
        )

    def decide(self, t: Truth, what: str) -> bool:
        d = t.decide(self.filter)
        if d is Decision.UNDECIDED:
            raise Undecidable(f"{what}: truth set is not eventually periodic on the window", t.bitmap or ())
        return d is Decision.IN

    def sequence(self, name: str) -> tuple[QuasiPoly, bool]:
        """Per-index invariant as a quasi-polynomial, with an exactness flag."""
        try:
            return self.family.sequence(name), True
        except NotSymbolic:
            return self._fit([quantity(name, self.family.graph_at(n)) for n in range(self.window)], name), False

    def _fit(self, table: list[int], what: str) -> QuasiPoly:
        q = fit_window(table)
        if q is None:
            raise LengthFormOverflow(f"{what} fits no supported sequence form on the window", table)
        return q

    def hypernat(self, q: QuasiPoly, what: str = "value") -> HyperNat:
        try:
            return HyperNat(to_seqnat(q), self.filter)
        except FormOverflow as exc:
            raise LengthFormOverflow(f"{what}: {exc}", q.values(self.window)) from exc

    # -- vertices and edges -----------------------------------------------------------------

    def vertex(self, index_map: SeqNat | int) -> NSVertex:
        if isinstance(index_map, int):
            index_map = constant(index_map)
        x = NSVertex(self, index_map)
        if not self.decide(self.validity_set(x), "vertex validity"):
            raise InvalidVertex(f"{index_map!r} is not a vertex of G_n for almost all n")
        return x

    def validity_set(self, x: NSVertex) -> Truth:
        fam = self.family
        q = x.index_map.quasi()
        return self.truth(lambda: fam.vertex_set(q), lambda n: fam.has_vertex(n, x.at(n)))

    def _check(self, *vs: NSVertex) -> None:
        for v in vs:
            if v.graph != self:
                raise FamilyMismatch("vertices belong to different nonstandard graphs")

    def equality_set(self, x: NSVertex, y: NSVertex) -> IndexSet:
        return x.index_map.quasi().compare_set("=", y.index_map.quasi())

    def vertex_eq(self, x: NSVertex, y: NSVertex) -> bool:
        self._check(x, y)
        return self.filter.contains(self.equality_set(x, y))

    def edge_truth(self, x: NSVertex, y: NSVertex) -> Truth:
        fam = self.family
        qx, qy = x.index_map.quasi(), y.index_map.quasi()
        return self.truth(lambda: fam.edge_set(qx, qy), lambda n: fam.has_edge(n, x.at(n), y.at(n)))

    def edge(self, x: NSVertex, y: NSVertex) -> Optional[NSEdge]:
        """The nonstandard edge {x, y}, or None when {x_n, y_n} is a.e. not an edge."""
        self._check(x, y)
        if self.vertex_eq(x, y):
            raise IdenticalVertices("an edge needs two distinct nonstandard vertices")
        t = self.edge_truth(x, y)
        if not self.decide(t, "edge formation"):
            return None
        cert = t.index_set if t.index_set is not None else IndexSet.everything()
        return NSEdge((x, y), cert)

    def adjacent(self, x: NSVertex, y: NSVertex) -> bool:
        return self.edge(x, y) is not None

    def incident(self, x: NSVertex, b: NSEdge) -> bool:
        u, v = b.endpoints
        self._check(x, u, v)
        return self.filter.contains(self.equality_set(x, u) | self.equality_set(x, v))

    def edge_eq(self, a: NSEdge, b: NSEdge) -> bool:
        (x, y), (u, v) = a.endpoints, b.endpoints
        same = (self.equality_set(x, u) & self.equality_set(y, v)) | (
            self.equality_set(x, v) & self.equality_set(y, u)
        )
        return self.filter.contains(same)

    # -- graph-level properties -------------------------------------------------------------

    def is_connected(self) -> bool:
        return self.decide(self.quantity_truth("connected"), "connectedness")

    def _require_connected(self) -> None:
        if not self.is_connected():
            raise NotConnected("G_n is disconnected for almost all n")

    def _require_class(self, name: str, message: str) -> None:
        self._require_connected()
        try:
            ok = self.decide(self.quantity_truth(name), message)
        except NotHyperfinite as exc:
            raise NotInCf(str(exc)) from exc
        if not ok:
            raise NotInCf(message)

    def path(self, x: NSVertex, y: NSVertex) -> NSPath:
        """Hyperfinite shortest path from x to y; its length is the class of per-index distances."""
        self._check(x, y)
        self._require_connected()
        if self.vertex_eq(x, y):
            raise IdenticalVertices("path endpoints must differ")
        fam = self.family
        try:
            q, exact = fam.distance(x.index_map.quasi(), y.index_map.quasi()), True
        except NotSymbolic:
            table = []
            for n in range(self.window):
                u, v = x.at(n), y.at(n)
                p = fam.path_at(n, u, v) if u != v and fam.has_vertex(n, u) and fam.has_vertex(n, v) else None
                table.append(p.length if p else 0)
            q, exact = self._fit(table, "path length"), False
        return NSPath(self, x, y, self.hypernat(q, "path length"), exact)

    def subgraph(self, rule: Rule) -> "NonstandardGraph":
        return NonstandardGraph(InducedFamily(self.family, rule, window=self.window), self.filter)

    def counts(self) -> Counts:
        self._require_class("in_cf", "G_n is outside the finite connected class for almost all n")
        (p, e1), (q, e2), (r, e3) = (self.sequence(k) for k in ("vertices", "edges", "cyclomatic"))
        hp, hq, hr = self.hypernat(p, "p"), self.hypernat(q, "q"), self.hypernat(r, "r")
        return Counts(hp, hq, hr, (hr + hp) == (hq + 1), e1 and e2 and e3)

    def metrics(self) -> NSMetrics:
        self._require_class("in_cf", "G_n is outside the finite connected class for almost all n")
        (r, e1), (d, e2) = self.sequence("radius"), self.sequence("diameter")
        hr, hd = self.hypernat(r, "radius"), self.hypernat(d, "diameter")
        ok = hr.compare(hd) is not Ordering.GREATER and hd.compare(2 * hr) is not Ordering.GREATER
        return NSMetrics(hr, hd, ok, e1 and e2)

    def max_degree(self) -> HyperNat:
        q, _ = self.sequence("max_degree")
        return self.hypernat(q, "max degree")

    def is_eulerian(self) -> bool:
        self._require_class("in_cf", "G_n is outside the finite connected class for almost all n")
        return self.decide(self.quantity_truth("all_even"), "even degrees")

    def hamiltonian_criteria(self) -> Criteria:
        self._require_class("ham_class", "G_n has fewer than three vertices for almost all n")
        return Criteria(*(self.decide(self.quantity_truth(c), c) for c in ("dirac", "ore", "posa")))

    def degree_bound_truth(self, k: int) -> Truth:
        fam = self.family
        return self.truth(
            lambda: fam.sequence("max_degree").compare_set("<=", k),
            lambda n: G.max_degree(fam.graph_at(n)) <= k,
        )

    def coloring(self, k: int) -> ColoringSummary:
        """Greedy colorings of each G_n in the window, under the a.e. degree bound k."""
        try:
            bounded = self.decide(self.degree_bound_truth(k), "degree bound")
        except NotHyperfinite as exc:
            raise DegreeBoundViolated(str(exc)) from exc
        if not bounded:
            raise DegreeBoundViolated(f"max degree exceeds {k} for almost all n")
        per_index, valid, top = [], True, 0
        for n in range(self.window):
            g = self.family.graph_at(n)
            col = G.greedy_coloring(g)
            per_index.append((n, col.colors_used))
            if G.max_degree(g) <= k:
                valid = valid and col.is_proper(g) and col.colors_used <= k + 1
                top = max(top, col.colors_used)
        return ColoringSummary(k, top, valid, tuple(per_index))
