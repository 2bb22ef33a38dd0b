"""Sequences of graphs <G_n> and the exact sequences of their invariants.

Structured families (constant, growing path/cycle/complete, periodic,
explicit prefix plus tail) produce every per-index invariant as a
``QuasiPoly`` with no window involved: growing kinds combine a known
asymptotic formula in the size with direct computation on the small sizes
below its threshold. Opaque families (induced subgraphs, random graphs,
Python callables) raise ``NotSymbolic`` and are evaluated on a window by
the caller instead.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, ClassVar, Mapping, Optional, Sequence

from . import graph as G
from .errors import UltragraphError
from .graph import Graph
from .hypernat import EventualFunction, QuasiPoly, SeqNat, seqnat_from_json
from .index_filter import IndexSet

DEFAULT_WINDOW = 64


class FamilyError(UltragraphError):
    pass


class InvalidFamily(FamilyError, ValueError):
    pass


class Unmaterializable(FamilyError):
    pass


class NotSymbolic(FamilyError):
    """No exact closed form is available; evaluate on a window instead."""


class NotHyperfinite(FamilyError):
    pass


# -- per-graph invariants ------------------------------------------------------------
#
# Booleans are 0/1. Quantities undefined on a graph (radius of a disconnected
# graph, criteria below three vertices) read 0; such indices fall outside the
# class every consumer gates on.


def _connected(g: Graph) -> int:
    return int(G.is_connected(g))


def _in_cf(g: Graph) -> int:
    return int(g.order >= 2 and g.size >= 1 and G.is_connected(g))


def _ham_class(g: Graph) -> int:
    return int(g.order >= 3 and G.is_connected(g))


def _if_connected(fn: Callable[[Graph], int]) -> Callable[[Graph], int]:
    return lambda g: fn(g) if G.is_connected(g) else 0


def _criterion(name: str) -> Callable[[Graph], int]:
    return lambda g: int(getattr(G.hamiltonian_criteria(g), name)) if _ham_class(g) else 0


QUANTITIES: Mapping[str, Callable[[Graph], int]] = {
    "vertices": lambda g: g.order,
    "edges": lambda g: g.size,
    "connected": _connected,
    "in_cf": _in_cf,
    "ham_class": _ham_class,
    "spanning_edges": _if_connected(lambda g: G.spanning_tree(g).size),
    "cyclomatic": _if_connected(G.cyclomatic_number),
    "radius": _if_connected(lambda g: G.metrics(g).radius),
    "diameter": _if_connected(lambda g: G.metrics(g).diameter),
    "max_degree": G.max_degree,
    "colors": lambda g: G.greedy_coloring(g).colors_used,
    "all_even": lambda g: int(G.all_degrees_even(g)),
    "eulerian": lambda g: int(_in_cf(g) and G.all_degrees_even(g)),
    "dirac": _criterion("dirac"),
    "ore": _criterion("ore"),
    "posa": _criterion("posa"),
}

BOOLEAN_QUANTITIES = frozenset({"connected", "in_cf", "ham_class", "all_even", "eulerian", "dirac", "ore", "posa"})


@lru_cache(maxsize=65536)
def quantity(name: str, g: Graph) -> int:
    return QUANTITIES[name](g)


# -- asymptotics of the growing kinds ------------------------------------------------------
# (threshold, period, polynomials in the size m per residue of m mod period)

_H = Fraction(1, 2)
_M = (0, 1)  # m
_HALF_FLOOR = ((0, _H), (-_H, _H))  # floor(m/2)

_ASYMPTOTICS: dict[str, dict[str, tuple[int, int, tuple]]] = {
    "growing_path": {
        "vertices": (1, 1, (_M,)),
        "edges": (1, 1, ((-1, 1),)),
        "connected": (1, 1, ((1,),)),
        "in_cf": (2, 1, ((1,),)),
        "ham_class": (3, 1, ((1,),)),
        "spanning_edges": (1, 1, ((-1, 1),)),
        "cyclomatic": (1, 1, ((),)),
        "radius": (1, 2, _HALF_FLOOR),
        "diameter": (1, 1, ((-1, 1),)),
        "max_degree": (3, 1, ((2,),)),
        "colors": (2, 1, ((2,),)),
        "all_even": (2, 1, ((),)),
        "eulerian": (2, 1, ((),)),
        "dirac": (3, 1, ((),)),
        "ore": (3, 1, ((),)),
        "posa": (3, 1, ((),)),
    },
    "growing_cycle": {
        "vertices": (3, 1, (_M,)),
        "edges": (3, 1, (_M,)),
        "connected": (3, 1, ((1,),)),
        "in_cf": (3, 1, ((1,),)),
        "ham_class": (3, 1, ((1,),)),
        "spanning_edges": (3, 1, ((-1, 1),)),
        "cyclomatic": (3, 1, ((1,),)),
        "radius": (3, 2, _HALF_FLOOR),
        "diameter": (3, 2, _HALF_FLOOR),
        "max_degree": (3, 1, ((2,),)),
        "colors": (3, 2, ((2,), (3,))),
        "all_even": (3, 1, ((1,),)),
        "eulerian": (3, 1, ((1,),)),
        "dirac": (5, 1, ((),)),
        "ore": (5, 1, ((),)),
        "posa": (5, 1, ((),)),
    },
    "growing_complete": {
        "vertices": (1, 1, (_M,)),
        "edges": (1, 1, ((0, -_H, _H),)),
        "connected": (1, 1, ((1,),)),
        "in_cf": (2, 1, ((1,),)),
        "ham_class": (3, 1, ((1,),)),
        "spanning_edges": (1, 1, ((-1, 1),)),
        "cyclomatic": (1, 1, ((1, -3 * _H, _H),)),
        "radius": (2, 1, ((1,),)),
        "diameter": (2, 1, ((1,),)),
        "max_degree": (1, 1, ((-1, 1),)),
        "colors": (1, 1, (_M,)),
        "all_even": (1, 2, ((), (1,))),
        "eulerian": (2, 2, ((), (1,))),
        "dirac": (3, 1, ((1,),)),
        "ore": (3, 1, ((1,),)),
        "posa": (3, 1, ((1,),)),
    },
}


# -- index-map helpers -------------------------------------------------------------------


def _eq(x: QuasiPoly, c) -> IndexSet:
    return x.compare_set("=", c)


def _on_residue(modulus: int, t: int, s: IndexSet) -> IndexSet:
    return IndexSet.residue_class(modulus, t) & s


def _finite_vertex_set(g: Graph, x: QuasiPoly) -> IndexSet:
    return x.preimage(IndexSet.finite(g.vertices))


def _finite_edge_set(g: Graph, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
    out = IndexSet.empty()
    for u, v in g.edges:
        out = out | (_eq(x, u) & _eq(y, v)) | (_eq(x, v) & _eq(y, u))
    return out


def _finite_distance(g: Graph, u: int, v: int) -> int:
    if u == v or u not in g or v not in g:
        return 0
    p = G.path_between(g, u, v)
    return p.length if p else 0


# -- families -----------------------------------------------------------------------------


class GraphFamily:
    """A sequence of graphs indexed by the naturals."""

    kind: ClassVar[str] = ""
    window: int

    def graph_at(self, n: int) -> Graph:
        raise NotImplementedError

    def sequence(self, name: str) -> QuasiPoly:
        """Exact per-index sequence of QUANTITIES[name]."""
        raise NotSymbolic(self.kind)

    def vertex_set(self, x: QuasiPoly) -> IndexSet:
        """{n : x(n) is a vertex of G_n}."""
        raise NotSymbolic(self.kind)

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        """{n : {x(n), y(n)} is an edge of G_n}."""
        raise NotSymbolic(self.kind)

    def distance(self, x: QuasiPoly, y: QuasiPoly) -> QuasiPoly:
        """Per-index shortest-path distance (0 where undefined)."""
        raise NotSymbolic(self.kind)

    def has_vertex(self, n: int, v: int) -> bool:
        return v in self.graph_at(n)

    def has_edge(self, n: int, u: int, v: int) -> bool:
        return self.graph_at(n).has_edge(u, v)

    def path_at(self, n: int, u: int, v: int) -> Optional[G.Path]:
        return G.path_between(self.graph_at(n), u, v)

    @property
    def hyperfinite(self) -> bool:
        return True

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantFamily(GraphFamily):
    kind: ClassVar[str] = "constant"
    graph: Graph
    window: int = DEFAULT_WINDOW

    def graph_at(self, n: int) -> Graph:
        return self.graph

    def sequence(self, name: str) -> QuasiPoly:
        return QuasiPoly.constant(quantity(name, self.graph))

    def vertex_set(self, x: QuasiPoly) -> IndexSet:
        return _finite_vertex_set(self.graph, x)

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        return _finite_edge_set(self.graph, x, y)

    def to_json(self) -> dict:
        return {"kind": self.kind, "graph": self.graph.to_json(), "window": self.window}


@dataclass(frozen=True)
class InfinitePath(GraphFamily):
    """Every G_n is the one-way infinite path x_0, x_1, ...; never materialized."""

    kind: ClassVar[str] = "infinite_path"
    window: int = DEFAULT_WINDOW

    def graph_at(self, n: int) -> Graph:
        raise Unmaterializable("the infinite path answers adjacency queries only")

    def sequence(self, name: str) -> QuasiPoly:
        if name == "connected":
            return QuasiPoly.constant(1)
        raise NotHyperfinite(f"{name} is not finite on the infinite path")

    def vertex_set(self, x: QuasiPoly) -> IndexSet:
        return IndexSet.everything()

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        d = x - y
        return _eq(d, 1) | _eq(d, -1)

    def distance(self, x: QuasiPoly, y: QuasiPoly) -> QuasiPoly:
        return abs(x - y)

    def has_vertex(self, n: int, v: int) -> bool:
        return v >= 0

    def has_edge(self, n: int, u: int, v: int) -> bool:
        return abs(u - v) == 1

    def path_at(self, n: int, u: int, v: int) -> Optional[G.Path]:
        if u == v:
            raise G.SameVertex(u)
        step = 1 if v > u else -1
        return G.Path(tuple(range(u, v + step, step)))

    @property
    def hyperfinite(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"kind": self.kind, "window": self.window}


@dataclass(frozen=True)
class _Growing(GraphFamily):
    size: SeqNat
    window: int = DEFAULT_WINDOW
    minimum: ClassVar[int] = 1

    def __post_init__(self):
        low = self.size.quasi().compare_set("<", self.minimum)
        if not low.is_empty():
            raise InvalidFamily(f"{self.kind} needs size >= {self.minimum}; violated at {sorted(low.added)[:5]}")

    @staticmethod
    def build(m: int) -> Graph:
        raise NotImplementedError

    def graph_at(self, n: int) -> Graph:
        return _build_cached(self.kind, self.size(n))

    def sequence(self, name: str) -> QuasiPoly:
        threshold, period, polys = _ASYMPTOTICS[self.kind][name]
        kind = self.kind
        fn = EventualFunction(threshold, period, polys, lambda m: quantity(name, _build_cached(kind, m)))
        return self.size.quasi().compose(fn)

    def _valid(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        s = self.size.quasi()
        return s.compare_set(">", x) & s.compare_set(">", y)

    def vertex_set(self, x: QuasiPoly) -> IndexSet:
        return self.size.quasi().compare_set(">", x)

    def to_json(self) -> dict:
        return {"kind": self.kind, "size": self.size.to_json(), "window": self.window}


@dataclass(frozen=True)
class GrowingPath(_Growing):
    kind: ClassVar[str] = "growing_path"

    @staticmethod
    def build(m: int) -> Graph:
        return G.path_graph(m)

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        d = x - y
        return self._valid(x, y) & (_eq(d, 1) | _eq(d, -1))

    def distance(self, x: QuasiPoly, y: QuasiPoly) -> QuasiPoly:
        return abs(x - y)


@dataclass(frozen=True)
class GrowingCycle(_Growing):
    kind: ClassVar[str] = "growing_cycle"
    minimum: ClassVar[int] = 3

    @staticmethod
    def build(m: int) -> Graph:
        return G.cycle_graph(m)

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        d = abs(x - y)
        wrap = self.size.quasi() - 1
        return self._valid(x, y) & (_eq(d, 1) | d.compare_set("=", wrap))

    def distance(self, x: QuasiPoly, y: QuasiPoly) -> QuasiPoly:
        d = abs(x - y)
        return d.minimum(self.size.quasi() - d).maximum(0)


@dataclass(frozen=True)
class GrowingComplete(_Growing):
    kind: ClassVar[str] = "growing_complete"

    @staticmethod
    def build(m: int) -> Graph:
        return G.complete_graph(m)

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        return self._valid(x, y) & (x - y).sign_set("!=")

    def distance(self, x: QuasiPoly, y: QuasiPoly) -> QuasiPoly:
        return abs(x - y).minimum(1)


_GROWING = {cls.kind: cls for cls in (GrowingPath, GrowingCycle, GrowingComplete)}


@lru_cache(maxsize=4096)
def _build_cached(kind: str, m: int) -> Graph:
    return _GROWING[kind].build(m)


@dataclass(frozen=True)
class PeriodicFamily(GraphFamily):
    """G_n = graphs[n mod len(graphs)]."""

    kind: ClassVar[str] = "periodic"
    graphs: tuple[Graph, ...]
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        if not self.graphs:
            raise InvalidFamily("periodic family needs at least one graph")

    def graph_at(self, n: int) -> Graph:
        return self.graphs[n % len(self.graphs)]

    def sequence(self, name: str) -> QuasiPoly:
        return QuasiPoly(len(self.graphs), tuple((quantity(name, g),) for g in self.graphs))

    def _split(self, per_graph: Callable[[Graph], IndexSet]) -> IndexSet:
        L = len(self.graphs)
        out = IndexSet.empty()
        for t, g in enumerate(self.graphs):
            out = out | _on_residue(L, t, per_graph(g))
        return out

    def vertex_set(self, x: QuasiPoly) -> IndexSet:
        return self._split(lambda g: _finite_vertex_set(g, x))

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        return self._split(lambda g: _finite_edge_set(g, x, y))

    def to_json(self) -> dict:
        return {"kind": self.kind, "graphs": [g.to_json() for g in self.graphs], "window": self.window}


@dataclass(frozen=True)
class ExplicitFamily(GraphFamily):
    """Finitely many given graphs, then another family (indexed by the absolute n)."""

    kind: ClassVar[str] = "explicit"
    prefix: tuple[Graph, ...]
    tail: GraphFamily
    window: int = DEFAULT_WINDOW

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))

    def graph_at(self, n: int) -> Graph:
        return self.prefix[n] if n < len(self.prefix) else self.tail.graph_at(n)

    def sequence(self, name: str) -> QuasiPoly:
        t = self.tail.sequence(name)
        head = tuple(quantity(name, g) for g in self.prefix)
        return QuasiPoly(t.modulus, t.polys, head + t.prefix[len(head):])

    def _patch(self, s: IndexSet, per_index: Callable[[int, Graph], bool]) -> IndexSet:
        return s.with_head([per_index(n, g) for n, g in enumerate(self.prefix)])

    def vertex_set(self, x: QuasiPoly) -> IndexSet:
        return self._patch(self.tail.vertex_set(x), lambda n, g: x(n) in g)

    def edge_set(self, x: QuasiPoly, y: QuasiPoly) -> IndexSet:
        return self._patch(self.tail.edge_set(x, y), lambda n, g: g.has_edge(x(n), y(n)))

    def distance(self, x: QuasiPoly, y: QuasiPoly) -> QuasiPoly:
        t = self.tail.distance(x, y)
        head = tuple(_finite_distance(g, x(n), y(n)) for n, g in enumerate(self.prefix))
        return QuasiPoly(t.modulus, t.polys, head + t.prefix[len(head):])

    def has_vertex(self, n: int, v: int) -> bool:
        return v in self.prefix[n] if n < len(self.prefix) else self.tail.has_vertex(n, v)

    def has_edge(self, n: int, u: int, v: int) -> bool:
        return self.prefix[n].has_edge(u, v) if n < len(self.prefix) else self.tail.has_edge(n, u, v)

    def path_at(self, n: int, u: int, v: int) -> Optional[G.Path]:
        return G.path_between(self.prefix[n], u, v) if n < len(self.prefix) else self.tail.path_at(n, u, v)

    @property
    def hyperfinite(self) -> bool:
        return self.tail.hyperfinite

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "prefix": [g.to_json() for g in self.prefix],
            "tail": self.tail.to_json(),
            "window": self.window,
        }


# -- vertex-selection rules and opaque families --------------------------------------------


@dataclass(frozen=True)
class IdsBelow:
    """Keep vertex ids below threshold(n)."""

    threshold: SeqNat

    def keep(self, n: int, g: Graph) -> list[int]:
        t = self.threshold(n)
        return [v for v in g.vertices if v < t]

    def to_json(self) -> dict:
        return {"ids_below": self.threshold.to_json()}


@dataclass(frozen=True)
class IdsInResidues:
    """Keep vertex ids congruent to one of ``residues`` mod ``modulus``."""

    modulus: int
    residues: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "residues", frozenset(self.residues))

    def keep(self, n: int, g: Graph) -> list[int]:
        return [v for v in g.vertices if v % self.modulus in self.residues]

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "residues": sorted(self.residues)}


@dataclass(frozen=True)
class AllIds:
    def keep(self, n: int, g: Graph) -> list[int]:
        return list(g.vertices)

    def to_json(self) -> dict:
        return {"all": True}


Rule = IdsBelow | IdsInResidues | AllIds


def rule_from_json(data: Mapping) -> Rule:
    if "ids_below" in data:
        return IdsBelow(seqnat_from_json(data["ids_below"]))
    if "residues" in data:
        return IdsInResidues(int(data["modulus"]), frozenset(data["residues"]))
    if data.get("all"):
        return AllIds()
    raise ValueError(f"unsupported vertex rule {dict(data)!r}")


@dataclass(frozen=True)
class InducedFamily(GraphFamily):
    """G_n replaced by its subgraph induced on rule.keep(n)."""

    kind: ClassVar[str] = "induced"
    base: GraphFamily
    rule: Rule
    window: int = DEFAULT_WINDOW

    def graph_at(self, n: int) -> Graph:
        g = self.base.graph_at(n)
        return G.induced_subgraph(g, self.rule.keep(n, g))

    def to_json(self) -> dict:
        return {"kind": self.kind, "base": self.base.to_json(), "rule": self.rule.to_json(), "window": self.window}


@dataclass(frozen=True)
class RandomFamily(GraphFamily):
    """G_n is a random connected graph seeded by (seed, n)."""

    kind: ClassVar[str] = "random_connected"
    seed: int = 0
    min_order: int = 4
    max_order: int = 12
    density: float = 0.3
    window: int = DEFAULT_WINDOW

    def graph_at(self, n: int) -> Graph:
        rng = random.Random(self.seed * 1_000_003 + n)
        return G.random_connected_graph(rng, rng.randint(self.min_order, self.max_order), self.density)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "seed": self.seed,
            "min_order": self.min_order,
            "max_order": self.max_order,
            "density": self.density,
            "window": self.window,
        }


@dataclass(frozen=True)
class FunctionFamily(GraphFamily):
    """Arbitrary Python rule n -> G_n. Not serializable."""

    kind: ClassVar[str] = "function"
    fn: Callable[[int], Graph] = field(compare=False)
    label: str = "function"
    window: int = DEFAULT_WINDOW

    def graph_at(self, n: int) -> Graph:
        return self.fn(n)

    def to_json(self) -> dict:
        return {"kind": self.kind, "label": self.label, "window": self.window}


def graph_at(fam: GraphFamily, n: int) -> Graph:
    return fam.graph_at(n)


def family_from_json(data: Mapping, window: Optional[int] = None) -> GraphFamily:
    """Parse a family spec such as {"kind": "growing_complete", "size": {...}, "window": 64}."""
    try:
        kind = data["kind"]
        w = int(window if window is not None else data.get("window", DEFAULT_WINDOW))
        if kind == "constant":
            return ConstantFamily(Graph.from_json(data["graph"]), window=w)
        if kind == "infinite_path":
            return InfinitePath(window=w)
        if kind in _GROWING:
            return _GROWING[kind](seqnat_from_json(data["size"]), window=w)
        if kind == "periodic":
            return PeriodicFamily(tuple(Graph.from_json(g) for g in data["graphs"]), window=w)
        if kind == "explicit":
            return ExplicitFamily(
                tuple(Graph.from_json(g) for g in data["prefix"]),
                family_from_json(data["tail"], w),
                window=w,
            )
        if kind == "induced":
            return InducedFamily(family_from_json(data["base"], w), rule_from_json(data["rule"]), window=w)
        if kind == "random_connected":
            return RandomFamily(
                int(data.get("seed", 0)),
                int(data.get("min_order", 4)),
                int(data.get("max_order", 12)),
                float(data.get("density", 0.3)),
                window=w,
            )
    except (KeyError, TypeError) as exc:
        raise InvalidFamily(f"malformed family spec: {exc}") from exc
    raise InvalidFamily(f"unknown family kind {data.get('kind')!r}")
