"""Finite simple graphs and the classical algorithms run on each index of a family.

Everything here is standard graph theory on a single finite graph. The
nonstandard layer evaluates these functions index by index, so they double
as the per-index oracle for every transferred statement.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import PreconditionFailed, UltragraphError

Edge = tuple[int, int]

HAMILTONIAN_BOUND = 12


class GraphError(UltragraphError):
    pass


class InvalidGraph(GraphError, ValueError):
    pass


class UnknownVertex(GraphError, LookupError):
    pass


class SameVertex(GraphError, ValueError):
    pass


class Disconnected(GraphError, PreconditionFailed):
    pass


class NotEulerian(GraphError, PreconditionFailed):
    pass


class TooSmall(GraphError, PreconditionFailed):
    pass


class TooLarge(GraphError):
    pass


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, init=False)
class Graph:
    """A finite simple graph: sorted vertex ids and a set of normalized edges."""

    vertices: tuple[int, ...]
    edges: frozenset[Edge]

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Iterable[int]] = ()):
        verts = list(vertices)
        for v in verts:
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InvalidGraph(f"vertex ids must be non-negative integers, got {v!r}")
        vset = set(verts)
        if len(vset) != len(verts):
            raise InvalidGraph("duplicate vertex id")
        norm: set[Edge] = set()
        for e in edges:
            pair = tuple(e)
            if len(pair) != 2:
                raise InvalidGraph(f"edge {e!r} is not a pair")
            u, v = pair
            if u == v:
                raise InvalidGraph(f"self-loop at {u}")
            if u not in vset or v not in vset:
                raise InvalidGraph(f"edge {pair} has an endpoint outside the vertex set")
            key = normalize_edge(u, v)
            if key in norm:
                raise InvalidGraph(f"duplicate edge {key}")
            norm.add(key)
        object.__setattr__(self, "vertices", tuple(sorted(vset)))
        object.__setattr__(self, "edges", frozenset(norm))

    @cached_property
    def adjacency(self) -> Mapping[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    @cached_property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)

    @property
    def order(self) -> int:
        return len(self.vertices)

    @property
    def size(self) -> int:
        return len(self.edges)

    def __contains__(self, v: object) -> bool:
        return v in self.vertex_set

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and normalize_edge(u, v) in self.edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._require(v)
        return self.adjacency[v]

    def _require(self, v: int) -> None:
        if v not in self.vertex_set:
            raise UnknownVertex(v)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in sorted(self.edges)]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        try:
            return cls(data["vertices"], data["edges"])
        except (KeyError, TypeError) as exc:
            raise InvalidGraph(f"malformed graph object: {exc}") from exc


def complete_graph(n: int) -> Graph:
    return Graph(range(n), ((i, j) for i in range(n) for j in range(i + 1, n)))


def path_graph(n: int) -> Graph:
    """P_n on ids 0..n-1 (n vertices, n-1 edges)."""
    return Graph(range(n), ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidGraph("a simple cycle needs at least 3 vertices")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def empty_graph(n: int) -> Graph:
    return Graph(range(n))


def random_connected_graph(rng: random.Random, n: int, density: float = 0.3) -> Graph:
    """Random spanning tree on ids 0..n-1 plus each remaining pair with probability ``density``."""
    order = list(range(n))
    rng.shuffle(order)
    edges = {normalize_edge(order[i], order[rng.randrange(i)]) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if (i, j) not in edges and rng.random() < density:
                edges.add((i, j))
    return Graph(range(n), edges)


# -- walks -------------------------------------------------------------------


@dataclass(frozen=True)
class Path:
    vertices: tuple[int, ...]

    @property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        return tuple(normalize_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1))

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    def is_valid_in(self, g: Graph) -> bool:
        vs = self.vertices
        return (
            len(vs) >= 2
            and len(set(vs)) == len(vs)
            and all(v in g for v in vs)
            and all(g.has_edge(*e) for e in self.edges)
        )


@dataclass(frozen=True)
class Trail:
    """Vertex sequence x_0..x_k of a walk with distinct edges; closed trails repeat x_0 at the end."""

    vertices: tuple[int, ...]
    closed: bool = False

    @property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        return tuple(normalize_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1))

    def is_valid_in(self, g: Graph) -> bool:
        es = self.edges
        if not es or len(set(es)) != len(es):
            return False
        if not all(g.has_edge(*e) for e in es):
            return False
        return not self.closed or self.vertices[0] == self.vertices[-1]


@dataclass(frozen=True)
class Loop:
    """Closed path x_0..x_{k-1} (x_k = x_0 implied) with distinct vertices."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("a loop in a simple graph has length at least 3")

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def edges(self) -> tuple[Edge, ...]:
        vs = self.vertices
        return tuple(normalize_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def is_valid_in(self, g: Graph) -> bool:
        return len(set(self.vertices)) == len(self.vertices) and all(g.has_edge(*e) for e in self.edges)


@dataclass(frozen=True)
class Coloring:
    assignment: Mapping[int, int]

    @property
    def colors_used(self) -> int:
        return len(set(self.assignment.values()))

    def is_proper(self, g: Graph) -> bool:
        if set(self.assignment) != g.vertex_set:
            return False
        return all(self.assignment[u] != self.assignment[v] for u, v in g.edges)


# -- basic measurements ----------------------------------------------------------


def degree(g: Graph, x: int) -> int:
    return len(g.neighbors(x))


def degrees(g: Graph) -> dict[int, int]:
    return {v: len(ns) for v, ns in g.adjacency.items()}


def max_degree(g: Graph) -> int:
    return max((len(ns) for ns in g.adjacency.values()), default=0)


def _bfs(g: Graph, source: int) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def distances_from(g: Graph, source: int) -> dict[int, int]:
    g._require(source)
    return _bfs(g, source)


def is_connected(g: Graph) -> bool:
    """Single-vertex graphs are connected; the empty graph is not."""
    if not g.vertices:
        return False
    return len(_bfs(g, g.vertices[0])) == g.order


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise Disconnected("graph is not connected")


def path_between(g: Graph, x: int, y: int) -> Optional[Path]:
    """Shortest path from x to y, or None when they lie in different components."""
    g._require(x)
    g._require(y)
    if x == y:
        raise SameVertex(x)
    parent = {x: x}
    queue = deque([x])
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    if y not in parent:
        return None
    seq = [y]
    while seq[-1] != x:
        seq.append(parent[seq[-1]])
    return Path(tuple(reversed(seq)))


@dataclass(frozen=True)
class Metrics:
    eccentricities: Mapping[int, int]
    radius: int
    diameter: int


def _eccentricity(masks: list[int], source: int) -> int:
    seen = frontier = 1 << source
    ecc = 0
    while True:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= masks[low.bit_length() - 1]
            f ^= low
        nxt &= ~seen
        if not nxt:
            return ecc
        seen |= nxt
        frontier = nxt
        ecc += 1


def metrics(g: Graph) -> Metrics:
    """Shortest-path eccentricities with radius and diameter."""
    _require_connected(g)
    pos = {v: i for i, v in enumerate(g.vertices)}
    masks = [0] * g.order
    for u, v in g.edges:
        masks[pos[u]] |= 1 << pos[v]
        masks[pos[v]] |= 1 << pos[u]
    ecc = {v: _eccentricity(masks, i) for i, v in enumerate(g.vertices)}
    return Metrics(ecc, min(ecc.values()), max(ecc.values()))


def has_cycle(g: Graph) -> bool:
    # A forest has exactly |X| - (#components) edges.
    seen: set[int] = set()
    components = 0
    for v in g.vertices:
        if v not in seen:
            components += 1
            seen.update(_bfs(g, v))
    return g.size > g.order - components


def is_tree(g: Graph) -> bool:
    return is_connected(g) and not has_cycle(g)


def spanning_tree(g: Graph) -> Graph:
    """Breadth-first spanning tree rooted at the smallest vertex id."""
    _require_connected(g)
    root = g.vertices[0]
    seen = {root}
    queue = deque([root])
    tree_edges = []
    adj = g.adjacency
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                tree_edges.append((u, w))
                queue.append(w)
    return Graph(g.vertices, tree_edges)


def cyclomatic_number(g: Graph) -> int:
    """Edges outside a spanning tree, |B| - |B_T|."""
    return g.size - spanning_tree(g).size


def edge_bounds_check(g: Graph) -> bool:
    _require_connected(g)
    p, q = g.order, g.size
    if p < 2:
        raise TooSmall("edge bounds need at least two vertices")
    return p - 1 <= q and 2 * q <= p * (p - 1)


# -- Euler -------------------------------------------------------------------------


def all_degrees_even(g: Graph) -> bool:
    return all(len(ns) % 2 == 0 for ns in g.adjacency.values())


def is_eulerian(g: Graph) -> bool:
    _require_connected(g)
    if g.size == 0:
        raise TooSmall("Eulerian test needs at least one edge")
    return all_degrees_even(g)


def eulerian_circuit(g: Graph) -> Trail:
    """Closed trail through every edge exactly once (Hierholzer splice)."""
    if not is_eulerian(g):
        raise NotEulerian("some vertex has odd degree")
    remaining = {v: list(reversed(ns)) for v, ns in g.adjacency.items()}
    used: set[Edge] = set()
    start = g.vertices[0]
    stack = [start]
    circuit: list[int] = []
    while stack:
        u = stack[-1]
        nbrs = remaining[u]
        while nbrs and normalize_edge(u, nbrs[-1]) in used:
            nbrs.pop()
        if nbrs:
            w = nbrs.pop()
            used.add(normalize_edge(u, w))
            stack.append(w)
        else:
            circuit.append(stack.pop())
    circuit.reverse()
    return Trail(tuple(circuit), closed=True)


# -- Hamiltonian -----------------------------------------------------------------


@dataclass(frozen=True)
class HamiltonCriteria:
    dirac: bool
    ore: bool
    posa: bool

    def any(self) -> bool:
        return self.dirac or self.ore or self.posa


def hamiltonian_criteria(g: Graph) -> HamiltonCriteria:
    _require_connected(g)
    n = g.order
    if n < 3:
        raise TooSmall("Hamiltonian criteria need at least 3 vertices")
    deg = degrees(g)
    dirac = all(2 * d >= n for d in deg.values())
    verts = g.vertices
    ore = all(
        deg[x] + deg[y] >= n
        for i, x in enumerate(verts)
        for y in verts[i + 1 :]
        if not g.has_edge(x, y)
    )
    # 1 <= j < n/2
    posa = all(sum(1 for d in deg.values() if d <= j) < j for j in range(1, (n + 1) // 2))
    return HamiltonCriteria(dirac, ore, posa)


def hamiltonian_bruteforce(g: Graph, bound: int = HAMILTONIAN_BOUND) -> Optional[Loop]:
    """Exhaustive search for a Hamiltonian loop; None if the graph has none."""
    n = g.order
    if n > bound:
        raise TooLarge(f"{n} vertices exceeds the brute-force bound {bound}")
    if n < 3:
        return None
    adj = g.adjacency
    start = g.vertices[0]
    path = [start]
    on_path = {start}

    def extend() -> bool:
        u = path[-1]
        if len(path) == n:
            return g.has_edge(u, start)
        for w in adj[u]:
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                if extend():
                    return True
                path.pop()
                on_path.discard(w)
        return False

    return Loop(tuple(path)) if extend() else None


# -- coloring and subgraphs ------------------------------------------------------


def greedy_coloring(g: Graph) -> Coloring:
    """Ascending vertex order, smallest free color starting at 1."""
    colors: dict[int, int] = {}
    for v in g.vertices:
        taken = {colors[w] for w in g.adjacency[v] if w in colors}
        c = 1
        while c in taken:
            c += 1
        colors[v] = c
    return Coloring(colors)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    keep = set(s)
    for v in keep:
        g._require(v)
    return Graph(keep, (e for e in g.edges if e[0] in keep and e[1] in keep))
