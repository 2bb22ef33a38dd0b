import random

import networkx as nx
from hypothesis import strategies as st

from ultragraph.graph import Graph, random_connected_graph


def random_corpus(count: int, lo: int, hi: int, seed: int = 2024, density: float = 0.3) -> list[Graph]:
    """Seeded connected graphs with lo <= order <= hi."""
    rng = random.Random(seed)
    return [random_connected_graph(rng, rng.randint(lo, hi), density=rng.choice([0.1, density, 0.6])) for _ in range(count)]


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


@st.composite
def graphs(draw, min_order: int = 0, max_order: int = 9, connected: bool = False):
    n = draw(st.integers(min_order, max_order))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    if connected and n > 1:
        # thread a random spanning tree through the vertices
        order = draw(st.permutations(range(n)))
        for i in range(1, n):
            j = draw(st.integers(0, i - 1))
            edges.add(tuple(sorted((order[i], order[j]))))
    return Graph(range(n), edges)


# one PASS/FAIL line per acceptance criterion, repeated at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
