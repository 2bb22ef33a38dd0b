import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ultragraph import graph as G
from ultragraph.errors import PreconditionFailed
from ultragraph.graph import Graph, complete_graph, cycle_graph, path_graph

from conftest import graphs, random_corpus, to_nx

K4, K5, P5, C4, C5, C6 = complete_graph(4), complete_graph(5), path_graph(5), cycle_graph(4), cycle_graph(5), cycle_graph(6)
BOWTIE = Graph(range(5), [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
K33 = Graph(range(6), [(a, b) for a in range(3) for b in range(3, 6)])


class TestConstruction:
    def test_edges_are_normalized(self):
        g = Graph([0, 1, 2], [(2, 0), [1, 2]])
        assert g.edges == {(0, 2), (1, 2)}

    @pytest.mark.parametrize(
        "vertices, edges",
        [
            ([0, 1], [(1, 1)]),
            ([0, 1], [(0, 1), (1, 0)]),
            ([0, 0], []),
            ([0, 1], [(0, 5)]),
            ([-1], []),
            ([0, 1], [(0, 1, 2)]),
        ],
    )
    def test_rejects_invalid(self, vertices, edges):
        with pytest.raises(G.InvalidGraph):
            Graph(vertices, edges)

    def test_json_round_trip(self):
        data = BOWTIE.to_json()
        assert data["edges"] == sorted(data["edges"])
        assert Graph.from_json(data) == BOWTIE

    def test_malformed_json(self):
        with pytest.raises(G.InvalidGraph):
            Graph.from_json({"vertices": [0]})

    def test_unknown_vertex(self):
        with pytest.raises(G.UnknownVertex):
            G.degree(K4, 9)


class TestExamples:
    def test_degrees(self):
        assert all(G.degree(K4, v) == 3 for v in K4.vertices)
        assert [G.degree(P5, v) for v in P5.vertices] == [1, 2, 2, 2, 1]

    def test_path_between(self):
        p = G.path_between(P5, 0, 4)
        assert p.length == 4 and p.is_valid_in(P5)
        with pytest.raises(G.SameVertex):
            G.path_between(P5, 2, 2)
        assert G.path_between(Graph([0, 1]), 0, 1) is None

    def test_metrics(self):
        m = G.metrics(P5)
        assert [m.eccentricities[v] for v in P5.vertices] == [4, 3, 2, 3, 4]
        assert (m.radius, m.diameter) == (2, 4)
        assert (G.metrics(C6).radius, G.metrics(C6).diameter) == (3, 3)
        with pytest.raises(G.Disconnected):
            G.metrics(Graph([0, 1]))

    def test_trees(self):
        assert not G.is_tree(K4) and G.is_tree(P5)
        assert G.has_cycle(K4) and not G.has_cycle(P5)
        assert G.spanning_tree(K4).size == 3
        t = G.spanning_tree(C4)
        assert t.size == 3 and G.is_tree(t)

    def test_cyclomatic(self):
        assert G.cyclomatic_number(K4) == 3
        assert G.cyclomatic_number(C4) == 1

    def test_edge_bounds(self):
        assert G.edge_bounds_check(K4) and G.edge_bounds_check(P5)
        with pytest.raises(G.TooSmall):
            G.edge_bounds_check(Graph([0]))

    def test_euler(self):
        assert not G.is_eulerian(K4) and G.is_eulerian(K5)
        assert len(G.eulerian_circuit(K5).edges) == 10
        bow = G.eulerian_circuit(BOWTIE)
        assert len(bow.edges) == 6 and bow.is_valid_in(BOWTIE) and bow.closed
        with pytest.raises(G.NotEulerian):
            G.eulerian_circuit(K4)
        with pytest.raises(G.Disconnected):
            G.is_eulerian(Graph([0, 1, 2, 3], [(0, 1), (2, 3)]))

    def test_hamiltonian_criteria(self):
        assert G.hamiltonian_criteria(K4) == G.HamiltonCriteria(True, True, True)
        assert G.hamiltonian_criteria(C6) == G.HamiltonCriteria(False, False, False)
        assert G.hamiltonian_criteria(K33).dirac

    def test_bruteforce(self):
        loop = G.hamiltonian_bruteforce(C6)
        assert loop is not None and loop.is_valid_in(C6) and loop.length == 6
        assert G.hamiltonian_bruteforce(P5) is None
        assert G.hamiltonian_bruteforce(BOWTIE) is None
        with pytest.raises(G.TooLarge):
            G.hamiltonian_bruteforce(complete_graph(13))

    def test_coloring(self):
        assert G.greedy_coloring(C4).colors_used == 2
        assert G.greedy_coloring(K4).colors_used == 4
        assert G.greedy_coloring(C5).colors_used == 3

    def test_induced(self):
        assert G.induced_subgraph(K4, [0, 1, 2]) == complete_graph(3)

    def test_loop_requires_three(self):
        with pytest.raises(ValueError):
            G.Loop((0, 1))

    def test_precondition_errors_share_base(self):
        assert issubclass(G.Disconnected, PreconditionFailed)
        assert issubclass(G.TooSmall, PreconditionFailed)


# -- properties, with networkx as the independent oracle -------------------------------------


@given(graphs())
def test_connectivity_matches_networkx(g):
    if g.order == 0:
        assert not G.is_connected(g)
    else:
        assert G.is_connected(g) == nx.is_connected(to_nx(g))


@given(graphs(min_order=1, connected=True))
def test_metrics_match_networkx(g):
    h = to_nx(g)
    m = G.metrics(g)
    assert m.eccentricities == nx.eccentricity(h)
    assert m.radius <= m.diameter <= 2 * m.radius


@given(graphs(min_order=2, connected=True))
def test_spanning_tree_and_cyclomatic(g):
    t = G.spanning_tree(g)
    assert t.vertices == g.vertices and t.edges <= g.edges
    assert t.size == g.order - 1 and nx.is_tree(to_nx(t))
    assert G.cyclomatic_number(g) == g.size - g.order + 1
    assert G.edge_bounds_check(g)


@given(graphs(min_order=1, connected=True))
def test_euler_biconditional(g):
    if g.size == 0:
        return
    euler = G.is_eulerian(g)
    assert euler == nx.is_eulerian(to_nx(g))
    if euler:
        c = G.eulerian_circuit(g)
        assert c.is_valid_in(g) and sorted(c.edges) == sorted(g.edges)
    else:
        with pytest.raises(G.NotEulerian):
            G.eulerian_circuit(g)


@settings(max_examples=150)
@given(graphs(min_order=3, max_order=8, connected=True))
def test_criteria_imply_hamiltonian(g):
    c = G.hamiltonian_criteria(g)
    if c.dirac:
        assert c.ore
    if c.any():
        loop = G.hamiltonian_bruteforce(g)
        assert loop is not None and loop.is_valid_in(g)


@given(graphs(min_order=3, max_order=7))
def test_bruteforce_matches_exhaustive_oracle(g):
    found = G.hamiltonian_bruteforce(g) is not None
    first, *rest = g.vertices
    oracle = any(
        all(g.has_edge(a, b) for a, b in zip((first, *perm), (*perm, first)))
        for perm in itertools.permutations(rest)
    )
    assert found == oracle


@given(graphs())
def test_greedy_coloring_bound(g):
    c = G.greedy_coloring(g)
    assert c.is_proper(g)
    assert c.colors_used <= (G.max_degree(g) + 1 if g.order else 0)


@given(graphs(min_order=2, connected=True), st.data())
def test_path_between_is_shortest(g, data):
    x, y = data.draw(st.sampled_from(list(itertools.permutations(g.vertices, 2))))
    p = G.path_between(g, x, y)
    assert p.is_valid_in(g) and p.vertices[0] == x and p.vertices[-1] == y
    assert p.length == nx.shortest_path_length(to_nx(g), x, y)


@given(graphs(min_order=1), st.data())
def test_induced_subgraph_identity_and_monotone(g, data):
    assert G.induced_subgraph(g, g.vertices) == g
    s = data.draw(st.sets(st.sampled_from(g.vertices)))
    t = s | data.draw(st.sets(st.sampled_from(g.vertices)))
    assert G.induced_subgraph(g, s).edges <= G.induced_subgraph(g, t).edges
    assert {tuple(sorted(e)) for e in to_nx(g).subgraph(s).edges} == G.induced_subgraph(g, s).edges


def test_random_builder_is_connected_and_seeded():
    a = random_corpus(50, 4, 12, seed=1)
    b = random_corpus(50, 4, 12, seed=1)
    assert a == b
    assert all(G.is_connected(g) and 4 <= g.order <= 12 for g in a)
