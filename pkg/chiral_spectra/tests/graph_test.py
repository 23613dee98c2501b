import numpy as np
import pytest

from . import config
from .. import graph
from ..errors import GraphFormatError


def test_parse_edge_list():
    g = graph.parse_edge_list("# triangle\n0 1\n1 2\n\n2 0\n")
    assert g.vertex_count == 3
    assert g.edges == ((0, 1), (1, 2), (2, 0))
    assert graph.parse_edge_list(graph.format_edge_list(g)) == g


@pytest.mark.parametrize(
    "text, line",
    [
        ("0 1\n1 1\n", 2),
        ("0 1\n1 0\n", 2),
        ("0 1 2\n", 1),
        ("0 -1\n", 1),
        ("a b\n", 1),
    ],
)
def test_parse_edge_list_rejects_malformed_lines(text, line):
    with pytest.raises(GraphFormatError) as e:
        graph.parse_edge_list(text)
    assert e.value.line == line


def test_parse_edge_list_rejects_empty_input():
    with pytest.raises(GraphFormatError):
        graph.parse_edge_list("# nothing here\n")


def test_arc_structure_pairs_reversals():
    arc_set = graph.arc_structure(graph.builtin_graph("c3"))
    assert len(arc_set.arcs) == 6
    for e, (origin, terminus) in enumerate(arc_set.arcs):
        assert arc_set.arcs[arc_set.reversal[e]] == (terminus, origin)
        assert arc_set.reversal[arc_set.reversal[e]] == e


@pytest.mark.parametrize("name", ["edge", "c3", "c4", "k4", "k33", "petersen"])
def test_incidence_identities(name):
    g = graph.builtin_graph(name)
    k_in, k_out = graph.incidence_matrices(g)
    reversal = graph.reversal_matrix(graph.arc_structure(g))
    assert np.array_equal(k_out, k_in @ reversal)
    assert np.array_equal(graph.adjacency(g), k_in @ k_out.T)
    # every arc has exactly one terminus and one origin
    assert np.all(k_in.sum(axis=0) == 1)
    assert np.all(k_out.sum(axis=0) == 1)


@pytest.mark.parametrize(
    "name, vertices, edges, degree, bipartite, betti1",
    [
        ("k4", 4, 6, 3, False, 3),
        ("k5", 5, 10, 4, False, 6),
        ("k33", 6, 9, 3, True, 4),
        ("petersen", 10, 15, 3, False, 6),
        ("c3", 3, 3, 2, False, 1),
        ("c4", 4, 4, 2, True, 1),
        ("edge", 2, 1, 1, True, 0),
    ],
)
def test_builtin_graph_invariants(name, vertices, edges, degree, bipartite, betti1):
    invariants = graph.graph_invariants(graph.builtin_graph(name))
    assert invariants.vertex_count == vertices
    assert invariants.edge_count == edges
    assert invariants.degree == degree
    assert invariants.connected
    assert invariants.bipartite == bipartite
    assert invariants.betti1 == betti1


def test_bipartition_is_a_proper_colouring():
    g = graph.builtin_graph("k33")
    colouring = graph.graph_invariants(g).bipartition
    assert colouring is not None
    assert all(colouring[u] != colouring[v] for u, v in g.edges)


def test_irregular_and_disconnected_graphs():
    path = graph.parse_edge_list("0 1\n1 2\n")
    invariants = graph.graph_invariants(path)
    assert invariants.degree is None
    with pytest.raises(ValueError):
        invariants.require_regular()

    two_edges = graph.parse_edge_list("0 1\n2 3\n")
    invariants = graph.graph_invariants(two_edges)
    assert not invariants.connected
    assert invariants.betti1 == 0
    with pytest.raises(ValueError):
        invariants.require_connected()


def test_builtin_graph_rejects_unknown_names():
    assert graph.builtin_graph("C7").edge_count == 7
    with pytest.raises(ValueError):
        graph.builtin_graph("c2")
    with pytest.raises(ValueError):
        graph.builtin_graph("dodecahedron")


def test_random_regular_graph_is_reproducible():
    first = graph.random_regular_graph(3, 12, seed=config.TEST_SEED)
    second = graph.random_regular_graph(3, 12, seed=config.TEST_SEED)
    assert first == second
    invariants = graph.graph_invariants(first)
    assert invariants.degree == 3
    assert invariants.connected


def test_networkx_round_trip_keeps_structure():
    g = graph.builtin_graph("petersen")
    back = graph.from_networkx(graph.to_networkx(g))
    assert back.vertex_count == g.vertex_count
    assert {frozenset(e) for e in back.edges} == {frozenset(e) for e in g.edges}
