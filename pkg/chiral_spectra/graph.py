"""Finite simple graphs with their symmetric-arc structure.

Arcs are enumerated edge by edge in input order, (u, v) before (v, u), so arc
``2i`` and ``2i + 1`` come from edge ``i`` and are each other's reversal.
"""

import logging
import re
from typing import Iterable

import networkx as nx
import numpy as np
from numpy.typing import NDArray

from chiral_spectra.errors import GraphFormatError
from chiral_spectra.models import ArcSet, Graph, GraphInvariants


_INDEX = re.compile(r"[0-9]+")


def parse_edge_list(text: str | Iterable[str]) -> Graph:
    lines = text.splitlines() if isinstance(text, str) else text
    edges: list[tuple[int, int]] = []
    seen: set[frozenset[int]] = set()
    for number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2 or not all(_INDEX.fullmatch(f) for f in fields):
            raise GraphFormatError(f"expected two vertex indices, got {line!r}", number)
        u, v = int(fields[0]), int(fields[1])
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", number)
        key = frozenset((u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})", number)
        seen.add(key)
        edges.append((u, v))
    if not edges:
        raise GraphFormatError("edge list is empty")
    vertex_count = 1 + max(max(e) for e in edges)
    logging.debug("Parsed edge list: %d vertices, %d edges", vertex_count, len(edges))
    return Graph(vertex_count=vertex_count, edges=tuple(edges))


def format_edge_list(g: Graph) -> str:
    return "".join(f"{u} {v}\n" for u, v in g.edges)


def arc_structure(g: Graph) -> ArcSet:
    arcs: list[tuple[int, int]] = []
    for u, v in g.edges:
        arcs.append((u, v))
        arcs.append((v, u))
    return ArcSet(arcs=tuple(arcs), reversal=tuple(e ^ 1 for e in range(len(arcs))))


def incidence_matrices(g: Graph) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    """Return ``(K_in, K_out)``; column ``e`` of K_in marks t(e), of K_out marks o(e)."""
    arc_set = arc_structure(g)
    k_in = np.zeros((g.vertex_count, len(arc_set.arcs)), dtype=np.int64)
    k_out = np.zeros_like(k_in)
    for e, (origin, terminus) in enumerate(arc_set.arcs):
        k_in[terminus, e] = 1
        k_out[origin, e] = 1
    return k_in, k_out


def reversal_matrix(arc_set: ArcSet) -> NDArray[np.int64]:
    """Permutation matrix J with (Jψ)(e) = ψ(ē)."""
    n = len(arc_set.arcs)
    j = np.zeros((n, n), dtype=np.int64)
    j[np.arange(n), list(arc_set.reversal)] = 1
    return j


def adjacency(g: Graph) -> NDArray[np.int64]:
    m = np.zeros((g.vertex_count, g.vertex_count), dtype=np.int64)
    for u, v in g.edges:
        m[u, v] = 1
        m[v, u] = 1
    return m


def to_networkx(g: Graph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(g.vertex_count))
    graph.add_edges_from(g.edges)
    return graph


def from_networkx(graph: nx.Graph) -> Graph:
    graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    return Graph(
        vertex_count=graph.number_of_nodes(),
        edges=tuple((int(u), int(v)) for u, v in graph.edges()),
    )


def graph_invariants(g: Graph) -> GraphInvariants:
    graph = to_networkx(g)
    degrees = {d for _, d in graph.degree()}
    connected = g.vertex_count > 0 and nx.is_connected(graph)
    bipartite = nx.is_bipartite(graph)
    bipartition = None
    if bipartite:
        colouring = nx.bipartite.color(graph)
        bipartition = tuple(colouring[v] for v in range(g.vertex_count))
    components = nx.number_connected_components(graph) if g.vertex_count else 0
    invariants = GraphInvariants(
        vertex_count=g.vertex_count,
        edge_count=g.edge_count,
        degree=degrees.pop() if len(degrees) == 1 else None,
        connected=connected,
        bipartite=bipartite,
        betti1=g.edge_count - g.vertex_count + components,
        bipartition=bipartition,
    )
    if invariants.degree is None:
        logging.debug("Graph with %d vertices is not regular", g.vertex_count)
    if not connected:
        logging.debug("Graph with %d vertices is disconnected", g.vertex_count)
    return invariants


BUILTIN_GRAPHS = ("k4", "k5", "k33", "petersen", "c3", "c4", "edge")


def builtin_graph(name: str) -> Graph:
    match name.lower():
        case "k4":
            graph = nx.complete_graph(4)
        case "k5":
            graph = nx.complete_graph(5)
        case "k33":
            graph = nx.complete_bipartite_graph(3, 3)
        case "petersen":
            graph = nx.petersen_graph()
        case "edge":
            graph = nx.path_graph(2)
        case cycle if re.fullmatch(r"c[0-9]+", cycle) and int(cycle[1:]) >= 3:
            graph = nx.cycle_graph(int(cycle[1:]))
        case _:
            raise ValueError(
                f"Unknown builtin graph: {name}. Allowed: {list(BUILTIN_GRAPHS)} or cN with N >= 3"
            )
    return from_networkx(graph)


def random_regular_graph(k: int, n: int, seed: int, attempts: int = 100) -> Graph:
    """Connected random k-regular graph on n vertices, reproducible from ``seed``."""
    for attempt in range(attempts):
        graph = nx.random_regular_graph(k, n, seed=seed * attempts + attempt)
        if nx.is_connected(graph):
            return from_networkx(graph)
    raise ValueError(f"No connected {k}-regular graph on {n} vertices after {attempts} draws")
