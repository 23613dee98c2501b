"""Ihara zeta function of a regular graph.

1/ζ_G(u) = det(I - u·U⁺) with U⁺ = B' - J the non-backtracking matrix, checked
against the three-term Bass form, closed non-backtracking walk counts and the
Euler product over prime cycle classes.
"""

import logging
from collections import Counter
from typing import NamedTuple

import numpy as np
import numpy.polynomial.polynomial as P
import scipy.linalg
from numpy.typing import NDArray

from chiral_spectra import graph, linalg, spectral, walks
from chiral_spectra.errors import SizeCapError, VerificationError
from chiral_spectra.models import ArcSet, Graph, NBWalkCounts, ZetaPolynomial


ZETA_ARC_CAP = 64
WALK_ARC_CAP = 30
WALK_LENGTH_CAP = 12
EULER_ARC_CAP = 16
EULER_LENGTH_CAP = 8
ROUNDING_TOL = 1e-6
ROOT_CLUSTER_TOL = 1e-2


class PrimeCycleProduct(NamedTuple):
    series: tuple[int, ...]
    class_counts: dict[int, int]


class LeadingCheck(NamedTuple):
    leading: float
    determinant: float
    holds: bool


def _require_regular(g: Graph, minimum_degree: int = 2) -> int:
    invariants = graph.graph_invariants(g)
    invariants.require_connected()
    return invariants.require_regular(minimum_degree)


def _successors(arc_set: ArcSet) -> list[list[int]]:
    """Arcs that may follow each arc without backtracking."""
    by_origin: dict[int, list[int]] = {}
    for e, (origin, _) in enumerate(arc_set.arcs):
        by_origin.setdefault(origin, []).append(e)
    return [
        [f for f in by_origin.get(arc_set.terminus(e), []) if f != arc_set.reversal[e]]
        for e in range(len(arc_set.arcs))
    ]


def non_backtracking_matrix(g: Graph) -> NDArray[np.int64]:
    """U⁺ with (U⁺)_{e,e'} = 1 iff t(e') = o(e) and e' != ē."""
    arc_set = graph.arc_structure(g)
    n = len(arc_set.arcs)
    matrix = np.zeros((n, n), dtype=np.int64)
    for e, successors in enumerate(_successors(arc_set)):
        matrix[successors, e] = 1
    return matrix


def _rounded(coefficients: NDArray) -> NDArray[np.float64]:
    nearest = np.round(coefficients)
    scale = max(1.0, float(np.max(np.abs(coefficients))))
    if np.max(np.abs(coefficients - nearest)) <= ROUNDING_TOL * scale:
        return nearest
    return coefficients


def zeta_reciprocal(g: Graph) -> ZetaPolynomial:
    _require_regular(g)
    arcs = 2 * g.edge_count
    if arcs > ZETA_ARC_CAP:
        raise SizeCapError(f"Graph has {arcs} arcs, zeta determinant cap is {ZETA_ARC_CAP}")
    coefficients = linalg.integer_char_poly(non_backtracking_matrix(g))
    return ZetaPolynomial(coefficients=tuple(float(c) for c in coefficients))


def bass_form(g: Graph) -> ZetaPolynomial:
    """(1 - u²)^(|E|-|V|) · Π_μ (1 - μu + (k-1)u²) over the adjacency spectrum."""
    k = _require_regular(g)
    mu = linalg.eig_hermitian(graph.adjacency(g)).eigenvalues.real
    product = np.ones(1)
    for value in mu:
        product = P.polymul(product, [1.0, -value, k - 1.0])
    excess = g.edge_count - g.vertex_count
    product = P.polymul(product, P.polypow([1.0, 0.0, -1.0], excess))
    return ZetaPolynomial(coefficients=tuple(float(c) for c in _rounded(product)))


def coefficient_residue(first: ZetaPolynomial, second: ZetaPolynomial) -> float:
    """Largest coefficient difference relative to the largest coefficient."""
    size = max(first.degree, second.degree) + 1
    lhs = np.zeros(size)
    rhs = np.zeros(size)
    lhs[: first.degree + 1] = first.coefficients
    rhs[: second.degree + 1] = second.coefficients
    scale = max(1.0, float(np.max(np.abs(lhs))))
    return float(np.max(np.abs(lhs - rhs))) / scale


def _closed_walks(g: Graph, length: int) -> list[tuple[int, ...]]:
    """Closed walks (e₁, …, e_m), m <= length, reduced cyclically."""
    arc_set = graph.arc_structure(g)
    successors = _successors(arc_set)
    walks_found: list[tuple[int, ...]] = []

    def extend(path: list[int]) -> None:
        if path[0] in successors[path[-1]]:
            walks_found.append(tuple(path))
        if len(path) == length:
            return
        for f in successors[path[-1]]:
            path.append(f)
            extend(path)
            path.pop()

    for start in range(len(arc_set.arcs)):
        extend([start])
    return walks_found


def nb_walk_counts(g: Graph, length: int) -> NBWalkCounts:
    """N_1..N_L by matrix traces and by depth-first enumeration; both must agree."""
    if length > WALK_LENGTH_CAP:
        raise SizeCapError(f"Walk length {length} exceeds cap {WALK_LENGTH_CAP}")
    if 2 * g.edge_count > WALK_ARC_CAP:
        raise SizeCapError(f"Graph has {2 * g.edge_count} arcs, walk enumeration cap is {WALK_ARC_CAP}")
    matrix = non_backtracking_matrix(g).astype(object)
    power = np.eye(matrix.shape[0], dtype=int).astype(object)
    traces = []
    for _ in range(length):
        power = power.dot(matrix)
        traces.append(int(np.trace(power)))

    enumerated = Counter(len(w) for w in _closed_walks(g, length))
    counts = [enumerated.get(m, 0) for m in range(1, length + 1)]
    if counts != traces:
        raise VerificationError(
            f"Walk counts disagree: traces {traces}, enumeration {counts}"
        )
    logging.debug("Non-backtracking walk counts up to %d: %s", length, counts)
    return NBWalkCounts(counts=tuple(counts))


def _minimal_period(walk: tuple[int, ...]) -> int:
    m = len(walk)
    for period in range(1, m + 1):
        if m % period == 0 and walk == walk[period:] + walk[:period]:
            return period
    return m


def _canonical_rotation(walk: tuple[int, ...]) -> tuple[int, ...]:
    return min(walk[i:] + walk[:i] for i in range(len(walk)))


def prime_cycle_product(g: Graph, length: int) -> PrimeCycleProduct:
    """Π over prime classes [C] of (1 - u^|C|)⁻¹, modulo u^(L+1)."""
    if length > EULER_LENGTH_CAP:
        raise SizeCapError(f"Euler product length {length} exceeds cap {EULER_LENGTH_CAP}")
    if 2 * g.edge_count > EULER_ARC_CAP:
        raise SizeCapError(f"Graph has {2 * g.edge_count} arcs, Euler product cap is {EULER_ARC_CAP}")
    classes = {
        _canonical_rotation(walk)
        for walk in _closed_walks(g, length)
        if _minimal_period(walk) == len(walk)
    }
    class_counts = Counter(len(c) for c in classes)
    series = [1] + [0] * length
    for size, count in sorted(class_counts.items()):
        for _ in range(count):
            # multiply by 1 + u^size + u^(2·size) + …
            for degree in range(size, length + 1):
                series[degree] += series[degree - size]
    return PrimeCycleProduct(series=tuple(series), class_counts=dict(sorted(class_counts.items())))


def log_series_holds(zeta: ZetaPolynomial, counts: NBWalkCounts) -> bool:
    """-log(1/ζ) has u^m coefficient N_m / m."""
    order = len(counts.counts)
    log = -linalg.series_log(zeta.coefficients, order)
    return all(
        abs(log[m] * m - counts.counts[m - 1]) <= ROUNDING_TOL * max(1, counts.counts[m - 1])
        for m in range(1, order + 1)
    )


def euler_product_holds(zeta: ZetaPolynomial, product: PrimeCycleProduct) -> bool:
    order = len(product.series) - 1
    inverse = linalg.series_inverse(np.asarray(zeta.coefficients), order)
    return bool(
        np.all(np.abs(inverse - np.asarray(product.series)) <= ROUNDING_TOL * np.maximum(1, np.abs(product.series)))
    )


def zeta_leading_check(g: Graph, zeta: ZetaPolynomial | None = None) -> LeadingCheck:
    """|top coefficient of 1/ζ| = |det U⁺|."""
    zeta = zeta_reciprocal(g) if zeta is None else zeta
    determinant = float(scipy.linalg.det(non_backtracking_matrix(g).astype(np.float64)))
    leading = zeta.coefficients[-1]
    holds = abs(abs(leading) - abs(determinant)) <= ROUNDING_TOL * max(1.0, abs(leading))
    return LeadingCheck(leading=leading, determinant=determinant, holds=holds)


def zeta_roots_in_spectrum(g: Graph, zeta: ZetaPolynomial | None = None) -> float:
    """Largest distance from 1/u₀, u₀ a root of 1/ζ, to the predicted support of σ(U⁺).

    Multiple roots are located by the centroid of their numerical cluster.
    """
    zeta = zeta_reciprocal(g) if zeta is None else zeta
    atoms = spectral.predicted_spectrum(walks.grover_positive_support(g))
    support = np.array([atom.value for atom in atoms])
    roots = P.polyroots(np.asarray(zeta.coefficients))
    worst = 0.0
    for cluster in linalg.cluster_values(roots, ROOT_CLUSTER_TOL):
        worst = max(worst, float(np.min(np.abs(support - 1 / cluster.center))))
    return worst
