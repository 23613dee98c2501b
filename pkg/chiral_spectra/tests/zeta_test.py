import numpy as np
import pytest

from .. import graph, linalg, walks, zeta
from ..errors import SizeCapError
from ..models import ZetaPolynomial


def test_non_backtracking_matrix():
    matrix = zeta.non_backtracking_matrix(graph.builtin_graph("k4"))
    assert matrix.shape == (12, 12)
    assert np.all(matrix.sum(axis=0) == 2)
    assert np.all(matrix.sum(axis=1) == 2)


def test_triangle_zeta():
    # C3 has two prime cycles of length three: 1/ζ = (1 - u³)²
    g = graph.builtin_graph("c3")
    assert zeta.zeta_reciprocal(g).coefficients == (1, 0, 0, -2, 0, 0, 1)
    assert zeta.coefficient_residue(zeta.zeta_reciprocal(g), zeta.bass_form(g)) <= 1e-12


@pytest.mark.parametrize("name", ["c3", "c4", "k4", "k5", "k33", "petersen"])
def test_zeta_matches_bass_form(name):
    g = graph.builtin_graph(name)
    reciprocal = zeta.zeta_reciprocal(g)
    assert reciprocal.degree == 2 * g.edge_count
    assert zeta.coefficient_residue(reciprocal, zeta.bass_form(g)) <= 1e-9
    assert zeta.zeta_leading_check(g, reciprocal).holds


def test_k4_zeta_factorisation():
    # (1 - u²)² (1 - u)(1 - 2u)(1 + u + 2u²)³
    factors = [
        np.polynomial.polynomial.polypow([1, 0, -1], 2),
        [1, -1],
        [1, -2],
        np.polynomial.polynomial.polypow([1, 1, 2], 3),
    ]
    expected = np.array([1.0])
    for factor in factors:
        expected = np.polynomial.polynomial.polymul(expected, factor)
    reciprocal = zeta.zeta_reciprocal(graph.builtin_graph("k4"))
    assert np.allclose(reciprocal.coefficients, expected)


def test_nb_walk_counts():
    assert zeta.nb_walk_counts(graph.builtin_graph("c3"), 6).counts == (0, 0, 6, 0, 0, 6)
    counts = zeta.nb_walk_counts(graph.builtin_graph("k4"), 4)
    assert counts.counts[:3] == (0, 0, 24)


@pytest.mark.parametrize("name", ["c3", "k4", "k33"])
def test_log_series_identity(name):
    g = graph.builtin_graph(name)
    assert zeta.log_series_holds(zeta.zeta_reciprocal(g), zeta.nb_walk_counts(g, 8))


def test_log_series_identity_detects_wrong_counts():
    g = graph.builtin_graph("c3")
    counts = zeta.nb_walk_counts(g, 6).model_copy(update={"counts": (0, 0, 3, 0, 0, 6)})
    assert not zeta.log_series_holds(zeta.zeta_reciprocal(g), counts)


def test_prime_cycle_product():
    triangle = zeta.prime_cycle_product(graph.builtin_graph("c3"), 6)
    assert triangle.class_counts == {3: 2}
    assert triangle.series == (1, 0, 0, 2, 0, 0, 3)

    g = graph.builtin_graph("k4")
    product = zeta.prime_cycle_product(g, 6)
    assert product.class_counts[3] == 8
    assert zeta.euler_product_holds(zeta.zeta_reciprocal(g), product)


def test_caps_raise():
    with pytest.raises(SizeCapError):
        zeta.nb_walk_counts(graph.builtin_graph("c3"), zeta.WALK_LENGTH_CAP + 1)
    with pytest.raises(SizeCapError):
        zeta.prime_cycle_product(graph.builtin_graph("petersen"), 3)
    with pytest.raises(SizeCapError):
        zeta.zeta_reciprocal(graph.random_regular_graph(3, 24, seed=1))


def test_zeta_needs_regular_graph():
    with pytest.raises(ValueError):
        zeta.zeta_reciprocal(graph.parse_edge_list("0 1\n1 2\n2 0\n2 3\n"))
    with pytest.raises(ValueError):
        ZetaPolynomial(coefficients=(2.0, 1.0))


def test_zeta_roots_lie_in_predicted_spectrum():
    assert zeta.zeta_roots_in_spectrum(graph.builtin_graph("k4")) <= 1e-7


def test_float_char_poly_matches_exact_on_grover_support():
    u = walks.grover_positive_support(graph.builtin_graph("k4")).U
    exact = linalg.integer_char_poly(np.rint(u.real).astype(np.int64))
    assert np.allclose(linalg.char_poly(u), exact, atol=1e-6)
