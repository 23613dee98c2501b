"""Dense complex linear-algebra kernel.

The general eigensolver only supplies the support of a spectrum; multiplicities
that matter for non-normal operators are geometric and come from
:func:`kernel_dimension`.
"""

import logging
from typing import NamedTuple

import numpy as np
import numpy.polynomial.polynomial as P
import scipy.linalg
from numpy.typing import ArrayLike, NDArray
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.optimize import linear_sum_assignment

from chiral_spectra import config
from chiral_spectra.errors import ClusteringAmbiguityError, EigensolverError, SizeCapError


CHAR_POLY_CAP = 64
HERMITIAN_TOL = 1e-10


class EigenResult(NamedTuple):
    eigenvalues: NDArray[np.complex128]
    hermitian_basis: NDArray[np.complex128] | None = None


class Cluster(NamedTuple):
    center: complex
    count: int


def as_matrix(m: ArrayLike) -> NDArray[np.complex128]:
    matrix = np.asarray(m, dtype=np.complex128)
    if matrix.ndim != 2:
        raise ValueError(f"Expected a 2-d matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("Matrix has non-finite entries")
    return matrix


def _as_square(m: ArrayLike) -> NDArray[np.complex128]:
    matrix = as_matrix(m)
    if matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}")
    return matrix


def operator_norm(m: ArrayLike) -> float:
    matrix = as_matrix(m)
    if matrix.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(matrix)[0])


def eig_general(m: ArrayLike) -> EigenResult:
    matrix = _as_square(m)
    n = matrix.shape[0]
    if n > config.EIG_CAP:
        raise SizeCapError(f"Matrix dimension {n} exceeds eigensolver cap {config.EIG_CAP}")
    try:
        values = scipy.linalg.eigvals(matrix, check_finite=False)
    except scipy.linalg.LinAlgError as e:
        raise EigensolverError(f"Eigenvalue iteration did not converge: {e}") from e
    if values.shape[0] != n or not np.all(np.isfinite(values)):
        raise EigensolverError(f"Eigensolver returned {values.shape[0]} finite values for n={n}")
    logging.debug("eig_general: n=%d", n)
    return EigenResult(values.astype(np.complex128))


def eig_hermitian(m: ArrayLike) -> EigenResult:
    matrix = _as_square(m)
    scale = operator_norm(matrix)
    if operator_norm(matrix - matrix.conj().T) > HERMITIAN_TOL * max(scale, 1e-300):
        raise ValueError("Matrix is not Hermitian")
    values, basis = scipy.linalg.eigh((matrix + matrix.conj().T) / 2)
    return EigenResult(values.astype(np.complex128), basis)


def _threshold(singular_values: NDArray[np.float64], tol: float) -> float:
    sigma_max = float(singular_values[0]) if singular_values.size else 0.0
    return tol * max(sigma_max, 1.0)


def kernel_dimension(m: ArrayLike, tol: float | None = None) -> int:
    """Number of singular values below ``tol * max(σ_max, 1)``."""
    tol = config.RANK_TOL if tol is None else tol
    s = scipy.linalg.svdvals(as_matrix(m))
    return int(np.count_nonzero(s < _threshold(s, tol)))


def numerical_rank(m: ArrayLike, tol: float | None = None) -> int:
    tol = config.RANK_TOL if tol is None else tol
    s = scipy.linalg.svdvals(as_matrix(m))
    return int(np.count_nonzero(s >= _threshold(s, tol)))


def smallest_singular_value(m: ArrayLike) -> float:
    s = scipy.linalg.svdvals(as_matrix(m))
    return float(s[-1]) if s.size else 0.0


def char_poly(m: ArrayLike) -> NDArray[np.complex128]:
    """Coefficients of det(I - u·m), ascending in u (Faddeev–LeVerrier)."""
    matrix = _as_square(m)
    n = matrix.shape[0]
    if n > CHAR_POLY_CAP:
        raise SizeCapError(f"Matrix dimension {n} exceeds characteristic polynomial cap {CHAR_POLY_CAP}")
    coefficients = np.zeros(n + 1, dtype=np.complex128)
    coefficients[0] = 1.0
    identity = np.eye(n, dtype=np.complex128)
    adjugate_step = np.zeros_like(matrix)
    for k in range(1, n + 1):
        adjugate_step = matrix @ adjugate_step + coefficients[k - 1] * identity
        coefficients[k] = -np.trace(matrix @ adjugate_step) / k
        if not np.isfinite(coefficients[k]):
            raise OverflowError(f"Characteristic polynomial overflowed at degree {k} (n={n})")
    return coefficients


def matched_distance(first: ArrayLike, second: ArrayLike) -> float:
    """Largest distance under the optimal one-to-one matching of two multisets."""
    x = np.asarray(first, dtype=np.complex128).ravel()
    y = np.asarray(second, dtype=np.complex128).ravel()
    if x.size != y.size:
        raise ValueError(f"Multisets differ in size: {x.size} != {y.size}")
    if not x.size:
        return 0.0
    distances = np.abs(x[:, None] - y[None, :])
    rows, cols = linear_sum_assignment(distances)
    return float(np.max(distances[rows, cols]))


def integer_char_poly(m: ArrayLike) -> list[int]:
    """det(I - u·m) for an integer matrix, exact in Python integers."""
    matrix = np.asarray(m)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {matrix.shape}")
    if not np.issubdtype(matrix.dtype, np.integer):
        raise ValueError(f"Expected an integer matrix, got dtype {matrix.dtype}")
    n = matrix.shape[0]
    if n > CHAR_POLY_CAP:
        raise SizeCapError(f"Matrix dimension {n} exceeds characteristic polynomial cap {CHAR_POLY_CAP}")
    exact = matrix.astype(object)
    identity = np.eye(n, dtype=int).astype(object)
    coefficients = [1]
    adjugate_step = np.zeros((n, n), dtype=int).astype(object)
    for k in range(1, n + 1):
        adjugate_step = exact.dot(adjugate_step) + coefficients[-1] * identity
        trace = int(np.trace(exact.dot(adjugate_step)))
        if trace % k:
            raise ArithmeticError(f"Non-integral characteristic coefficient at degree {k}")
        coefficients.append(-trace // k)
    return coefficients


def series_inverse(coefficients: ArrayLike, order: int) -> NDArray:
    """Power-series reciprocal of f modulo u^(order + 1); needs f(0) != 0."""
    f = np.asarray(coefficients)
    if f.size == 0 or f[0] == 0:
        raise ValueError("Series with zero constant term has no reciprocal")
    f = np.concatenate([f, np.zeros(max(0, order + 1 - f.size), dtype=f.dtype)])[: order + 1]
    inverse = np.zeros(order + 1, dtype=np.result_type(f, float))
    inverse[0] = 1 / f[0]
    for k in range(1, order + 1):
        inverse[k] = -np.dot(f[1 : k + 1], inverse[k - 1 :: -1][:k]) / f[0]
    return inverse


def series_log(coefficients: ArrayLike, order: int) -> NDArray:
    """log f modulo u^(order + 1) for a series with f(0) = 1."""
    f = np.asarray(coefficients, dtype=np.float64)
    if f.size == 0 or abs(f[0] - 1) > 1e-12:
        raise ValueError("Series logarithm needs constant term 1")
    quotient = P.polymul(P.polyder(f), series_inverse(f, order))[:order]
    log = np.zeros(order + 1)
    integral = P.polyint(quotient)[: order + 1]
    log[: integral.size] = integral
    return log


def cluster_values(values: ArrayLike, tol: float | None = None) -> list[Cluster]:
    """Single-linkage clusters of complex values at ``tol * max(1, max|v|)``.

    Clusters are returned sorted by (real, imaginary) part of their mean.
    """
    tol = config.TOL if tol is None else tol
    points = np.asarray(values, dtype=np.complex128).ravel()
    if points.size == 0:
        return []
    scale = max(1.0, float(np.max(np.abs(points))))
    width = tol * scale
    if points.size == 1:
        labels = np.ones(1, dtype=int)
    else:
        coords = np.column_stack([points.real, points.imag])
        labels = fcluster(linkage(coords, method="single"), t=width, criterion="distance")
    clusters = [
        Cluster(complex(points[labels == label].mean()), int(np.count_nonzero(labels == label)))
        for label in np.unique(labels)
    ]
    clusters.sort(key=lambda c: (c.center.real, c.center.imag))
    centers = np.array([c.center for c in clusters])
    if centers.size > 1:
        gaps = np.abs(centers[:, None] - centers[None, :])
        np.fill_diagonal(gaps, np.inf)
        if np.min(gaps) < 10 * width:
            i, j = np.unravel_index(np.argmin(gaps), gaps.shape)
            raise ClusteringAmbiguityError(
                f"Eigenvalue clusters {centers[i]:.12g} and {centers[j]:.12g} are closer than "
                f"10x the clustering width {width:.3g}"
            )
    logging.debug("Clustered %d values into %d clusters", points.size, len(clusters))
    return clusters
