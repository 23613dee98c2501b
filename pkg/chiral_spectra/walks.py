"""Model builders producing chiral pairs, and the momentum-space treatment of
the gain/loss (MKO) walk.

Ring operators act on ℂ^N ⊗ ℂ² laid out component-major: index ``c * N + x``
for component ``c`` at site ``x``.
"""

import cmath
import logging
import math
from typing import NamedTuple, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.spatial import cKDTree

from chiral_spectra import chiral, config, graph, linalg
from chiral_spectra.errors import VerificationError
from chiral_spectra.models import (
    ChiralPair,
    CorrelatedParams,
    Graph,
    MkoParams,
    MkoRegime,
    MkoSpectrumSet,
)


SUPPORT_TOL = 1e-12
CONTAINMENT_TOL = 1e-6
EDGE_TOL = 1e-12
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)


class MkoSample(NamedTuple):
    xi: NDArray[np.float64]
    eigenvalues: NDArray[np.complex128]  # shape (grid, 2)


def _regular_connected(g: Graph, minimum_degree: int) -> int:
    invariants = graph.graph_invariants(g)
    invariants.require_connected()
    return invariants.require_regular(minimum_degree)


def _arc_operators(g: Graph, k: int) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """Return (J, d) with d = K_in / √k."""
    k_in, _ = graph.incidence_matrices(g)
    reversal = graph.reversal_matrix(graph.arc_structure(g)).astype(np.complex128)
    return reversal, k_in.astype(np.complex128) / math.sqrt(k)


def grover_evolution(g: Graph) -> NDArray[np.complex128]:
    """Unitary Grover walk (Uψ)(e) = -ψ(ē) + (2/k) Σ_{t(e')=o(e)} ψ(e')."""
    k = _regular_connected(g, 1)
    reversal, d = _arc_operators(g, k)
    return reversal @ (2 * d.conj().T @ d - np.eye(reversal.shape[0]))


def grover_positive_support(g: Graph) -> ChiralPair:
    """Non-backtracking matrix B' - J as the pair (J, K_in/√k, k-1, -1)."""
    k = _regular_connected(g, 3)
    reversal, d = _arc_operators(g, k)
    pair = chiral.build_chiral_pair(reversal, d, k - 1, -1, label="grover")
    support = (grover_evolution(g).real > SUPPORT_TOL).astype(np.float64)
    if np.max(np.abs(pair.U - support)) > SUPPORT_TOL:
        raise VerificationError("Pair evolution differs from the positive support of the Grover walk")
    return pair


def correlated_walk(g: Graph, p: float) -> ChiralPair:
    """Correlated random walk: backtrack with probability p, else uniform onward."""
    k = _regular_connected(g, 2)
    params = CorrelatedParams(p=p, k=k)
    reversal, d = _arc_operators(g, k)
    pair = chiral.build_chiral_pair(reversal, d, params.a, params.b, label="correlated")
    logging.debug("Correlated walk p=%r on k=%d graph: b=%r", p, k, params.b)
    return pair


def correlated_containment(
    params: CorrelatedParams, eigenvalues: ArrayLike, tol: float | None = None
) -> bool:
    """σ(P) ⊂ [-1,-r] ∪ [r,1], plus the circle |z| = √r when p < 1/k."""
    tol = config.TOL if tol is None else tol
    z = np.asarray(eigenvalues, dtype=np.complex128)
    on_line = (np.abs(z.imag) <= tol) & (np.abs(z.real) >= params.r - tol) & (np.abs(z.real) <= 1 + tol)
    if params.p * params.k < 1:
        on_line |= np.abs(np.abs(z) - math.sqrt(params.r)) <= tol
    return bool(np.all(on_line))


def _coin(theta: float) -> NDArray[np.complex128]:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)


def _gain(mp: MkoParams, sign: int = 1) -> NDArray[np.complex128]:
    return np.diag([math.exp(sign * mp.gamma), math.exp(-sign * mp.gamma)]).astype(np.complex128)


def _phase(mp: MkoParams) -> NDArray[np.complex128]:
    return np.diag([cmath.exp(1j * mp.phi), cmath.exp(-1j * mp.phi)])


def _momentum_shift(xi: float) -> NDArray[np.complex128]:
    return np.diag([cmath.exp(1j * xi), cmath.exp(-1j * xi)])


def mko_momentum_matrix(mp: MkoParams, xi: float) -> NDArray[np.complex128]:
    """Fourier symbol of U_γ = S̃ GΦC̃(θ₂) S̃ G⁻¹ΦC̃(θ₁) at momentum ξ."""
    shift = _momentum_shift(xi)
    return (
        shift @ _gain(mp) @ _phase(mp) @ _coin(mp.theta2)
        @ shift @ _gain(mp, -1) @ _phase(mp) @ _coin(mp.theta1)
    )


def mko_coin(mp: MkoParams) -> NDArray[np.complex128]:
    """C_mko = σ₂ GΦ C̃(θ₂) G⁻¹Φ: Hermitian with determinant -1."""
    return PAULI_Y @ _gain(mp) @ _phase(mp) @ _coin(mp.theta2) @ _gain(mp, -1) @ _phase(mp)


def mko_equivalence_factors(
    mp: MkoParams, xi: float
) -> tuple[NDArray[np.complex128], NDArray[np.complex128]]:
    """(S_mko(ξ), C_mko) with S_mko(ξ) C_mko isospectral to the momentum matrix."""
    shift = _momentum_shift(xi)
    s_mko = shift @ _coin(mp.theta1) @ shift @ PAULI_Y
    return s_mko, mko_coin(mp)


def _branch(x: float, sign: int) -> float:
    return x + sign * math.sqrt(x * x - 1)


def _merge(intervals: list[tuple[float, float]]) -> list[tuple[float, float]]:
    merged: list[tuple[float, float]] = []
    for lo, hi in sorted(intervals):
        if merged and lo <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def mko_closed_form(mp: MkoParams) -> MkoSpectrumSet:
    """Spectrum of U_γ from clipping [m_γ, M_γ] against [-1, 1].

    cos ξ values inside [-1, 1] give the unit-circle arc, the excess below -1
    or above 1 is mapped to the real line by f±(x) = x ± √(x² - 1).
    """
    if math.sin(mp.theta1) * math.sin(mp.theta2) <= 0:
        raise ValueError(
            f"Closed form needs sin θ1 · sin θ2 > 0, got θ1={mp.theta1}, θ2={mp.theta2}"
        )
    m, big_m = mp.m_gamma, mp.M_gamma
    lo, hi = max(m, -1.0), min(big_m, 1.0)
    # rounding can push m or M a hair past ±1
    circle = (lo, max(lo, hi)) if lo <= hi + EDGE_TOL else None

    real: list[tuple[float, float]] = []
    if m < -1 - EDGE_TOL:
        edge = min(big_m, -1.0)
        # f₋ increases and f₊ decreases on (-∞, -1]
        real.append((_branch(m, -1), _branch(edge, -1)))
        real.append((_branch(edge, 1), _branch(m, 1)))
    if big_m > 1 + EDGE_TOL:
        edge = max(m, 1.0)
        real.append((_branch(big_m, -1), _branch(edge, -1)))
        real.append((_branch(edge, 1), _branch(big_m, 1)))
    real = _merge(real)

    if not real:
        regime = MkoRegime.CIRCLE_ONLY
    elif circle is None:
        regime = MkoRegime.REAL_ONLY
    else:
        regime = MkoRegime.MIXED
    logging.debug("MKO γ=%r: m=%r, M=%r, regime %s", mp.gamma, m, big_m, regime.value)
    return MkoSpectrumSet(
        m_gamma=m,
        M_gamma=big_m,
        circle_cos_interval=circle,
        real_intervals=real,
        regime=regime,
    )


def mko_sample(mp: MkoParams, grid: int) -> MkoSample:
    """Eigenvalues of the momentum matrix on ξ = 2πj/grid."""
    if grid < 1:
        raise ValueError(f"Momentum grid must be positive, got {grid}")
    xi = 2 * np.pi * np.arange(grid) / grid
    symbols = np.stack([mko_momentum_matrix(mp, x) for x in xi])
    return MkoSample(xi, np.linalg.eigvals(symbols))


def set_probes(spectrum: MkoSpectrumSet, count: int = 4096) -> NDArray[np.complex128]:
    probes = []
    if spectrum.circle_cos_interval is not None:
        lo, hi = spectrum.circle_cos_interval
        angles = np.linspace(math.acos(hi), math.acos(lo), count)
        probes += [np.exp(1j * angles), np.exp(-1j * angles)]
    for lo, hi in spectrum.real_intervals:
        probes.append(np.linspace(lo, hi, count).astype(np.complex128))
    return np.concatenate(probes) if probes else np.zeros(0, dtype=np.complex128)


def hausdorff_to_set(
    points: ArrayLike, spectrum: MkoSpectrumSet, probes: int = 4096
) -> float:
    """Hausdorff distance between sampled eigenvalues and the closed-form set."""
    z = np.asarray(points, dtype=np.complex128).ravel()
    outward = max((spectrum.distance(complex(v)) for v in z), default=0.0)
    targets = set_probes(spectrum, probes)
    if not z.size or not targets.size:
        return outward
    tree = cKDTree(np.column_stack([z.real, z.imag]))
    inward, _ = tree.query(np.column_stack([targets.real, targets.imag]))
    return max(outward, float(np.max(inward)))


def _ring_shift(n: int) -> NDArray[np.complex128]:
    """(Lf)(x) = f(x + 1 mod n)."""
    return np.roll(np.eye(n, dtype=np.complex128), 1, axis=1)


def _site_constant(m: NDArray, n: int) -> NDArray[np.complex128]:
    return np.kron(m, np.eye(n, dtype=np.complex128))


def _ring_walk_shift(n: int) -> NDArray[np.complex128]:
    shift = _ring_shift(n)
    zero = np.zeros((n, n), dtype=np.complex128)
    return np.block([[shift, zero], [zero, shift.conj().T]])


def mko_ring_evolution(mp: MkoParams, n: int) -> NDArray[np.complex128]:
    """U_γ truncated to the periodic ring of n sites."""
    if n < 3:
        raise ValueError(f"Ring needs at least 3 sites, got {n}")
    shift = _ring_walk_shift(n)
    first = _site_constant(_gain(mp, -1) @ _phase(mp) @ _coin(mp.theta1), n)
    second = _site_constant(_gain(mp) @ _phase(mp) @ _coin(mp.theta2), n)
    return shift @ second @ shift @ first


def mko_ring_pair(mp: MkoParams, n: int) -> ChiralPair:
    """Chiral pair S_mko · C_mko on the ring, unitarily equivalent to the ring evolution.

    a > 0 > b are the eigenvalues of C_mko, so ab = -1; d selects the
    a-eigenvector at every site. The chiral form is built on the symmetrized
    factors: S_mko is replaced by its Hermitian part and C_mko is diagonalised
    through (C + C*)/2, both equal to the originals up to rounding.
    """
    if n < 3:
        raise ValueError(f"Ring needs at least 3 sites, got {n}")
    shift = _ring_walk_shift(n)
    s_mko = shift @ _site_constant(_coin(mp.theta1), n) @ shift @ _site_constant(PAULI_Y, n)
    s_mko = (s_mko + s_mko.conj().T) / 2
    values, vectors = linalg.eig_hermitian(mko_coin(mp))
    b, a = values.real
    chi = vectors[:, 1]
    d = np.kron(chi.conj()[None, :], np.eye(n, dtype=np.complex128))
    return chiral.build_chiral_pair(s_mko, d, float(a), float(b), label="mko")


def example_homogeneous(
    phi_vec: Sequence[complex], p: float, q: complex, n: int, a: float, b: float
) -> ChiralPair:
    """Ring pair with S = [[p, qL], [q̄L*, -p]] and (dψ)(x) = ⟨φ, ψ(x)⟩."""
    if n < 3:
        raise ValueError(f"Ring needs at least 3 sites, got {n}")
    if abs(p * p + abs(q) ** 2 - 1) > 1e-12:
        raise ValueError(f"Shift parameters need p² + |q|² = 1, got p={p}, q={q}")
    phi = np.asarray(phi_vec, dtype=np.complex128)
    if phi.shape != (2,) or abs(np.linalg.norm(phi) - 1) > 1e-12:
        raise ValueError(f"State must be a unit vector in C², got {phi_vec}")
    shift = _ring_shift(n)
    identity = np.eye(n, dtype=np.complex128)
    s = np.block([[p * identity, q * shift], [np.conj(q) * shift.conj().T, -p * identity]])
    d = np.kron(phi.conj()[None, :], identity)
    return chiral.build_chiral_pair(s, d, a, b, label="hom-example")


def _positive_eigenvector(alpha: float, beta: complex) -> NDArray[np.complex128]:
    """Unit eigenvector of [[α, β], [β̄, -α]] for +√(α² + |β|²)."""
    lam = math.sqrt(alpha * alpha + abs(beta) ** 2)
    v = np.array([alpha + lam, np.conj(beta)], dtype=np.complex128)
    norm = np.linalg.norm(v)
    if norm < 1e-300:
        return np.array([0, 1], dtype=np.complex128)
    return v / norm


def example_inhomogeneous(alpha: float, beta: complex, n: int) -> ChiralPair:
    """Ring pair with S = [[0, L], [L*, 0]] and a coin alternating between
    [[α, β], [β̄, -α]] on odd sites and diag(λ, -λ) on even sites, λ = √(α² + |β|²).
    """
    if n < 4 or n % 2:
        raise ValueError(f"Ring size must be even and at least 4, got {n}")
    if alpha == 0 and beta == 0:
        raise ValueError("Coin parameters (alpha, beta) must not both vanish")
    lam = math.sqrt(alpha * alpha + abs(beta) ** 2)
    shift = _ring_shift(n)
    zero = np.zeros((n, n), dtype=np.complex128)
    s = np.block([[zero, shift], [shift.conj().T, zero]])
    odd = _positive_eigenvector(alpha, beta)
    even = np.array([1, 0], dtype=np.complex128)
    d = np.zeros((n, 2 * n), dtype=np.complex128)
    for x in range(n):
        chi = odd if x % 2 else even
        d[x, x] = np.conj(chi[0])
        d[x, n + x] = np.conj(chi[1])
    return chiral.build_chiral_pair(s, d, lam, -lam, label="inhom-example")
