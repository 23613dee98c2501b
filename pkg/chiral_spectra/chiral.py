import logging
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray

from chiral_spectra import linalg
from chiral_spectra.models import AssumptionFlags, ChiralPair, MultiplicityData


STRUCTURE_TOL = 1e-12
PROJECTION_TOL = 1e-10


class NormalityDefect(NamedTuple):
    lhs_norm: float
    rhs_norm: float
    residual: float


def _frozen(m: NDArray) -> NDArray:
    m.setflags(write=False)
    return m


def _close(x: float, y: float) -> bool:
    return abs(x - y) <= STRUCTURE_TOL * max(1.0, abs(x), abs(y))


def build_chiral_pair(
    S: ArrayLike, d: ArrayLike, a: float, b: float, label: str = "pair"
) -> ChiralPair:
    """Validate (S, d, a, b) and derive C = a·d*d + b·(1 - d*d), U = SC, T = dSd*.

    Failed assumptions are recorded as flags; only a non-coisometric d or an S
    that is not a self-adjoint involution is an error.
    """
    shift = linalg.as_matrix(S)
    coisometry = linalg.as_matrix(d)
    n = shift.shape[0]
    if shift.shape != (n, n):
        raise ValueError(f"S must be square, got shape {shift.shape}")
    if coisometry.shape[1] != n or coisometry.shape[0] > n:
        raise ValueError(
            f"d must map C^{n} onto a space of dimension <= {n}, got shape {coisometry.shape}"
        )
    m = coisometry.shape[0]
    identity_n = np.eye(n, dtype=np.complex128)
    if linalg.operator_norm(coisometry @ coisometry.conj().T - np.eye(m)) > STRUCTURE_TOL * max(1, m):
        raise ValueError("d is not a coisometry: dd* != I")
    if linalg.operator_norm(shift - shift.conj().T) > STRUCTURE_TOL * max(1, n):
        raise ValueError("S is not self-adjoint")
    if linalg.operator_norm(shift @ shift - identity_n) > STRUCTURE_TOL * max(1, n):
        raise ValueError("S is not an involution: S^2 != I")

    projection = coisometry.conj().T @ coisometry
    coin = a * projection + b * (identity_n - projection)
    evolution = shift @ coin
    discriminant = coisometry @ shift @ coisometry.conj().T

    assumptions = AssumptionFlags(
        proj_proper=n > 0 and linalg.operator_norm(identity_n - projection) > PROJECTION_TOL,
        S_proper=min(
            linalg.operator_norm(shift - identity_n), linalg.operator_norm(shift + identity_n)
        ) > PROJECTION_TOL,
        a_neq_pm_b=not (_close(a, b) or _close(a, -b)),
        ab_nonzero=abs(a * b) > STRUCTURE_TOL,
    )
    if not assumptions.all_hold:
        logging.info("Pair %s built with failing assumptions %s", label, assumptions.failing())
    logging.debug("Built pair %s: dim H=%d, dim K=%d, a=%r, b=%r", label, n, m, a, b)
    return ChiralPair(
        S=_frozen(shift),
        d=_frozen(coisometry),
        a=float(a),
        b=float(b),
        C=_frozen(coin),
        U=_frozen(evolution),
        T=_frozen(discriminant),
        assumptions=assumptions,
        label=label,
    )


def discriminant(p: ChiralPair) -> NDArray[np.complex128]:
    return p.T


def multiplicity_data(p: ChiralPair, tol: float | None = None) -> MultiplicityData:
    n, m = p.dim_H, p.dim_K
    identity_n = np.eye(n)
    identity_m = np.eye(m)
    return MultiplicityData(
        m_plus=linalg.kernel_dimension(p.T - identity_m, tol),
        m_minus=linalg.kernel_dimension(p.T + identity_m, tol),
        M_plus=linalg.kernel_dimension(np.vstack([p.d, p.S + identity_n]), tol),
        M_minus=linalg.kernel_dimension(np.vstack([p.d, p.S - identity_n]), tol),
        dim_H=n,
        dim_K=m,
    )


def dimension_accounting(md: MultiplicityData) -> tuple[int, int]:
    """Both sides of M₊ + M₋ = dim H - 2 dim K + m₊ + m₋."""
    return md.M_plus + md.M_minus, md.dim_H - 2 * md.dim_K + md.m_plus + md.m_minus


def normality_defect(p: ChiralPair) -> NormalityDefect:
    commutator = p.U @ p.U.conj().T - p.U.conj().T @ p.U
    projection = p.d.conj().T @ p.d
    predicted = (p.a**2 - p.b**2) * (p.S @ projection - projection @ p.S) @ p.S
    return NormalityDefect(
        lhs_norm=linalg.operator_norm(commutator),
        rhs_norm=linalg.operator_norm(predicted),
        residual=linalg.operator_norm(commutator - predicted),
    )


def chiral_symmetry_residual(p: ChiralPair) -> float:
    """‖SUS - U*‖."""
    return linalg.operator_norm(p.S @ p.U @ p.S - p.U.conj().T)


def operator_norm_check(p: ChiralPair) -> tuple[float, float]:
    """Return (‖U‖, max(|a|, |b|)); equal whenever d*d is a proper projection."""
    return linalg.operator_norm(p.U), max(abs(p.a), abs(p.b))


def random_unitary(rng: np.random.Generator, n: int) -> NDArray[np.complex128]:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    # phase-correct the columns so the distribution is Haar
    return q * np.exp(-1j * np.angle(np.diag(r)))[None, :]


def random_pair(
    rng: np.random.Generator, n: int, m: int, a: float, b: float
) -> ChiralPair:
    """Random pair with 0 < m < n: S conjugates a ±1 diagonal, d has orthonormal rows."""
    if not 0 < m < n:
        raise ValueError(f"Random pairs need 0 < m < n, got m={m}, n={n}")
    minus_ones = int(rng.integers(1, n))
    signs = np.concatenate([-np.ones(minus_ones), np.ones(n - minus_ones)])
    q = random_unitary(rng, n)
    shift = q @ np.diag(signs) @ q.conj().T
    shift = (shift + shift.conj().T) / 2
    coisometry = random_unitary(rng, n)[:m, :]
    return build_chiral_pair(shift, coisometry, a, b, label="random")
