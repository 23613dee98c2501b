"""Point spectrum of U = SC predicted from the discriminant T, and its check
against a direct eigensolve.

Inherited eigenvalues solve φ(λ) = t for t ∈ σ(T) \\ {±1}, with
φ(z) = (z - ab/z)/(a - b); birth eigenvalues sit at a, -a, -b, b with
multiplicities m₊, m₋, M₊, M₋.
"""

import cmath
import io
import logging
import math
from typing import NamedTuple, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linear_sum_assignment

from chiral_spectra import chiral, config, linalg
from chiral_spectra.errors import AssumptionError
from chiral_spectra.models import (
    AtomOrigin,
    BoundCheck,
    BoundReport,
    ChiralPair,
    DirectValue,
    JoukowskyParams,
    SpectralAtom,
    SpectrumReport,
    Verdict,
)


UNIT_TOL = 1e-8
DEGENERATE_TOL = 1e-12
RESOLVENT_SAMPLES = 20


class InverseRoots(NamedTuple):
    plus: complex
    minus: complex
    degenerate: bool


class DirectSpectrum(NamedTuple):
    eigenvalues: NDArray[np.complex128]
    values: list[DirectValue]


def joukowsky(params: JoukowskyParams, z: complex) -> complex:
    if z == 0:
        raise ValueError("Scaled Joukowsky transform is undefined at z = 0")
    return (z - params.a * params.b / z) / (params.a - params.b)


def joukowsky_inverse(params: JoukowskyParams, t: float) -> InverseRoots:
    a, b = params.a, params.b
    s = (a - b) * t
    disc = s * s + 4 * a * b
    degenerate = abs(disc) <= DEGENERATE_TOL * max(1.0, s * s, abs(4 * a * b))
    if degenerate:
        return InverseRoots(complex(s / 2), complex(s / 2), True)
    if disc < 0:
        root = 1j * math.sqrt(-disc)
        return InverseRoots((s + root) / 2, (s - root) / 2, False)
    # larger root first, the other from the product -ab to avoid cancellation
    root = math.sqrt(disc)
    sign = 1.0 if s >= 0 else -1.0
    big = (s + sign * root) / 2
    small = -a * b / big
    plus, minus = (big, small) if sign > 0 else (small, big)
    return InverseRoots(complex(plus), complex(minus), False)


def _require_mapping_ready(p: ChiralPair) -> None:
    for flag in p.assumptions.failing():
        if flag == "a_neq_pm_b" and p.balanced and p.a != 0:
            continue
        raise AssumptionError(flag, f"Pair {p.label}: assumption '{flag}' does not hold")


def _birth_atoms(p: ChiralPair, m_plus: int, m_minus: int, M_plus: int, M_minus: int) -> list[SpectralAtom]:
    births = [
        (p.a, m_plus, AtomOrigin.BIRTH_A_PLUS),
        (-p.a, m_minus, AtomOrigin.BIRTH_A_MINUS),
        (-p.b, M_plus, AtomOrigin.BIRTH_B_PLUS),
        (p.b, M_minus, AtomOrigin.BIRTH_B_MINUS),
    ]
    if p.balanced:
        # -b = a and b = -a: the two birth families share their values
        merged = []
        for (value, count, origin), (_, other_count, other_origin) in (
            (births[0], births[2]),
            (births[1], births[3]),
        ):
            if count and other_count:
                merged.append((value, count + other_count, origin, other_origin))
            elif count or other_count:
                merged.append((value, count + other_count, origin if count else other_origin, None))
        return [
            SpectralAtom(re=value, im=0.0, mult=count, origin=origin, merged_with=other)
            for value, count, origin, other in merged
        ]
    return [
        SpectralAtom(re=value, im=0.0, mult=count, origin=origin)
        for value, count, origin in births
        if count
    ]


def predicted_spectrum(p: ChiralPair, tol: float | None = None) -> list[SpectralAtom]:
    _require_mapping_ready(p)
    params = JoukowskyParams(a=p.a, b=p.b)
    md = chiral.multiplicity_data(p)
    atoms = _birth_atoms(p, md.m_plus, md.m_minus, md.M_plus, md.M_minus)
    t_values = linalg.eig_hermitian(p.T).eigenvalues.real
    for cluster in linalg.cluster_values(t_values, tol if tol is not None else config.TOL):
        t = cluster.center.real
        if abs(t - 1) <= UNIT_TOL or abs(t + 1) <= UNIT_TOL:
            continue
        roots = joukowsky_inverse(params, t)
        if roots.degenerate:
            logging.warning("Pair %s: double root at t=%r, algebraic multiplicity not asserted", p.label, t)
            atoms.append(
                SpectralAtom(
                    re=roots.plus.real, im=roots.plus.imag, mult=cluster.count,
                    origin=AtomOrigin.INHERITED, t_source=t, degenerate=True,
                )
            )
            continue
        for root in (roots.plus, roots.minus):
            atoms.append(
                SpectralAtom(
                    re=root.real, im=root.imag, mult=cluster.count,
                    origin=AtomOrigin.INHERITED, t_source=t,
                )
            )
    atoms.sort(key=lambda atom: (atom.re, atom.im))
    return atoms


def direct_spectrum(p: ChiralPair, tol: float | None = None) -> DirectSpectrum:
    eigenvalues = linalg.eig_general(p.U).eigenvalues
    identity = np.eye(p.dim_H)
    values = [
        DirectValue(
            re=cluster.center.real,
            im=cluster.center.imag,
            mult_geometric=linalg.kernel_dimension(p.U - cluster.center * identity),
            mult_algebraic=cluster.count,
        )
        for cluster in linalg.cluster_values(eigenvalues, tol)
    ]
    return DirectSpectrum(eigenvalues, values)


def _match(atoms: Sequence[SpectralAtom], values: Sequence[DirectValue]) -> list[tuple[int, int]]:
    if not atoms or not values:
        return []
    distances = np.abs(
        np.array([atom.value for atom in atoms])[:, None]
        - np.array([value.value for value in values])[None, :]
    )
    nearest = np.argmin(distances, axis=1)
    if len(set(nearest.tolist())) == len(nearest):
        return list(enumerate(nearest.tolist()))
    logging.debug("Greedy matching collided, escalating to optimal assignment")
    rows, cols = linear_sum_assignment(distances)
    return list(zip(rows.tolist(), cols.tolist()))


def default_resolvent_samples(a: float, b: float, count: int = RESOLVENT_SAMPLES) -> list[complex]:
    lo, hi = min(abs(a), abs(b)), max(abs(a), abs(b))
    golden = math.pi * (3 - math.sqrt(5))
    inner = count // 2 if lo > 0 else 0
    samples = [cmath.rect(hi * (1.05 + 0.25 * j), golden * j) for j in range(count - inner)]
    samples += [cmath.rect(lo * (0.05 + 0.09 * j), golden * j + 0.5) for j in range(inner)]
    return samples


def check_bounds(
    p: ChiralPair,
    z_samples: Sequence[complex] | None = None,
    tol: float | None = None,
    eigenvalues: NDArray[np.complex128] | None = None,
) -> BoundReport:
    tol = config.TOL if tol is None else tol
    if eigenvalues is None:
        eigenvalues = linalg.eig_general(p.U).eigenvalues
    if z_samples is None:
        z_samples = default_resolvent_samples(p.a, p.b)
    lo, hi = min(abs(p.a), abs(p.b)), max(abs(p.a), abs(p.b))
    moduli = np.abs(eigenvalues)

    annulus_margin = np.maximum(lo - tol - moduli, moduli - hi - tol)

    ab = p.a * p.b
    if ab > 0:
        locus_margin = np.abs(eigenvalues.imag) - tol
    else:
        radius = math.sqrt(-ab)
        locus_margin = np.minimum(np.abs(eigenvalues.imag), np.abs(moduli - radius)) - tol

    identity = np.eye(p.dim_H)
    resolvent_margins = []
    for z in z_samples:
        if lo <= abs(z) <= hi:
            continue
        c = hi if abs(z) > hi else lo
        bound = abs(c - abs(z))
        resolvent_margins.append(bound - tol - linalg.smallest_singular_value(p.U - z * identity))

    def _check(margins) -> BoundCheck:
        worst = float(np.max(margins)) if len(margins) else -math.inf
        return BoundCheck(passed=worst <= 0, checked=len(margins), worst=worst if len(margins) else 0.0)

    report = BoundReport(
        annulus=_check(annulus_margin),
        locus=_check(locus_margin),
        resolvent=_check(resolvent_margins),
    )
    if not report.passed:
        logging.warning("Pair %s violates a spectral bound: %s", p.label, report.model_dump())
    return report


def verify_mapping(
    p: ChiralPair,
    tol: float | None = None,
    z_samples: Sequence[complex] | None = None,
) -> SpectrumReport:
    tol = config.TOL if tol is None else tol
    atoms = predicted_spectrum(p, tol)
    direct = direct_spectrum(p, tol)
    scale = max(1.0, float(np.max(np.abs(direct.eigenvalues))) if direct.eigenvalues.size else 1.0)
    width = tol * scale

    mismatches: list[str] = []
    notes: list[str] = []
    pairs = _match(atoms, direct.values)
    matched_atoms = {i for i, _ in pairs}
    matched_values = {j for _, j in pairs}
    for i, j in pairs:
        atom, value = atoms[i], direct.values[j]
        distance = abs(atom.value - value.value)
        if distance > width:
            mismatches.append(
                f"atom {atom.value:.12g} ({atom.origin.value}) nearest direct value "
                f"{value.value:.12g} at distance {distance:.3g}"
            )
            continue
        if atom.mult != value.mult_geometric:
            mismatches.append(
                f"atom {atom.value:.12g}: geometric multiplicity {value.mult_geometric}, "
                f"predicted {atom.mult}"
            )
        if atom.degenerate:
            notes.append(f"algebraic multiplicity at double root {atom.value:.12g} not compared")
        elif atom.mult != value.mult_algebraic:
            mismatches.append(
                f"atom {atom.value:.12g}: algebraic multiplicity {value.mult_algebraic}, "
                f"predicted {atom.mult}"
            )
    mismatches += [
        f"predicted atom {atoms[i].value:.12g} has no direct counterpart"
        for i in range(len(atoms))
        if i not in matched_atoms
    ]
    mismatches += [
        f"direct value {direct.values[j].value:.12g} was not predicted"
        for j in range(len(direct.values))
        if j not in matched_values
    ]
    if p.balanced:
        notes.append("a = -b: birth atoms at a and -b (and at -a and b) merged")

    verdict = Verdict.MISMATCH if mismatches else Verdict.MATCH
    logging.info("Pair %s: verdict %s", p.label, verdict.value)
    return SpectrumReport(
        model=p.label,
        n=p.dim_H,
        a=p.a,
        b=p.b,
        atoms=atoms,
        direct=direct.values,
        verdict=verdict,
        mismatches=mismatches,
        notes=notes,
        bounds=check_bounds(p, z_samples, tol, direct.eigenvalues),
    )


CSV_HEADER = "re,im,mult_geometric,origin,t_source"


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.17g}"


def spectrum_csv(report: SpectrumReport) -> str:
    """Predicted atoms, then directly computed values tagged ``direct``."""
    out = io.StringIO()
    out.write(CSV_HEADER + "\n")
    for atom in report.atoms:
        out.write(f"{_fmt(atom.re)},{_fmt(atom.im)},{atom.mult},{atom.origin.value},{_fmt(atom.t_source)}\n")
    for value in report.direct:
        out.write(f"{_fmt(value.re)},{_fmt(value.im)},{value.mult_geometric},direct,\n")
    return out.getvalue()
