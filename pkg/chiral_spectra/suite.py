"""Named invariant checks run by ``verify``.

Each check raises :class:`VerificationError` on the first violated property
and otherwise returns a short detail line.
"""

import cmath
import logging
import math
from typing import Callable, NamedTuple

import numpy as np
import numpy.polynomial.polynomial as P

from chiral_spectra import chiral, graph, linalg, spectral, walks, zeta
from chiral_spectra.errors import VerificationError
from chiral_spectra.models import (
    CheckResult,
    CorrelatedParams,
    JoukowskyParams,
    MkoParams,
    MkoRegime,
    Verdict,
    VerifySummary,
)


CATALOG = ("c3", "c4", "k4", "k5", "k33", "petersen")
GROVER_CATALOG = ("k4", "k5", "k33", "petersen")


class SuiteContext(NamedTuple):
    seed: int
    tol: float
    random_pairs: int
    random_graphs: int

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])


Check = Callable[[SuiteContext], str]
CHECKS: list[tuple[str, Check]] = []


def check(name: str) -> Callable[[Check], Check]:
    def register(fn: Check) -> Check:
        CHECKS.append((name, fn))
        return fn

    return register


def expect(condition: bool, message: str) -> None:
    if not condition:
        raise VerificationError(message)


@check("graph.arc_structure")
def _arc_structure(ctx: SuiteContext) -> str:
    for name in CATALOG + ("edge",):
        g = graph.builtin_graph(name)
        arc_set = graph.arc_structure(g)
        k_in, k_out = graph.incidence_matrices(g)
        reversal = graph.reversal_matrix(arc_set)
        expect(np.array_equal(k_out, k_in @ reversal), f"{name}: K_out != K_in J")
        expect(np.array_equal(graph.adjacency(g), k_in @ k_out.T), f"{name}: M != K_in K_out*")
        invariants = graph.graph_invariants(g)
        expect(
            invariants.betti1 == g.edge_count - g.vertex_count + 1,
            f"{name}: betti1 {invariants.betti1} != |E| - |V| + 1",
        )
    return f"{len(CATALOG) + 1} graphs"


@check("graph.bipartite_spectrum")
def _bipartite_spectrum(ctx: SuiteContext) -> str:
    for name in CATALOG:
        g = graph.builtin_graph(name)
        mu = np.sort(linalg.eig_hermitian(graph.adjacency(g)).eigenvalues.real)
        symmetric = bool(np.all(np.abs(mu + mu[::-1]) <= 1e-9))
        expect(
            symmetric == graph.graph_invariants(g).bipartite,
            f"{name}: spectrum symmetry {symmetric} disagrees with bipartiteness",
        )
    return f"{len(CATALOG)} graphs"


def _random_matrices(ctx: SuiteContext, salt: int):
    rng = ctx.rng(salt)
    for _ in range(ctx.random_pairs):
        n = int(rng.integers(2, 9))
        yield rng, rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


@check("linalg.eigensolvers")
def _eigensolvers(ctx: SuiteContext) -> str:
    for _, z in _random_matrices(ctx, 5):
        n = z.shape[0]
        scale = max(1.0, linalg.operator_norm(z))
        values = linalg.eig_general(z).eigenvalues
        expect(
            abs(values.sum() - np.trace(z)) <= 1e-10 * n * scale,
            f"n={n}: eigenvalue sum {values.sum():.12g} != trace {np.trace(z):.12g}",
        )
        h = (z + z.conj().T) / 2
        general = linalg.eig_general(h).eigenvalues
        hermitian = linalg.eig_hermitian(h).eigenvalues
        expect(
            linalg.matched_distance(general, hermitian) <= 1e-10 * scale,
            f"n={n}: general and Hermitian eigensolvers disagree",
        )
        expect(
            linalg.matched_distance(values, general) == linalg.matched_distance(general, values),
            f"n={n}: matched distance is not symmetric",
        )
    return f"{ctx.random_pairs} matrices"


@check("linalg.char_poly_and_rank")
def _char_poly_and_rank(ctx: SuiteContext) -> str:
    for rng, z in _random_matrices(ctx, 6):
        n = z.shape[0]
        scale = max(1.0, linalg.operator_norm(z)) ** n
        product = np.array([1.0 + 0j])
        for value in linalg.eig_general(z).eigenvalues:
            product = P.polymul(product, [1.0, -value])
        residual = float(np.max(np.abs(linalg.char_poly(z) - product)))
        expect(residual <= 1e-9 * scale, f"n={n}: char_poly differs from Π(1 - λu) by {residual:.3g}")

        rows, cols = int(rng.integers(1, 9)), int(rng.integers(1, 9))
        rank = int(rng.integers(0, min(rows, cols) + 1))
        m = rng.normal(size=(rows, rank)) @ rng.normal(size=(rank, cols))
        kernel, numerical = linalg.kernel_dimension(m), linalg.numerical_rank(m)
        expect(numerical == rank, f"{rows}x{cols} rank {rank} matrix has numerical rank {numerical}")
        expect(kernel + numerical == min(rows, cols), f"{rows}x{cols}: rank {numerical} + kernel {kernel}")
    return f"{ctx.random_pairs} matrices"


def _random_pairs(ctx: SuiteContext):
    rng = ctx.rng(1)
    for _ in range(ctx.random_pairs):
        n = int(rng.integers(2, 9))
        m = int(rng.integers(1, n))
        a, b = rng.uniform(0.2, 3.0, size=2) * rng.choice([-1.0, 1.0], size=2)
        yield chiral.random_pair(rng, n, m, float(a), float(b))


@check("chiral.random_pairs")
def _chiral_random_pairs(ctx: SuiteContext) -> str:
    worst = 0.0
    for p in _random_pairs(ctx):
        u_norm = linalg.operator_norm(p.U)
        defect = chiral.normality_defect(p)
        expect(
            defect.residual <= 1e-12 * (1 + u_norm**2),
            f"normality identity residual {defect.residual:.3g} on n={p.dim_H}",
        )
        expect(
            chiral.chiral_symmetry_residual(p) <= 1e-12 * max(1.0, u_norm),
            "chiral symmetry SUS = U* violated",
        )
        expect(linalg.operator_norm(p.T) <= 1 + 1e-10, "‖T‖ exceeds 1")
        if p.assumptions.proj_proper:
            norm, bound = chiral.operator_norm_check(p)
            expect(abs(norm - bound) <= 1e-10 * bound, f"‖U‖ = {norm} != max(|a|, |b|) = {bound}")
        worst = max(worst, defect.residual)
    return f"{ctx.random_pairs} pairs, worst normality residual {worst:.3g}"


def _check_grover_multiplicities(name: str, g) -> None:
    invariants = graph.graph_invariants(g)
    md = chiral.multiplicity_data(walks.grover_positive_support(g))
    expect(md.m_plus == 1, f"{name}: m+ = {md.m_plus}")
    expect(md.m_minus == int(invariants.bipartite), f"{name}: m- = {md.m_minus}")
    excess = g.edge_count - g.vertex_count
    expect(md.M_plus == excess + md.m_plus, f"{name}: M+ = {md.M_plus}")
    expect(md.M_minus == excess + md.m_minus, f"{name}: M- = {md.M_minus}")
    lhs, rhs = chiral.dimension_accounting(md)
    expect(lhs == rhs, f"{name}: dimension accounting {lhs} != {rhs}")


@check("chiral.grover_multiplicities")
def _grover_multiplicities(ctx: SuiteContext) -> str:
    for name in GROVER_CATALOG:
        _check_grover_multiplicities(name, graph.builtin_graph(name))
    rng = ctx.rng(2)
    for i in range(ctx.random_graphs):
        n = 2 * int(rng.integers(2, 11))
        g = graph.random_regular_graph(3, n, seed=ctx.seed * 1000 + i)
        _check_grover_multiplicities(f"random 3-regular #{i} (n={n})", g)
    return f"{len(GROVER_CATALOG)} catalog and {ctx.random_graphs} random graphs"


@check("spectral.round_trip")
def _round_trip(ctx: SuiteContext) -> str:
    rng = ctx.rng(3)
    for _ in range(1000):
        a, b = rng.uniform(0.2, 3.0, size=2) * rng.choice([-1.0, 1.0], size=2)
        if abs(abs(a) - abs(b)) < 1e-3:
            continue
        params = JoukowskyParams(a=float(a), b=float(b))
        t = float(rng.uniform(-1, 1))
        roots = spectral.joukowsky_inverse(params, t)
        for root in (roots.plus, roots.minus):
            expect(
                abs(spectral.joukowsky(params, root) - t) <= 1e-10 * max(1.0, abs(t)),
                f"φ(λ) != t for a={a}, b={b}, t={t}",
            )
        expect(
            abs(roots.plus * roots.minus + a * b) <= 1e-12 * max(1.0, abs(a * b)),
            f"λ+ λ- != -ab for a={a}, b={b}, t={t}",
        )
        expect(
            abs(roots.plus + roots.minus - (a - b) * t) <= 1e-12 * max(1.0, abs((a - b) * t)),
            f"λ+ + λ- != (a - b)t for a={a}, b={b}, t={t}",
        )
    return "1000 draws"


@check("spectral.grover_specialization")
def _grover_specialization(ctx: SuiteContext) -> str:
    k = 3
    params = JoukowskyParams(a=k - 1, b=-1)
    for mu in range(-3, 4):
        roots = spectral.joukowsky_inverse(params, mu / k)
        disc = cmath.sqrt(mu * mu - 4 * (k - 1))
        expected = (mu / 2 + disc / 2, mu / 2 - disc / 2)
        expect(
            linalg.matched_distance([roots.plus, roots.minus], expected) <= 1e-12,
            f"inverse transform at μ={mu} disagrees with μ/2 ± ½√(μ² - 4(k - 1))",
        )
    return "μ = -3..3"


def _catalog_pairs():
    yield "minimal pair", chiral.build_chiral_pair([[0, 1], [1, 0]], [[1, 0]], 2.0, 1.0, label="minimal")
    for name in GROVER_CATALOG:
        yield f"grover {name}", walks.grover_positive_support(graph.builtin_graph(name))
    yield "correlated c4 p=0.75", walks.correlated_walk(graph.builtin_graph("c4"), 0.75)
    yield "correlated k4 p=0.6", walks.correlated_walk(graph.builtin_graph("k4"), 0.6)
    yield "hom-example", walks.example_homogeneous(
        (1 / math.sqrt(2), 1 / math.sqrt(2)), 0.6, 0.8, 6, 2.0, 0.5
    )
    for alpha, beta, n in ((1.0, 0.0, 4), (0.6, 0.8, 6), (0.3, 0.4 + 0.2j, 8)):
        yield f"inhom-example {alpha},{beta},{n}", walks.example_inhomogeneous(alpha, beta, n)


@check("spectral.catalog_mapping")
def _catalog_mapping(ctx: SuiteContext) -> str:
    count = 0
    for name, p in _catalog_pairs():
        report = spectral.verify_mapping(p, ctx.tol)
        expect(report.verdict == Verdict.MATCH, f"{name}: {'; '.join(report.mismatches)}")
        expect(report.bounds is not None and report.bounds.passed, f"{name}: spectral bound violated")
        if not any(atom.degenerate for atom in report.atoms):
            total = sum(atom.mult for atom in report.atoms)
            expect(total == p.dim_H, f"{name}: geometric total {total} != {p.dim_H}")
        values = np.array([v.value for v in report.direct])
        expect(
            linalg.matched_distance(values, values.conj()) <= ctx.tol * max(1.0, float(np.max(np.abs(values)))),
            f"{name}: direct support not closed under conjugation",
        )
        count += 1
    return f"{count} pairs"


@check("zeta.identities")
def _zeta_identities(ctx: SuiteContext) -> str:
    for name in ("c3", "k4", "k5", "k33", "petersen"):
        g = graph.builtin_graph(name)
        reciprocal = zeta.zeta_reciprocal(g)
        residue = zeta.coefficient_residue(reciprocal, zeta.bass_form(g))
        expect(residue <= 1e-9, f"{name}: det(I - uU⁺) differs from the Bass form by {residue:.3g}")
        expect(zeta.zeta_leading_check(g, reciprocal).holds, f"{name}: |leading coefficient| != |det U⁺|")
    for name in ("c3", "k4", "k33"):
        g = graph.builtin_graph(name)
        counts = zeta.nb_walk_counts(g, 8)
        expect(zeta.log_series_holds(zeta.zeta_reciprocal(g), counts), f"{name}: log-series identity fails")
    for name in ("c3", "k4"):
        g = graph.builtin_graph(name)
        product = zeta.prime_cycle_product(g, 6)
        expect(zeta.euler_product_holds(zeta.zeta_reciprocal(g), product), f"{name}: Euler product differs")
    distance = zeta.zeta_roots_in_spectrum(graph.builtin_graph("k4"))
    expect(distance <= 1e-7, f"k4: zeta root off the predicted spectrum by {distance:.3g}")
    return "5 graphs"


@check("walks.correlated_containment")
def _correlated_containment(ctx: SuiteContext) -> str:
    points = 0
    for name in ("c4", "k4", "petersen"):
        g = graph.builtin_graph(name)
        k = graph.graph_invariants(g).require_regular()
        for p in np.round(np.linspace(0, 1, 21), 12):
            pair = walks.correlated_walk(g, float(p))
            if not pair.assumptions.all_hold and not pair.balanced:
                continue
            eigenvalues = linalg.eig_general(pair.U).eigenvalues
            expect(
                walks.correlated_containment(CorrelatedParams(p=float(p), k=k), eigenvalues, walks.CONTAINMENT_TOL),
                f"{name} p={p}: eigenvalue outside the predicted locus",
            )
            points += 1
    return f"{points} parameter points"


@check("walks.mko")
def _mko(ctx: SuiteContext) -> str:
    quarter = math.pi / 4
    unitary = MkoParams(gamma=0.0, theta1=quarter, theta2=quarter)
    sample = walks.mko_sample(unitary, 512)
    expect(
        bool(np.all(np.abs(np.abs(sample.eigenvalues) - 1) <= 1e-10)),
        "γ = 0 momentum eigenvalues are not unimodular",
    )
    expected = {
        0.2: MkoRegime.MIXED,
        0.5: MkoRegime.MIXED,
        0.8: MkoRegime.MIXED,
        1.0: MkoRegime.REAL_ONLY,
        1.5: MkoRegime.REAL_ONLY,
    }
    for gamma, regime in expected.items():
        mp = MkoParams(gamma=gamma, theta1=quarter, theta2=quarter)
        spectrum = walks.mko_closed_form(mp)
        expect(spectrum.regime == regime, f"γ={gamma}: regime {spectrum.regime.value}")
        worst = max(spectrum.distance(complex(z)) for z in walks.mko_sample(mp, 512).eigenvalues.ravel())
        expect(worst <= walks.CONTAINMENT_TOL, f"γ={gamma}: sampled eigenvalue {worst:.3g} off the closed form")

    rng = ctx.rng(4)
    for _ in range(64):
        mp = MkoParams(
            gamma=float(rng.uniform(0, 2)),
            phi=float(rng.uniform(0, 2 * math.pi)),
            theta1=float(rng.uniform(0, 2 * math.pi)),
            theta2=float(rng.uniform(0, 2 * math.pi)),
        )
        xi = float(rng.uniform(0, 2 * math.pi))
        s_mko, c_mko = walks.mko_equivalence_factors(mp, xi)
        expect(linalg.operator_norm(s_mko - s_mko.conj().T) <= 1e-12, "S_mko is not self-adjoint")
        expect(linalg.operator_norm(s_mko @ s_mko - np.eye(2)) <= 1e-12, "S_mko is not unitary")
        expect(linalg.operator_norm(c_mko - c_mko.conj().T) <= 1e-12 * linalg.operator_norm(c_mko), "C_mko is not Hermitian")
        expect(abs(np.linalg.det(c_mko) + 1) <= 1e-12 * max(1.0, linalg.operator_norm(c_mko) ** 2), "det C_mko != -1")
        lhs = np.linalg.eigvals(walks.mko_momentum_matrix(mp, xi))
        rhs = np.linalg.eigvals(s_mko @ c_mko)
        expect(
            linalg.matched_distance(lhs, rhs) <= 1e-10 * max(1.0, float(np.max(np.abs(lhs)))),
            "S_mko C_mko and the momentum matrix are not isospectral",
        )

    mp = MkoParams(gamma=0.5, theta1=quarter, theta2=quarter)
    spectrum = walks.mko_closed_form(mp)
    distances = [
        walks.hausdorff_to_set(walks.mko_sample(mp, 2**g).eigenvalues, spectrum) for g in range(8, 13)
    ]
    expect(
        all(later <= earlier for earlier, later in zip(distances, distances[1:])),
        f"Hausdorff distances not monotone: {distances}",
    )
    return f"Hausdorff distances {', '.join(f'{d:.2e}' for d in distances)}"


@check("walks.mko_ring")
def _mko_ring(ctx: SuiteContext) -> str:
    quarter = math.pi / 4
    for gamma in (0.0, 0.3, 1.2):
        mp = MkoParams(gamma=gamma, theta1=quarter, theta2=quarter)
        evolution = linalg.eig_general(walks.mko_ring_evolution(mp, 8)).eigenvalues
        pair = walks.mko_ring_pair(mp, 8)
        expect(abs(pair.a * pair.b + 1) <= 1e-12, f"γ={gamma}: ab != -1")
        distance = linalg.matched_distance(evolution, linalg.eig_general(pair.U).eigenvalues)
        expect(distance <= walks.CONTAINMENT_TOL, f"γ={gamma}: ring pair and ring evolution differ by {distance:.3g}")
        spectrum = walks.mko_closed_form(mp)
        worst = max(spectrum.distance(complex(z)) for z in evolution)
        expect(worst <= walks.CONTAINMENT_TOL, f"γ={gamma}: ring eigenvalue {worst:.3g} off the closed form")
    return "N = 8"


@check("walks.homogeneous_normality")
def _homogeneous_normality(ctx: SuiteContext) -> str:
    for q in (0.0, 0.6, 1.0):
        p = math.sqrt(1 - q * q)
        for angle in (0.0, math.pi / 4, math.pi / 2):
            phi = (math.cos(angle), math.sin(angle))
            pair = walks.example_homogeneous(phi, p, q, 6, 2.0, 0.5)
            lhs = chiral.normality_defect(pair).lhs_norm
            normal = q == 0 and abs(phi[0] * phi[1]) < 1e-12
            if normal:
                expect(lhs < 1e-12, f"q={q}, angle={angle}: expected normal, ‖[U, U*]‖ = {lhs:.3g}")
            else:
                expect(lhs > 1e-3, f"q={q}, angle={angle}: expected non-normal, ‖[U, U*]‖ = {lhs:.3g}")
    return "3 x 3 grid"


def run_suite(
    seed: int = 42, tol: float = 1e-8, random_pairs: int = 100, random_graphs: int = 50
) -> VerifySummary:
    ctx = SuiteContext(seed=seed, tol=tol, random_pairs=random_pairs, random_graphs=random_graphs)
    results = []
    for name, fn in CHECKS:
        try:
            detail = fn(ctx)
            results.append(CheckResult(name=name, passed=True, detail=detail))
            logging.info("Check %s passed: %s", name, detail)
        except (VerificationError, ArithmeticError, ValueError) as e:
            results.append(CheckResult(name=name, passed=False, detail=str(e)))
            logging.warning("Check %s failed: %s", name, e)
    failures = [r.name for r in results if not r.passed]
    return VerifySummary(
        seed=seed,
        tol=tol,
        checks=results,
        passed=not failures,
        first_failure=failures[0] if failures else None,
    )
