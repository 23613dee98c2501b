import asyncio
import cmath
import logging
import math

import numpy as np

from chiral_spectra import graph, graph_loader, linalg, spectral, suite, walks, zeta
from chiral_spectra.models import (
    ChiralPair,
    CorrelatedParams,
    Graph,
    MkoParams,
    MkoReport,
    ModelName,
    RunConfig,
    SpectrumReport,
    SweepReport,
    SweepRow,
    Verdict,
    VerifySummary,
    ZetaReport,
)


MIN_MKO_GRID = 64
UNIMODULAR_TOL = 1e-10
DEFAULT_SWEEP_RANGES = {
    ModelName.CORRELATED: (0.0, 1.0, 0.1),
    ModelName.MKO: (0.0, 2.0, 0.2),
}


def sweep_values(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic range, rounded to 12 digits."""
    if step <= 0:
        raise ValueError(f"Sweep step must be positive, got {step}")
    if stop < start:
        raise ValueError(f"Sweep stop {stop} is below start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


def _require(value, flag: str):
    if value is None:
        raise ValueError(f"{flag} is required for this model")
    return value


def _mko_params(cfg: RunConfig, gamma: float | None = None) -> MkoParams:
    return MkoParams(
        gamma=cfg.gamma if gamma is None else gamma,
        phi=cfg.phi,
        theta1=_require(cfg.theta1, "--theta1"),
        theta2=_require(cfg.theta2, "--theta2"),
    )


def _extrema(eigenvalues: np.ndarray) -> dict[str, float]:
    z = np.asarray(eigenvalues).ravel()
    moduli = np.abs(z)
    return {
        "min_modulus": float(np.min(moduli)),
        "max_modulus": float(np.max(moduli)),
        "min_real": float(np.min(z.real)),
        "max_real": float(np.max(z.real)),
    }


class SpectraPipeline:
    def __init__(self, loader: graph_loader.GraphLoader):
        self.loader = loader

    def load_graph(self, cfg: RunConfig) -> tuple[Graph, str]:
        if cfg.builtin is not None:
            builtin = graph_loader.BuiltinGraphLoader()
            return builtin.get_graph(cfg.builtin), builtin.describe(cfg.builtin)
        path = _require(cfg.graph_path, "--graph or --builtin")
        return self.loader.get_graph(path), self.loader.describe(path)

    def build_pair(self, cfg: RunConfig) -> ChiralPair:
        model = _require(cfg.model, "--model")
        match model:
            case ModelName.GROVER:
                g, _ = self.load_graph(cfg)
                return walks.grover_positive_support(g)
            case ModelName.CORRELATED:
                g, _ = self.load_graph(cfg)
                return walks.correlated_walk(g, _require(cfg.p, "--p"))
            case ModelName.HOM_EXAMPLE:
                p = _require(cfg.p, "--p")
                if not -1 <= p <= 1:
                    raise ValueError(f"--p must lie in [-1, 1] for hom-example, got {p}")
                phi = (
                    math.cos(cfg.state_angle),
                    cmath.exp(1j * cfg.state_phase) * math.sin(cfg.state_angle),
                )
                return walks.example_homogeneous(
                    phi, p, math.sqrt(1 - p * p), cfg.ring, _require(cfg.a, "--a"), _require(cfg.b, "--b")
                )
            case ModelName.INHOM_EXAMPLE:
                beta = complex(cfg.beta_re, cfg.beta_im)
                return walks.example_inhomogeneous(_require(cfg.alpha, "--alpha"), beta, cfg.ring)
            case ModelName.MKO:
                return walks.mko_ring_pair(_mko_params(cfg), cfg.ring)
            case _:
                raise ValueError(f"Unsupported model: {model}")

    def spectrum(self, cfg: RunConfig) -> SpectrumReport:
        pair = self.build_pair(cfg)
        logging.info("Built %s pair: dim H=%d, dim K=%d", pair.label, pair.dim_H, pair.dim_K)
        return spectral.verify_mapping(pair, cfg.tol)

    def zeta(self, cfg: RunConfig) -> ZetaReport:
        g, name = self.load_graph(cfg)
        reciprocal = zeta.zeta_reciprocal(g)
        bass = zeta.bass_form(g)
        residue = zeta.coefficient_residue(reciprocal, bass)
        leading = zeta.zeta_leading_check(g, reciprocal)
        notes = []
        if not leading.holds:
            notes.append(f"leading coefficient {leading.leading} against det U⁺ = {leading.determinant}")

        walk_counts = log_holds = None
        arcs = 2 * g.edge_count
        if cfg.L > zeta.WALK_LENGTH_CAP or arcs > zeta.WALK_ARC_CAP:
            notes.append(f"walk counts skipped: L={cfg.L}, {arcs} arcs above the enumeration caps")
            logging.warning("Walk counts skipped for %s: L=%d, %d arcs", name, cfg.L, arcs)
        else:
            counts = zeta.nb_walk_counts(g, cfg.L)
            walk_counts = list(counts.counts)
            log_holds = zeta.log_series_holds(reciprocal, counts)

        euler = euler_holds = None
        if cfg.L > zeta.EULER_LENGTH_CAP or arcs > zeta.EULER_ARC_CAP:
            notes.append(f"Euler product skipped: L={cfg.L}, {arcs} arcs above the prime-cycle caps")
            logging.warning("Euler product skipped for %s: L=%d, %d arcs", name, cfg.L, arcs)
        else:
            product = zeta.prime_cycle_product(g, cfg.L)
            euler = [float(c) for c in product.series]
            euler_holds = zeta.euler_product_holds(reciprocal, product)

        passed = residue <= 1e-9 and leading.holds and log_holds is not False and euler_holds is not False
        logging.info("Zeta identities on %s: %s", name, "hold" if passed else "fail")
        return ZetaReport(
            graph=name,
            vertex_count=g.vertex_count,
            edge_count=g.edge_count,
            degree=2 * g.edge_count // g.vertex_count,
            zeta_reciprocal=list(reciprocal.coefficients),
            bass_form=list(bass.coefficients),
            max_residue=residue,
            walk_counts=walk_counts,
            log_series_holds=log_holds,
            euler_product=euler,
            euler_product_holds=euler_holds,
            notes=notes,
            passed=passed,
        )

    def mko(self, cfg: RunConfig) -> tuple[MkoReport, walks.MkoSample]:
        if cfg.grid < MIN_MKO_GRID:
            raise ValueError(f"--grid must be at least {MIN_MKO_GRID}, got {cfg.grid}")
        mp = _mko_params(cfg)
        spectrum = walks.mko_closed_form(mp)
        sample = walks.mko_sample(mp, cfg.grid)
        points = sample.eigenvalues.ravel()
        max_distance = max(spectrum.distance(complex(z)) for z in points)
        unimodular = bool(np.all(np.abs(np.abs(points) - 1) <= UNIMODULAR_TOL))
        passed = max_distance <= walks.CONTAINMENT_TOL and (mp.gamma > 0 or unimodular)
        if not passed:
            logging.warning("MKO γ=%r: sampled eigenvalues off the closed form by %.3g", mp.gamma, max_distance)
        report = MkoReport(
            gamma=mp.gamma,
            phi=mp.phi,
            theta1=mp.theta1,
            theta2=mp.theta2,
            m_gamma=spectrum.m_gamma,
            M_gamma=spectrum.M_gamma,
            gamma0=mp.threshold(0),
            gamma1=mp.threshold(1),
            regime=spectrum.regime,
            circle_cos_interval=spectrum.circle_cos_interval,
            real_intervals=spectrum.real_intervals,
            grid=cfg.grid,
            max_distance=max_distance,
            unimodular=unimodular,
            passed=passed,
        )
        return report, sample

    def _correlated_row(self, g: Graph, k: int, p: float, tol: float) -> SweepRow:
        pair = walks.correlated_walk(g, p)
        params = CorrelatedParams(p=p, k=k)
        eigenvalues = linalg.eig_general(pair.U).eigenvalues
        common = {
            "parameter": p,
            "r": params.r,
            "circle_radius": math.sqrt(-pair.a * pair.b) if pair.a * pair.b < 0 else None,
            **_extrema(eigenvalues),
        }
        failing = pair.assumptions.failing()
        if failing and not pair.balanced:
            return SweepRow(skipped=True, reason=f"failing assumptions: {', '.join(failing)}", **common)
        reason = None
        try:
            report = spectral.verify_mapping(pair, tol)
            verdict = report.verdict if report.bounds.passed else Verdict.MISMATCH
            if report.mismatches:
                reason = "; ".join(report.mismatches)
        except ArithmeticError as e:
            verdict, reason = Verdict.MISMATCH, str(e)
        contained = walks.correlated_containment(params, eigenvalues, walks.CONTAINMENT_TOL)
        return SweepRow(verdict=verdict, reason=reason, contained=contained, **common)

    def _mko_row(self, cfg: RunConfig, gamma: float) -> SweepRow:
        mp = _mko_params(cfg, gamma)
        spectrum = walks.mko_closed_form(mp)
        points = walks.mko_sample(mp, max(cfg.grid, MIN_MKO_GRID)).eigenvalues.ravel()
        distance = max(spectrum.distance(complex(z)) for z in points)
        contained = distance <= walks.CONTAINMENT_TOL
        return SweepRow(
            parameter=gamma,
            circle_radius=1.0 if spectrum.circle_cos_interval is not None else None,
            regime=spectrum.regime,
            verdict=Verdict.MATCH if contained else Verdict.MISMATCH,
            reason=None if contained else f"sampled eigenvalue {distance:.3g} off the closed form",
            contained=contained,
            **_extrema(points),
        )

    async def sweep(self, cfg: RunConfig) -> SweepReport:
        model = _require(cfg.model, "--model")
        if model not in DEFAULT_SWEEP_RANGES:
            raise ValueError(f"Sweeps support {[m.value for m in DEFAULT_SWEEP_RANGES]}, got {model.value}")
        values = sweep_values(*(cfg.sweep_range or DEFAULT_SWEEP_RANGES[model]))
        logging.info("Sweeping %s over %d parameter points", model.value, len(values))
        name = None
        if model == ModelName.CORRELATED:
            g, name = self.load_graph(cfg)
            invariants = graph.graph_invariants(g)
            invariants.require_connected()
            k = invariants.require_regular(2)
            tasks = [asyncio.to_thread(self._correlated_row, g, k, v, cfg.tol) for v in values]
        else:
            tasks = [asyncio.to_thread(self._mko_row, cfg, v) for v in values]
        rows = await asyncio.gather(*tasks)
        return SweepReport(model=model, graph=name, rows=list(rows))

    def verify(self, cfg: RunConfig) -> VerifySummary:
        summary = suite.run_suite(
            seed=cfg.seed, tol=cfg.tol, random_pairs=cfg.random_pairs, random_graphs=cfg.random_graphs
        )
        if not summary.passed:
            logging.error("Verification failed at %s", summary.first_failure)
        return summary


def get_pipeline(loader_kind: str | None = None) -> SpectraPipeline:
    return SpectraPipeline(graph_loader.get_graph_loader(loader_kind))
