import math
from unittest.mock import patch

import pytest

from . import config
from .. import graph_loader, pipeline, suite
from ..errors import AssumptionError
from ..models import Command, ModelName, MkoRegime, RunConfig, Verdict

pytest_plugins = ("pytest_asyncio",)


def make_config(command: Command, **kwargs) -> RunConfig:
    return RunConfig(command=command, **kwargs)


def test_get_pipeline():
    platform = pipeline.get_pipeline()
    assert isinstance(platform, pipeline.SpectraPipeline)
    assert isinstance(platform.loader, graph_loader.GraphLoader)
    assert isinstance(pipeline.get_pipeline("FILE").loader, graph_loader.FileGraphLoader)


def test_sweep_values_are_inclusive():
    assert pipeline.sweep_values(0, 1, 0.25) == [0, 0.25, 0.5, 0.75, 1.0]
    assert pipeline.sweep_values(0, 1, 0.1)[-1] == 1.0
    assert len(pipeline.sweep_values(0, 2, 0.2)) == 11
    with pytest.raises(ValueError):
        pipeline.sweep_values(0, 1, 0)
    with pytest.raises(ValueError):
        pipeline.sweep_values(1, 0, 0.1)


def test_run_config_graph_source():
    with pytest.raises(ValueError):
        make_config(Command.ZETA)
    with pytest.raises(ValueError):
        make_config(Command.SPECTRUM, model=ModelName.GROVER, builtin="k4", graph_path="k4.txt")
    with pytest.raises(ValueError):
        make_config(Command.MKO, builtin="k4", theta1=0.5, theta2=0.5)


def test_spectrum_models():
    platform = pipeline.get_pipeline()
    report = platform.spectrum(make_config(Command.SPECTRUM, model=ModelName.GROVER, builtin="k4"))
    assert report.verdict == Verdict.MATCH
    assert report.model == "grover"

    hom = make_config(
        Command.SPECTRUM, model=ModelName.HOM_EXAMPLE, p=0.6, a=2.0, b=0.5, ring=6, state_angle=math.pi / 4
    )
    assert platform.spectrum(hom).verdict == Verdict.MATCH

    inhom = make_config(Command.SPECTRUM, model=ModelName.INHOM_EXAMPLE, alpha=0.6, beta_re=0.8, ring=6)
    assert platform.spectrum(inhom).verdict == Verdict.MATCH


def test_spectrum_rejects_missing_or_invalid_parameters():
    platform = pipeline.get_pipeline()
    with pytest.raises(ValueError):
        platform.spectrum(make_config(Command.SPECTRUM, model=ModelName.CORRELATED, builtin="c4"))
    with pytest.raises(ValueError):
        platform.spectrum(make_config(Command.SPECTRUM, model=ModelName.GROVER, builtin="c4"))
    with pytest.raises(AssumptionError):
        platform.spectrum(make_config(Command.SPECTRUM, model=ModelName.CORRELATED, builtin="c4", p=0.5))


def test_zeta_report():
    platform = pipeline.get_pipeline()
    report = platform.zeta(make_config(Command.ZETA, builtin="c3", L=6))
    assert report.passed
    assert report.zeta_reciprocal == [1, 0, 0, -2, 0, 0, 1]
    assert report.walk_counts == [0, 0, 6, 0, 0, 6]
    assert report.euler_product == [1, 0, 0, 2, 0, 0, 3]

    report = platform.zeta(make_config(Command.ZETA, builtin="petersen", L=3))
    assert report.passed
    assert report.euler_product is None
    assert any("Euler product skipped" in note for note in report.notes)


def test_mko_report():
    platform = pipeline.get_pipeline()
    report, sample = platform.mko(
        make_config(Command.MKO, gamma=1.2, theta1=config.QUARTER_TURN, theta2=config.QUARTER_TURN, grid=128)
    )
    assert report.passed
    assert report.regime == MkoRegime.REAL_ONLY
    assert report.gamma1 == pytest.approx(0.8814, abs=1e-4)
    assert sample.eigenvalues.shape == (128, 2)

    report, _ = platform.mko(
        make_config(Command.MKO, theta1=config.QUARTER_TURN, theta2=config.QUARTER_TURN, grid=512)
    )
    assert report.unimodular
    assert report.regime == MkoRegime.CIRCLE_ONLY

    with pytest.raises(ValueError):
        platform.mko(make_config(Command.MKO, theta1=config.QUARTER_TURN, theta2=config.QUARTER_TURN, grid=32))
    with pytest.raises(ValueError):
        platform.mko(make_config(Command.MKO, theta1=0.0, theta2=config.QUARTER_TURN))


@pytest.mark.asyncio
async def test_correlated_sweep():
    platform = pipeline.get_pipeline()
    cfg = make_config(Command.SWEEP, model=ModelName.CORRELATED, builtin="c4", sweep_range=(0.0, 1.0, 0.25))
    report = await platform.sweep(cfg)
    assert [row.parameter for row in report.rows] == [0, 0.25, 0.5, 0.75, 1.0]
    for row in report.rows:
        assert row.r == pytest.approx(abs(2 * row.parameter - 1))
        assert row.max_modulus is not None
    skipped = {row.parameter: row for row in report.rows if row.skipped}
    # b = 0 at p = 1/k and a = b at p = 1; p = 0 is balanced and kept
    assert set(skipped) == {0.5, 1.0}
    assert "ab_nonzero" in skipped[0.5].reason
    assert "a_neq_pm_b" in skipped[1.0].reason
    for row in report.rows:
        if not row.skipped:
            assert row.contained
            if row.parameter < 0.5:
                assert row.circle_radius == pytest.approx(math.sqrt(1 - 2 * row.parameter))
            else:
                assert row.circle_radius is None
    for row in report.rows:
        if row.parameter in (0.25, 0.75):
            assert row.verdict == Verdict.MATCH, row.reason


@pytest.mark.asyncio
async def test_mko_sweep_regimes():
    platform = pipeline.get_pipeline()
    cfg = make_config(
        Command.SWEEP, model=ModelName.MKO, theta1=config.QUARTER_TURN, theta2=config.QUARTER_TURN, grid=128
    )
    report = await platform.sweep(cfg)
    assert len(report.rows) == 11
    regimes = [row.regime for row in report.rows]
    assert regimes[0] == MkoRegime.CIRCLE_ONLY
    assert MkoRegime.MIXED in regimes
    assert regimes[-1] == MkoRegime.REAL_ONLY
    # circle, then mixed, then real: the transitions never go back
    order = [MkoRegime.CIRCLE_ONLY, MkoRegime.MIXED, MkoRegime.REAL_ONLY]
    assert [order.index(r) for r in regimes] == sorted(order.index(r) for r in regimes)
    assert all(row.contained for row in report.rows)


@pytest.mark.asyncio
async def test_sweep_rejects_unsupported_model():
    platform = pipeline.get_pipeline()
    with pytest.raises(ValueError):
        await platform.sweep(make_config(Command.SWEEP, model=ModelName.GROVER, builtin="k4"))


def test_verify_delegates_to_suite():
    platform = pipeline.get_pipeline()
    cfg = make_config(Command.VERIFY, seed=3, tol=1e-6, random_pairs=4, random_graphs=2)
    with patch.object(suite, "run_suite", wraps=suite.run_suite) as mock_run_suite, patch.object(
        suite, "CHECKS", suite.CHECKS[:2]
    ):
        summary = platform.verify(cfg)
        mock_run_suite.assert_called_once_with(seed=3, tol=1e-6, random_pairs=4, random_graphs=2)
    assert summary.passed
    assert [check.name for check in summary.checks] == ["graph.arc_structure", "graph.bipartite_spectrum"]
