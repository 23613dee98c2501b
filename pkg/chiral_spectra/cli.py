import argparse
import asyncio
import io
import json
import logging
import os
import sys

from chiral_spectra import config, spectral
from chiral_spectra.errors import VerificationError
from chiral_spectra.models import (
    Command,
    MkoReport,
    ModelName,
    OutputFormat,
    RunConfig,
    SweepReport,
    Verdict,
    VerifySummary,
    ZetaReport,
)
from chiral_spectra.pipeline import get_pipeline
from chiral_spectra.walks import MkoSample


def _range(text: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:STOP:STEP, got {text!r}") from None
    return start, stop, step


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--graph", dest="graph_path", help="edge-list file")
    source.add_argument("--builtin", help="catalog graph: k4, k5, k33, petersen, cN, edge")
    common.add_argument("--model", choices=[m.value for m in ModelName])
    for name in ("p", "a", "b", "theta1", "theta2", "alpha"):
        common.add_argument(f"--{name}", type=float)
    common.add_argument("--gamma", type=float, default=0.0)
    common.add_argument("--phi", type=float, default=0.0)
    common.add_argument("--beta-re", type=float, default=0.0)
    common.add_argument("--beta-im", type=float, default=0.0)
    common.add_argument("--ring", type=int, default=8, help="ring size N for the ring models")
    common.add_argument("--state-angle", type=float, default=0.0)
    common.add_argument("--state-phase", type=float, default=0.0)
    common.add_argument("--grid", type=int, default=512)
    common.add_argument("--L", type=int, default=6, help="walk length / series order")
    common.add_argument("--tol", type=float, default=config.TOL)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--random-pairs", type=int, default=100)
    common.add_argument("--random-graphs", type=int, default=50)
    common.add_argument("--range", dest="sweep_range", type=_range, help="START:STOP:STEP, inclusive")
    common.add_argument("--out", help="output path; JSON reports also get a sibling .csv")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)

    parser = argparse.ArgumentParser(
        prog="chiral-spectra",
        description="Point spectra of chiral-symmetric evolutions U = SC and their verification",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser(Command.SPECTRUM.value, parents=[common], help="predict and verify σ(U)")
    commands.add_parser(Command.ZETA.value, parents=[common], help="Ihara zeta identities")
    commands.add_parser(Command.MKO.value, parents=[common], help="gain/loss walk band structure")
    commands.add_parser(Command.SWEEP.value, parents=[common], help="parameter sweep")
    commands.add_parser(Command.VERIFY.value, parents=[common], help="run the invariant suite")
    return parser


def _csv_number(x: float | None) -> str:
    return "" if x is None else f"{x:.17g}"


def _zeta_csv(report: ZetaReport) -> str:
    out = io.StringIO()
    out.write("power,zeta_reciprocal,bass_form\n")
    size = max(len(report.zeta_reciprocal), len(report.bass_form))
    for power in range(size):
        lhs = report.zeta_reciprocal[power] if power < len(report.zeta_reciprocal) else 0.0
        rhs = report.bass_form[power] if power < len(report.bass_form) else 0.0
        out.write(f"{power},{_csv_number(lhs)},{_csv_number(rhs)}\n")
    return out.getvalue()


def _mko_csv(sample: MkoSample) -> str:
    out = io.StringIO()
    out.write("xi,re1,im1,re2,im2\n")
    for xi, (z1, z2) in zip(sample.xi, sample.eigenvalues):
        out.write(",".join(_csv_number(float(v)) for v in (xi, z1.real, z1.imag, z2.real, z2.imag)) + "\n")
    return out.getvalue()


SWEEP_COLUMNS = (
    "parameter", "skipped", "verdict", "contained", "min_modulus", "max_modulus",
    "min_real", "max_real", "r", "circle_radius", "regime", "reason",
)


def _sweep_csv(report: SweepReport) -> str:
    out = io.StringIO()
    out.write(",".join(SWEEP_COLUMNS) + "\n")
    for row in report.rows:
        cells = []
        for column in SWEEP_COLUMNS:
            value = getattr(row, column)
            if isinstance(value, float):
                cells.append(_csv_number(value))
            elif value is None:
                cells.append("")
            elif isinstance(value, bool):
                cells.append(str(value).lower())
            elif hasattr(value, "value"):
                cells.append(value.value)
            else:
                # reasons may contain commas
                cells.append(json.dumps(str(value)))
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def _verify_csv(summary: VerifySummary) -> str:
    out = io.StringIO()
    out.write("name,passed,detail\n")
    for result in summary.checks:
        out.write(f"{result.name},{str(result.passed).lower()},{json.dumps(result.detail)}\n")
    return out.getvalue()


def _emit(cfg: RunConfig, report_json: str, csv_text: str) -> None:
    if cfg.format == OutputFormat.CSV:
        payload = csv_text
    else:
        payload = report_json + "\n"
    if cfg.out is None:
        sys.stdout.write(payload)
        return
    with open(cfg.out, "w", encoding="utf-8") as f:
        f.write(payload)
    if cfg.format == OutputFormat.JSON:
        sibling = os.path.splitext(cfg.out)[0] + ".csv"
        with open(sibling, "w", encoding="utf-8") as f:
            f.write(csv_text)
    logging.info("Wrote %s report to %s", cfg.command.value, cfg.out)


def run(cfg: RunConfig) -> int:
    pipeline = get_pipeline()
    match cfg.command:
        case Command.SPECTRUM:
            report = pipeline.spectrum(cfg)
            _emit(cfg, report.model_dump_json(indent=2), spectral.spectrum_csv(report))
            ok = report.verdict == Verdict.MATCH and report.bounds is not None and report.bounds.passed
        case Command.ZETA:
            report = pipeline.zeta(cfg)
            _emit(cfg, report.model_dump_json(indent=2), _zeta_csv(report))
            ok = report.passed
        case Command.MKO:
            report, sample = pipeline.mko(cfg)
            _emit(cfg, report.model_dump_json(indent=2), _mko_csv(sample))
            ok = report.passed
        case Command.SWEEP:
            report = asyncio.run(pipeline.sweep(cfg))
            _emit(cfg, report.model_dump_json(indent=2), _sweep_csv(report))
            ok = all(
                row.skipped or (row.verdict == Verdict.MATCH and row.contained is not False)
                for row in report.rows
            )
        case Command.VERIFY:
            report = pipeline.verify(cfg)
            _emit(cfg, report.model_dump_json(indent=2), _verify_csv(report))
            ok = report.passed
        case _:
            raise ValueError(f"Unsupported command: {cfg.command}")
    if not ok:
        logging.error("Command %s did not verify", cfg.command.value)
    return 0 if ok else 1


def _error_exit(code: int, message: str, exc: BaseException) -> int:
    logging.error("%s: %s", message, exc)
    sys.stderr.write(json.dumps({"code": code, "message": message, "data": str(exc)}) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=config.LOG_LEVEL, stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**vars(args))
        return run(cfg)
    except ValueError as e:
        return _error_exit(2, "Invalid input", e)
    except (VerificationError, ArithmeticError) as e:
        return _error_exit(1, "Verification failed", e)
    except Exception as e:
        return _error_exit(1, "Internal error", e)
