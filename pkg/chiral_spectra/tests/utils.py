import json
from typing import Any, NamedTuple

import numpy as np

from .. import chiral, cli, graph
from ..models import ChiralPair, Graph


class CliResult(NamedTuple):
    code: int
    stdout: str
    stderr: str


def minimal_pair() -> ChiralPair:
    """S swaps two sites, d picks the first; T = [0] and the atoms are ±√2."""
    return chiral.build_chiral_pair([[0, 1], [1, 0]], [[1, 0]], 2.0, 1.0, label="minimal")


def write_edge_list(directory, name: str, g: Graph) -> str:
    path = directory / name
    path.write_text(graph.format_edge_list(g), encoding="utf-8")
    return str(path)


def run_cli(capsys, *args: str) -> CliResult:
    code = cli.main(list(args))
    captured = capsys.readouterr()
    return CliResult(code, captured.out, captured.err)


def error_payload(result: CliResult) -> dict[str, Any]:
    last = [line for line in result.stderr.splitlines() if line.startswith("{")][-1]
    return json.loads(last)


def sorted_values(values) -> np.ndarray:
    z = np.asarray(values, dtype=np.complex128).ravel()
    return z[np.lexsort((np.round(z.imag, 8), np.round(z.real, 8)))]
