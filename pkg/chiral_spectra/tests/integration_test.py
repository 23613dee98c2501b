import json
import logging

import pytest

from . import config, utils
from .. import graph, spectral

QUARTER = str(config.QUARTER_TURN)


def test_spectrum_writes_json_and_csv(tmp_path, capsys):
    out = tmp_path / "k4.json"
    result = utils.run_cli(capsys, "spectrum", "--builtin", "k4", "--model", "grover", "--out", str(out))
    assert result.code == 0, result.stderr
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["verdict"] == "match"
    assert sum(atom["mult"] for atom in report["atoms"]) == 12
    csv_lines = (tmp_path / "k4.csv").read_text(encoding="utf-8").splitlines()
    assert csv_lines[0] == spectral.CSV_HEADER


def test_spectrum_correlated_to_stdout(capsys):
    result = utils.run_cli(capsys, "spectrum", "--builtin", "c4", "--model", "correlated", "--p", "0.75")
    assert result.code == 0, result.stderr
    logging.info(result.stdout)
    assert json.loads(result.stdout)["verdict"] == "match"


def test_spectrum_csv_format(capsys):
    result = utils.run_cli(
        capsys, "spectrum", "--model", "inhom-example", "--alpha", "0.6", "--beta-re", "0.8", "--ring", "6",
        "--format", "csv",
    )
    assert result.code == 0, result.stderr
    assert result.stdout.splitlines()[0] == spectral.CSV_HEADER


def test_spectrum_from_graph_file(tmp_path, capsys):
    path = utils.write_edge_list(tmp_path, "k33.txt", graph.builtin_graph("k33"))
    result = utils.run_cli(capsys, "spectrum", "--graph", path, "--model", "grover")
    assert result.code == 0, result.stderr


def test_invalid_input_exits_with_code_two(tmp_path, capsys):
    result = utils.run_cli(capsys, "spectrum", "--builtin", "c4", "--model", "grover")
    assert result.code == 2
    assert utils.error_payload(result)["code"] == 2

    broken = tmp_path / "broken.txt"
    broken.write_text("0 1\n1 x\n", encoding="utf-8")
    result = utils.run_cli(capsys, "spectrum", "--graph", str(broken), "--model", "grover")
    assert result.code == 2
    assert "line 2" in utils.error_payload(result)["data"]

    result = utils.run_cli(capsys, "zeta")
    assert result.code == 2


def test_missing_graph_file_is_invalid_input(tmp_path, capsys):
    missing = tmp_path / "absent" / "g.txt"
    result = utils.run_cli(capsys, "spectrum", "--graph", str(missing), "--model", "grover")
    assert result.code == 2
    payload = utils.error_payload(result)
    assert payload["code"] == 2
    assert payload["message"] == "Invalid input"
    assert "g.txt" in payload["data"]


def test_zeta_command(capsys):
    result = utils.run_cli(capsys, "zeta", "--builtin", "c3", "--L", "6")
    assert result.code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["zeta_reciprocal"] == [1, 0, 0, -2, 0, 0, 1]
    assert report["log_series_holds"] and report["euler_product_holds"]

    result = utils.run_cli(capsys, "zeta", "--builtin", "petersen", "--L", "3")
    assert result.code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["euler_product"] is None
    assert report["notes"]


def test_mko_command(tmp_path, capsys):
    result = utils.run_cli(capsys, "mko", "--theta1", QUARTER, "--theta2", QUARTER, "--grid", "512")
    assert result.code == 0, result.stderr
    report = json.loads(result.stdout)
    assert report["unimodular"]
    assert report["regime"] == "circle_only"

    out = tmp_path / "mko.json"
    result = utils.run_cli(
        capsys, "mko", "--gamma", "1.2", "--theta1", QUARTER, "--theta2", QUARTER, "--out", str(out)
    )
    assert result.code == 0, result.stderr
    assert json.loads(out.read_text(encoding="utf-8"))["regime"] == "real_only"
    csv_lines = (tmp_path / "mko.csv").read_text(encoding="utf-8").splitlines()
    assert csv_lines[0] == "xi,re1,im1,re2,im2"
    assert len(csv_lines) == 513


def test_mko_rejects_mismatched_coins(capsys):
    result = utils.run_cli(capsys, "mko", "--theta1", "0", "--theta2", QUARTER)
    assert result.code == 2
    result = utils.run_cli(capsys, "mko", "--theta1", QUARTER, "--theta2", QUARTER, "--builtin", "k4")
    assert result.code == 2


def test_sweep_commands(capsys):
    result = utils.run_cli(
        capsys, "sweep", "--builtin", "c4", "--model", "correlated", "--range", "0.25:0.75:0.25"
    )
    # p = 1/2 is skipped, which does not fail the sweep
    assert result.code == 0, result.stderr
    rows = json.loads(result.stdout)["rows"]
    assert [row["skipped"] for row in rows] == [False, True, False]

    result = utils.run_cli(
        capsys, "sweep", "--model", "mko", "--theta1", QUARTER, "--theta2", QUARTER, "--grid", "128",
        "--range", "0:1.5:0.5", "--format", "csv",
    )
    assert result.code == 0, result.stderr
    lines = result.stdout.splitlines()
    assert len(lines) == 5
    assert lines[0].startswith("parameter,skipped,verdict")


def test_sweep_rejects_malformed_range(capsys):
    with pytest.raises(SystemExit) as e:
        utils.run_cli(capsys, "sweep", "--model", "mko", "--range", "0:1")
    assert e.value.code == 2


def test_verify_command(tmp_path, capsys):
    out = tmp_path / "verify.json"
    args = ("verify", "--seed", str(config.TEST_SEED), "--random-pairs", "4", "--random-graphs", "2")
    result = utils.run_cli(capsys, *args, "--out", str(out))
    assert result.code == 0, result.stderr
    summary = json.loads(out.read_text(encoding="utf-8"))
    assert summary["passed"]
    assert summary["first_failure"] is None
    assert (tmp_path / "verify.csv").read_text(encoding="utf-8").startswith("name,passed,detail\n")

    result = utils.run_cli(capsys, *args, "--tol", "1e-20")
    assert result.code == 1
    summary = json.loads(result.stdout)
    assert not summary["passed"]
    assert summary["first_failure"] == "spectral.catalog_mapping"
