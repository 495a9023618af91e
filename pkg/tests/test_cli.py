import json

import pytest

from rcgen.cli import main

GRID = ["--grid", "4:13"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_radius_of_geometric(capsys):
    code, rep = run_cli(capsys, "radius", "--family", "geometric", *GRID)
    assert code == 0
    assert rep["status"] == "finite"
    assert rep["horizon"]["grid"] == "eps=2^-k, k=4..13"


def test_classify_exponential_by_ratio(capsys):
    code, rep = run_cli(capsys, "classify", "--family", "exp", "--z", "1", "--test", "ratio", *GRID)
    assert code == 0
    assert rep["status"] == "converges_absolutely"


def test_negative_expression_argument_is_glued(capsys):
    code, rep = run_cli(capsys, "sum", "--family", "exp", "--z", "-1", *GRID, "--expect", "converges")
    assert code == 0
    assert rep["contract_ok"]


def test_contract_mismatch_exits_one(capsys):
    code, rep = run_cli(capsys, "sum", "--family", "geometric", "--k", "2", *GRID, "--expect", "converges")
    assert code == 1
    assert not rep["contract_ok"]


def test_hft_csv(capsys, tmp_path):
    csv = tmp_path / "t.csv"
    code, rep = run_cli(capsys, "hft", "--f", "delta", "--omega", "0,1", "--grid", "4:8", "--csv", str(csv))
    assert code == 0
    lines = csv.read_text().splitlines()
    assert lines[0] == "k,eps,omega,abs,re,im,radius"
    assert len(lines) == 1 + 2 * 3


SPEC = """\
grid: "4:10"
objects:
  g: {kind: series, family: geometric, k: "1/2"}
  d: {kind: gsf, family: delta}
tasks:
  - {op: sum, name: geo, series: "@g", expect: converges, out: geo.json}
  - {op: pw, name: pwd, f: "@d", out: pw.json, needs: [geo]}
"""


def test_run_spec(capsys, tmp_path):
    spec = tmp_path / "spec.yaml"
    spec.write_text(SPEC)
    code, summary = run_cli(capsys, "run", str(spec))
    assert code == 0
    assert [t["status"] for t in summary["tasks"]][0] == "converges"
    pw = json.loads((tmp_path / "pw.json").read_text())
    assert pw["result"]["is_ghf"]
    assert pw["result"]["exp_type_ok"]
    assert pw["result"]["cr_max_residual"] == 0.0
    assert json.loads((tmp_path / "geo.json").read_text())["status"] == "converges"


def test_run_is_deterministic(capsys, tmp_path):
    spec = tmp_path / "spec.yaml"
    spec.write_text(SPEC)
    run_cli(capsys, "run", str(spec))
    first = (tmp_path / "pw.json").read_bytes()
    run_cli(capsys, "run", str(spec))
    assert (tmp_path / "pw.json").read_bytes() == first


@pytest.mark.parametrize("text", ["tasks: [{op: nope, name: x}]\n", "tasks: [{op: sum, name: x, series: '@missing'}]\n",
                                  "tasks: [\n"])
def test_malformed_spec_exits_two(capsys, tmp_path, text):
    spec = tmp_path / "bad.yaml"
    spec.write_text(text)
    assert main(["run", str(spec)]) == 2


def test_unknown_flag_exits_two(capsys):
    assert main(["radius", "--bogus"]) == 2


def test_report_aggregates(capsys, tmp_path):
    spec = tmp_path / "spec.yaml"
    spec.write_text(SPEC)
    run_cli(capsys, "run", str(spec), "--out", str(tmp_path / "summary.json"))
    code, rep = run_cli(capsys, "report", str(tmp_path / "summary.json"))
    assert code == 0
    assert [e["task"] for e in rep["entries"]] == ["geo", "pwd"]
