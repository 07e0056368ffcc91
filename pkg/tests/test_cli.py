import csv
import io
import json
import subprocess
import sys

import pytest

from ietlab.cli import main

EX3 = {"pi": [2, 4, 3, 1], "lengths": ["1/10", "3/20", "3/5", "3/20"]}
EX3_IRR = {
    "generators": {"names": ["1", "s2", "s3"],
                   "values": ["1", "1.4142135623730950488016887242096980785696718753769",
                              "1.7320508075688772935274463415058723669428052538104"]},
    "pi": [2, 4, 3, 1],
    "lengths": [["0", "1/10"], ["0", "0", "1/20"], ["1", "-2/5"], ["0", "3/10", "-1/20"]],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_rational(capsys):
    code, out, _ = run(capsys, "classify", "--json", json.dumps(EX3), "--depth", "2000")
    assert code == 0
    rep = json.loads(out)
    assert rep["genus"] == 2 and rep["verdict"] == "rich"
    assert rep["minimality"]["kind"] == "NonMinimalPeriodic"


def test_classify_independent(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text(json.dumps(EX3_IRR))
    out_path = tmp_path / "out.json"
    code, _, _ = run(capsys, "classify", "--input", str(path), "--depth", "3000", "--output", str(out_path))
    assert code == 0
    rep = json.loads(out_path.read_text())
    assert rep["verdict"] == "poor"
    assert rep["separatingCycle"] is not None
    assert rep["minimality"]["kind"] == "NoObstructionUpTo"


def test_reducible_permutation_exit_code(capsys):
    code, out, err = run(capsys, "classify", "--json", json.dumps({"pi": [1, 2], "lengths": ["1/2", "1/2"]}))
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "reducible"


def test_bad_input_exit_codes(capsys, tmp_path):
    assert run(capsys, "classify", "--json", "{not json")[0] == 2
    assert run(capsys, "classify", "--input", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "classify")[0] == 2
    assert run(capsys, "render", "--width", "0")[0] == 2
    assert run(capsys, "scan", "--nx", "-1")[0] == 2
    code, _, err = run(capsys, "classify", "--json", json.dumps({"pi": [2, 1], "lengths": ["1/2", "1/3"]}))
    assert code == 2 and json.loads(err)["type"] == "DomainError"


def test_config_file_sets_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"depth": 123, "power-cap": 4}))
    code, out, _ = run(capsys, "--config", str(cfg), "classify", "--json", json.dumps(EX3))
    assert code == 0
    rep = json.loads(out)
    assert rep["config"]["depth"] == 123 and rep["config"]["power_cap"] == 4
    # command-line values beat the config file
    code, out, _ = run(capsys, "--config", str(cfg), "classify", "--json", json.dumps(EX3), "--depth", "77")
    assert json.loads(out)["config"]["depth"] == 77
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert run(capsys, "--config", str(bad), "classify", "--json", json.dumps(EX3))[0] == 2


def test_empty_scan_is_header_only(capsys):
    code, out, _ = run(capsys, "scan", "--nx", "0", "--ny", "5")
    assert code == 0
    assert len(out.strip().splitlines()) == 1


def test_scan_csv_shape(capsys):
    code, out, _ = run(capsys, "scan", "--region", "example4slice", "--nx", "4", "--ny", "3", "--depth", "6")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert len(rows) == 1 + 12
    assert all(len(r) == len(rows[0]) for r in rows)


def test_render_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    svg = tmp_path / "a.svg"
    assert run(capsys, "render", "--width", "32", "--depth", "6", "--output", str(a), "--svg", str(svg))[0] == 0
    assert run(capsys, "render", "--width", "32", "--depth", "6", "--output", str(b), "--workers", "2")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_bytes().startswith(b"P5\n32 32\n255\n")
    assert "a.pgm" in svg.read_text()


def test_examples_write_outputs(tmp_path, capsys):
    code, _, _ = run(capsys, "examples", "--which", "2", "3", "--outdir", str(tmp_path),
                     "--depth", "2000", "--width", "16", "--render-depth", "4")
    assert code == 0
    ex2 = json.loads((tmp_path / "example2.json").read_text())
    assert ex2["cases"][0]["minimality"]["kind"] == "NonMinimalPeriodic"
    ex3 = json.loads((tmp_path / "example3.json").read_text())
    assert [c["verdict"] for c in ex3["cases"]] == ["rich", "poor"]
    assert (tmp_path / "example3.pgm").read_bytes().startswith(b"P5\n16 16\n")
    assert not (tmp_path / "example2.pgm").exists()


def test_examples_novak_pairings(tmp_path, capsys):
    assert run(capsys, "examples", "--which", "1", "--outdir", str(tmp_path), "--depth", "500")[0] == 0
    ex1 = json.loads((tmp_path / "example1.json").read_text())
    assert ex1["novakPairings"] == {str(k): str(k) for k in range(2, 7)}
    assert all(c["verdict"] == "poor" for c in ex1["cases"])


def test_gasket_trace_csv(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "gasket", "--point", "1/2,1/3,1/6", "--depth", "10", "--trace-csv", str(trace))
    assert code == 0
    rep = json.loads(out)
    assert rep["trace"]["kind"] in ("Escaped", "SurvivedDepth", "Starved")
    lines = trace.read_text().splitlines()
    assert lines[0] == "step,index,x1,x2,x3"
    assert len(lines) >= 2


def test_saf_and_rauzy(capsys):
    code, out, _ = run(capsys, "saf", "--json", json.dumps(EX3_IRR))
    assert code == 0 and json.loads(out)["zero"] is False
    code, out, _ = run(capsys, "rauzy", "--json", json.dumps(EX3_IRR), "--steps", "5")
    rep = json.loads(out)
    assert code == 0 and rep["safPreserved"] and len(rep["steps"]) == 5


def test_spi_commands(capsys):
    code, out, _ = run(capsys, "spi", "excess", "--arms", '[["0","1/2","1/2","1"],["0","1/2","1/2","1"]]')
    assert code == 0 and json.loads(out) == {"excess": ["0"], "balanced": True}
    code, out, _ = run(capsys, "spi", "family-k3", "--b", "1/10,9/25,27/50")
    assert code == 0 and json.loads(out)["pi"] == [3, 5, 7, 2, 6, 1, 4]
    code, out, _ = run(capsys, "spi", "suspend", "--b", "1/10,9/25,27/50")
    rep = json.loads(out)
    assert code == 0 and rep["fills"] and rep["pi"] == [3, 5, 7, 2, 6, 1, 4]
    assert run(capsys, "spi", "family-k3", "--b", "1/10,1/5,3/10")[0] == 2


def test_itm_command(capsys):
    code, out, _ = run(capsys, "itm", "type", "--lam", "1/2,1/2", "--t", "1/4,-1/4")
    rep = json.loads(out)
    assert code == 0 and rep["kind"] == "FiniteType" and rep["m"] == 1


def test_console_script_entry_point():
    res = subprocess.run([sys.executable, "-m", "ietlab.cli", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
