import json
import subprocess
import sys
import time

import pytest

from bratteli import fixtures
from bratteli.cli import main


def run(capsys, *argv):
    code = main([*argv, "--no-timestamp"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


@pytest.mark.parametrize("argv,code", [
    (["validate", "rotating_triple"], 0),
    (["telescope", "rotating_triple", "--levels", "0,2,4"], 0),
    (["words", "rotating_triple", "--from", "1", "--to", "3"], 0),
    (["language", "rotating_triple", "--horizon", "4"], 0),
    (["hgraph", "rotating_triple"], 0),
    (["hgraph", "rotating_triple_unsquared"], 1),
    (["balance", "staircase"], 0),
    (["balance", "binary_odometer"], 1),
    (["synthesize", "rotating_triple"], 0),
    (["synthesize", "rotating_triple_unsquared"], 1),
    (["verify", "rotating_triple"], 0),
    (["verify", "staircase"], 3),
    (["census", "class_a_two_components_thin"], 0),
    (["census", "class_a_two_components_wide"], 1),
    (["census", "class_a_three_components"], 2),
    (["infinitesimal", "two_path_aligned"], 0),
])
def test_exit_codes(capsys, argv, code):
    got, report = run(capsys, *argv)
    assert got == code
    assert report["exit_status"] == code
    assert report["schema_version"] == 1 and report["command"] == argv[0]
    assert "timestamp" not in report


def test_verify_report(capsys):
    _, report = run(capsys, "verify", "rotating_triple")
    assert report["verdict"]["status"] == "PERFECT_UP_TO_DEPTH"


def test_unsquared_witness(capsys):
    _, report = run(capsys, "synthesize", "rotating_triple_unsquared")
    assert "no path" in json.dumps(report)


def test_census_budget(capsys):
    code, report = run(capsys, "census", "class_a_three_components", "--budget", "200000")
    assert code in (0, 1)
    code, report = run(capsys, "census", "class_a_three_components", "--budget", "10")
    assert code == 2 and report["status"] == "BUDGET_EXCEEDED"


def test_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "validate", str(bad))[0] == 3
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 3
    shape = tmp_path / "shape.json"
    shape.write_text(json.dumps({"diagram": {"matrices": [[[1, 2]], [[1], [1]]]}}))
    assert run(capsys, "validate", str(shape))[0] == 3
    assert run(capsys, "validate")[0] == 3
    assert run(capsys, "synthesize", "rotating_triple", "--level", "99")[0] == 3


def test_piecewise_inputs(capsys, tmp_path):
    raw = fixtures.load_raw("rotating_triple")
    for part in ("diagram", "order", "skeleton"):
        (tmp_path / f"{part}.json").write_text(json.dumps(raw[part]))
    code, report = run(capsys, "verify", "--diagram", str(tmp_path / "diagram.json"),
                       "--order", str(tmp_path / "order.json"))
    assert code == 0 and report["verdict"]["status"] == "PERFECT_UP_TO_DEPTH"


@pytest.mark.parametrize("argv", [
    ["synthesize", "rotating_triple", "--all"],
    ["census", "class_a_two_components_wide"],
    ["hgraph", "rotating_triple", "--dot"],
])
def test_deterministic(capsys, argv):
    first = main([*argv, "--no-timestamp"]), capsys.readouterr().out
    second = main([*argv, "--no-timestamp"]), capsys.readouterr().out
    assert first == second


def test_out_dir(capsys, tmp_path):
    main(["synthesize", "rotating_triple", "--out", str(tmp_path), "--no-timestamp"])
    main(["hgraph", "rotating_triple", "--dot", "--out", str(tmp_path), "--no-timestamp"])
    main(["census", "class_a_two_components_thin", "--out", str(tmp_path), "--no-timestamp"])
    assert capsys.readouterr().out == ""
    names = {p.name for p in tmp_path.iterdir()}
    assert {"synthesize.json", "hgraph.json", "census.json", "census.jsonl"} <= names
    assert any(n.startswith("trace_L") for n in names)
    dots = [p for p in tmp_path.iterdir() if p.suffix == ".dot"]
    assert dots and all(p.read_text().startswith("digraph") for p in dots)
    for line in (tmp_path / "census.jsonl").read_text().splitlines():
        json.loads(line)
    assert not [p for p in tmp_path.iterdir() if p.suffix == ".tmp"]


def test_timestamp_present(capsys):
    main(["validate", "staircase"])
    assert "timestamp" in json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("name", fixtures.names())
def test_fixture_runs_fast(capsys, name):
    for cmd in ("validate", "synthesize", "verify", "infinitesimal"):
        t = time.perf_counter()
        main([cmd, name, "--no-timestamp"])
        assert time.perf_counter() - t < 1.0, cmd
    capsys.readouterr()


def test_console_entry():
    out = subprocess.run([sys.executable, "-m", "bratteli", "verify", "rotating_triple", "--no-timestamp"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["verdict"]["status"] == "PERFECT_UP_TO_DEPTH"
