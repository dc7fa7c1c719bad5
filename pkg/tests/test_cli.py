import json

import pytest

from src.cli import ExitCode
from src.main import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_corpus(capsys):
    code, out, _ = run(capsys, "check")
    assert code == ExitCode.OK
    assert "ok NonDetFSM" in out.splitlines()
    assert "ok PruneAndParallelize" in out.splitlines()


def test_check_reports_syntax_errors(capsys, tmp_path):
    bad = tmp_path / "bad.4ml"
    bad.write_text("domain D {\n  State ::= new (id Integer).\n}\n", encoding="utf-8")
    code, _, err = run(capsys, "check", str(bad))
    assert code == ExitCode.ERROR
    assert f"{bad}:2:" in err
    code, out, _ = run(capsys, "check", str(bad), "--json")
    assert code == ExitCode.ERROR
    (diagnostic,) = json.loads(out)
    assert diagnostic["code"] == "syntax"
    assert diagnostic["line"] == 2


def test_conform_exit_codes(capsys):
    code, out, _ = run(capsys, "conform", "OneStateMach")
    assert code == ExitCode.OK
    assert out.splitlines()[0] == "OneStateMach conforms to NonDetFSM"
    code, out, _ = run(capsys, "conform", "BadMach")
    assert code == ExitCode.NONCONFORMING
    assert out.splitlines()[0] == "BadMach does not conform to NonDetFSM"
    assert "witness: Init(State(100))" in out
    assert sum("[FAIL]" in line for line in out.splitlines()) == 1


def test_conform_json(capsys):
    code, out, _ = run(capsys, "conform", "CntrMach", "--json")
    assert code == ExitCode.OK
    report = json.loads(out)
    assert report["version"] == 1
    assert report["module"] == "DetFSMWithActions"
    assert report["conforms"] is True
    assert len(report["clauses"]) == 6


def test_apply_prune(capsys):
    code, out, _ = run(capsys, "apply", "Prune", "TwoStateMach")
    assert code == ExitCode.OK
    assert out.startswith("model out of NonDetFSM {")
    assert "   Trans(State(2), Event(\"foo\"), State(2))." in out.splitlines()


def test_apply_requires_failure(capsys):
    code, _, err = run(capsys, "apply", "Prune", "BadMach")
    assert code == ExitCode.REQUIRES
    assert "requires failed" in err


def test_apply_system_writes_files(capsys, tmp_path):
    code, out, _ = run(capsys, "apply", "PruneAndParallelize", "TwoStateMach", "OneStateMach", "-o", str(tmp_path))
    assert code == ExitCode.OK
    assert (tmp_path / "out.4ml").read_text(encoding="utf-8").startswith("model out of ParallelFSMs {")
    assert out.strip() == f"wrote {tmp_path / 'out.4ml'}"


def test_run_with_intermediates(capsys, tmp_path):
    outputs, steps = tmp_path / "out", tmp_path / "steps"
    code, _, _ = run(capsys, "run", "PruneAndParallelize", "in1=TwoStateMach", "in2=OneStateMach",
                     "-o", str(outputs), "--keep-intermediates", str(steps))
    assert code == ExitCode.OK
    assert (outputs / "out.4ml").exists()
    assert sorted(p.name for p in steps.iterdir()) == ["in1.4ml", "in2.4ml", "out.4ml", "prune1.4ml", "prune2.4ml"]


def test_run_rejects_malformed_binding(capsys):
    code, _, err = run(capsys, "run", "PruneAndParallelize", "in1")
    assert code == ExitCode.ERROR
    assert "label=Model" in err


def test_symbols_listing(capsys, fixtures_dir):
    expected = (fixtures_dir / "parallel_cntrs_symbols.txt").read_text(encoding="utf-8").splitlines()
    code, out, _ = run(capsys, "symbols", "ParallelCntrs")
    assert code == ExitCode.OK
    assert out.splitlines() == expected
    code, out, _ = run(capsys, "symbols", "ParallelCntrs", "--json")
    data = json.loads(out)
    assert data["module"] == "ParallelCntrs"
    assert len(data["symbols"]) == len(expected)


@pytest.mark.parametrize("goal, code, lines", [
    ("Reach(x)", ExitCode.OK, ["x = State(1)", "x = State(2)"]),
    ("Init(State(1))", ExitCode.OK, ["yes"]),
    ("Reach(State(9))", ExitCode.ERROR, ["no"]),
])
def test_query(capsys, goal, code, lines):
    result, out, _ = run(capsys, "query", "TwoStateMach", goal)
    assert result == code
    assert out.splitlines() == lines


def test_query_json(capsys):
    code, out, _ = run(capsys, "query", "TwoStateMach", "Reach(x)", "--json")
    assert code == ExitCode.OK
    assert json.loads(out)["bindings"] == [{"x": "State(1)"}, {"x": "State(2)"}]


def test_unknown_module(capsys):
    code, _, err = run(capsys, "conform", "Nowhere")
    assert code == ExitCode.ERROR
    assert "unknown module Nowhere" in err


def test_sample_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "sample", "--states", "3", "--events", "2", "--seed", "5", "--name", "Tiny")
    assert code == ExitCode.OK
    assert out.startswith("model Tiny of NonDetFSM {")
    path = tmp_path / "tiny.4ml"
    code, _, _ = run(capsys, "sample", "--states", "3", "--events", "2", "--seed", "5", "--name", "Tiny",
                     "-o", str(path))
    assert code == ExitCode.OK
    assert path.read_text(encoding="utf-8").rstrip("\n") == out.rstrip("\n")
    code, _, _ = run(capsys, "conform", "Tiny", "--corpus", "-I", str(path))
    assert code == ExitCode.OK
