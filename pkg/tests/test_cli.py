"""CLI contract: exit codes, deterministic reports, eval subcommand."""

import json
import subprocess
import sys

import pytest

from spinorkit.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_single_suite_passes(capsys):
    code, out, err = run_cli(
        ["check", "--suite", "pauli", "--seed", "3", "--trials", "10"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload == {"failures": [], "seed": 3, "suite": "pauli", "trials": 10}
    assert "[pauli]" in err


def test_check_all_aggregates_sections(capsys):
    code, out, _ = run_cli(
        ["check", "--suite", "all", "--seed", "7", "--trials", "5"], capsys
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["seed"] == 7 and payload["trials"] == 5
    names = [s["suite"] for s in payload["suites"]]
    assert names == sorted(names)
    assert "clifford" in names and "car-ccr" in names
    assert all(s["failures"] == [] for s in payload["suites"])


def test_check_is_byte_deterministic(capsys):
    args = ["check", "--suite", "fn-bracket", "--seed", "11", "--trials", "15"]
    _, out1, _ = run_cli(args, capsys)
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2


def test_check_deterministic_under_threads(capsys, monkeypatch):
    args = ["check", "--suite", "clifford", "--seed", "5", "--trials", "24"]
    _, serial, _ = run_cli(args, capsys)
    monkeypatch.setenv("SPINORKIT_THREADS", "4")
    _, threaded, _ = run_cli(args, capsys)
    assert serial == threaded


def test_unknown_suite_is_usage_error(capsys):
    code, _, err = run_cli(
        ["check", "--suite", "nonsense", "--seed", "1", "--trials", "1"], capsys
    )
    assert code == 2
    assert "unknown suite" in err


def test_nonpositive_trials_is_usage_error(capsys):
    code, _, _ = run_cli(
        ["check", "--suite", "pauli", "--seed", "1", "--trials", "0"], capsys
    )
    assert code == 2


def test_json_file_matches_stdout(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run_cli(
        ["check", "--suite", "adjunction", "--seed", "2", "--trials", "8",
         "--json", str(path)],
        capsys,
    )
    assert code == 0
    assert path.read_text() == out


def test_eval_reads_file_and_stdin(tmp_path, capsys):
    script = tmp_path / "prog.txt"
    script.write_text("g( e1*eb1, e2*eb2 )\n")
    code, out, _ = run_cli(["eval", str(script)], capsys)
    assert code == 0 and out == "1\n"

    proc = subprocess.run(
        [sys.executable, "-m", "spinorkit.cli", "eval", "-"],
        input="(1+i)*(1-i)\n",
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "2\n"


def test_eval_parse_error_exit_code(tmp_path, capsys):
    script = tmp_path / "bad.txt"
    script.write_text("g( e1*eb1\n")
    code, _, err = run_cli(["eval", str(script)], capsys)
    assert code == 2
    assert "error:" in err and "1:" in err


def test_eval_missing_file(capsys):
    code, _, err = run_cli(["eval", "/no/such/file.dsl"], capsys)
    assert code == 2
    assert "error" in err


def test_property_failure_exit_code(monkeypatch, capsys):
    # force a failing suite to check the exit-code contract end to end
    import spinorkit.suites as suites

    def broken(seed, trials):
        return [{"trial": 0, "input": "x", "expected": "0", "got": "1"}]

    monkeypatch.setitem(suites.SUITES, "pauli", broken)
    code, out, _ = run_cli(
        ["check", "--suite", "pauli", "--seed", "1", "--trials", "1"], capsys
    )
    assert code == 1
    payload = json.loads(out)
    assert payload["failures"] and payload["failures"][0]["got"] == "1"
