import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from ldc.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"

C1 = ["check", "programs/c1.ldc", "--algebra", "lattice:diamond.lat", "--grade", "bot"]
C2 = ["check", "programs/c2.ldc", "--algebra", "lattice:diamond.lat", "--grade", "bot"]
HEAP = ["heap", "programs/x1true.hp", "programs/var.ldc", "--grade", "1"]
UNFAIR = ["check", "programs/unfair.ldc", "--algebra", "lin3", "--grade", "1"]


@pytest.fixture
def cli(monkeypatch):
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("LDC_FUEL", raising=False)
    runner = CliRunner()

    def invoke(args, **kw):
        return runner.invoke(main, args, catch_exceptions=False, **kw)
    return invoke


def records(output):
    return [json.loads(line) for line in output.splitlines() if line.strip()]


def test_c1_accepted(cli):
    res = cli(C1)
    assert res.exit_code == 0, res.output
    assert "ACCEPT" in res.output


def test_c2_accepted(cli):
    assert cli(C2).exit_code == 0


def test_heap_run_final_heap(cli):
    res = cli(HEAP)
    assert res.exit_code == 0, res.output
    assert "final heap:\n  x ^0 = true" in res.output


def test_unfair_rejected_with_rule(cli):
    res = cli(UNFAIR)
    assert res.exit_code == 1
    assert "ST-LamOmega" in res.output


def test_header_prints_defaults(cli):
    out = records(cli(["check", "programs/var.ldc", "--expected", "Unit", "--format", "structured"]).output)
    assert out[0]["algebra"] == "nat-exact" and out[0]["pts"] == "type-in-type" and out[0]["fuel"] == 10000


def test_env_fuel(cli):
    out = records(cli(UNFAIR + ["--format", "structured"], env={"LDC_FUEL": "77"}).output)
    assert out[0]["fuel"] == 77
    out = records(cli(UNFAIR + ["--format", "structured", "--fuel", "5"], env={"LDC_FUEL": "77"}).output)
    assert out[0]["fuel"] == 5


@pytest.mark.parametrize("args", [
    ["check", "programs/var.ldc", "--grade", "banana"],
    ["check", "programs/var.ldc", "--algebra", "nope"],
    ["check", "programs/missing.ldc"],
    ["check", "programs/var.ldc", "--fuel", "0"],
    ["frobnicate"],
])
def test_misuse_exits_2(cli, args):
    assert cli(args).exit_code == 2


def test_parse_error_is_misuse(cli, tmp_path):
    bad = tmp_path / "bad.ldc"
    bad.write_text(r"\^1 x:A. (x")
    assert cli(["check", str(bad)]).exit_code == 2


def test_eval_trace(cli, tmp_path):
    prog = tmp_path / "p.ldc"
    prog.write_text(r"(\^1 x:Bool. if x then false else true) true ^1")
    res = cli(["eval", str(prog)])
    assert res.exit_code == 0
    assert "AppBeta" in res.output and "VALUE" in res.output and "term=false" in res.output


def test_eval_stuck(cli, tmp_path):
    prog = tmp_path / "p.ldc"
    prog.write_text(r"(\^1 x:Bool. x) true ^0")
    assert cli(["eval", str(prog)]).exit_code == 1


def test_pts_check(cli, tmp_path):
    prog = tmp_path / "id.ldc"
    prog.write_text("type: Pi x:^0 *. Pi y:^1 x. x\n\\^0 x:*. \\^1 y:x. y\n")
    assert cli(["check", str(prog), "--pts", "system-f"]).exit_code == 0
    res = cli(["check", str(prog), "--pts", "stlc"])
    assert res.exit_code == 1 and "PTS-Pi" in res.output
    assert cli(["check", str(prog)]).exit_code == 0


def test_translate_lnl(cli):
    res = cli(["translate-lnl", "programs/lnl_corpus.lnl", "--format", "structured"])
    assert res.exit_code == 0
    final = records(res.output)[-1]
    assert final["verdict"] == "ACCEPT" and final["judgments"] >= 20 and final["pairs"] >= 5


def test_oracle_small(cli, tmp_path):
    ledger = tmp_path / "ledger.txt"
    res = cli(["oracle", "--algebra", "lin3", "--max-size", "3", "--ledger", str(ledger)])
    assert res.exit_code == 0
    assert ledger.read_text().startswith("# lin3, size <= 3: 0 acceptance-only")


def test_algebra_verify_m3_witness(cli):
    res = cli(["algebra-verify", "lattice:m3"])
    assert res.exit_code == 0
    assert "join-over-meet fails" in res.output and "meet-over-join fails" in res.output


def test_algebra_verify_semiring(cli):
    res = cli(["algebra-verify", "nat-exact-omega"])
    assert res.exit_code == 0 and "REJECT" not in res.output


@pytest.mark.parametrize("name,args", [("c1", C1), ("heap", HEAP), ("unfair", UNFAIR)])
def test_structured_output_matches_golden(cli, name, args):
    got = cli(args + ["--format", "structured"]).output
    assert got == (GOLDEN / f"{name}.jsonl").read_text()
