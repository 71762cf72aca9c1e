"""Golden-file tests for the command line over the bundled models.

Set NSCM_UPDATE_GOLDEN=1 to rewrite the expected outputs after a deliberate
change, then review the diff.
"""

import io
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nscm.catalog import BINARY
from nscm.cli import run
from nscm.io import dumps, model_to_json
from nscm.model import MultiFunction, Nscm, Signature

GOLDEN = Path(__file__).parent / "golden"
LP_STATE = "ST=1,BT=1,SH=1,BH=0,BS=1"
ACC_STATE = "ST=0,BT=1,SA=1,SH=0,BH=1,BS=1"

CASES = {
    "validate_lp": [["validate", "lp.json"]],
    "validate_json_ex2": [["--json", "validate", "ex2.json"]],
    "validate_warning": [["validate", "lint.json"]],
    "validate_broken": [["--json", "validate", "broken.json"]],
    "solve_lp": [["solve", "lp.json"]],
    "solve_lp_do": [["solve", "lp.json", "--do", "ST=0"]],
    "solve_ex2": [["solve", "ex2.json", "--context", ""]],
    "solve_thm1_json": [["--json", "solve", "thm1-counterexample.json"]],
    "eval_full_ex2": [["eval", "ex2.json", "--context", "", "--state", "X=1,Y=0",
                       "--formula", "<X<-0> Y=1"]],
    "eval_partial_ex2": [["--json", "eval", "ex2.json", "--context", "", "--formula", "<X<-0> Y=1"]],
    "eval_model_ex2": [["eval", "ex2.json", "--formula", "Y=0"]],
    "eval_full_lp": [["eval", "lp.json", "--state", LP_STATE, "--formula", "[ST<-0] BS=1"]],
    "depends_lp": [["depends", "lp.json", "--from", "ST", "--to", "BS", "--witness"]],
    "depends_thm1": [["depends", "thm1-counterexample.json", "--from", "Z", "--to", "Y"]],
    "depends_direct_lp": [["depends", "lp.json", "--from", "BH", "--to", "BS", "--direct"],
                          ["depends", "lp.json", "--from", "ST", "--to", "BS", "--direct"]],
    "depends_direct_ex2_json": [["--json", "depends", "ex2.json", "--from", "X", "--to", "Y",
                                 "--direct", "--witness"]],
    "cause_lp_st": [["cause", "lp.json", "--state", LP_STATE, "--cause", "ST=1", "--effect", "BS=1",
                     "--witnesses"]],
    "cause_lp_bt": [["cause", "lp.json", "--state", LP_STATE, "--cause", "BT=1", "--effect", "BS=1"]],
    "cause_lp_json": [["--json", "cause", "lp.json", "--state", LP_STATE, "--cause", "ST=1",
                       "--effect", "BS=1"]],
    "cause_accuracy": [["cause", "accuracy-variant.json", "--state", ACC_STATE, "--cause", "ST=0",
                        "--effect", "BS=1", "--witnesses", "--no-prune"]],
    "cause_thm1": [["cause", "thm1-counterexample.json", "--context", "A=1", "--state", "Z=1,X=1,Y=1",
                    "--cause", "Z=1", "--effect", "Y=1", "--require-distinct"]],
    "simplify_lp_graph": [["simplify", "lp.json"]],
    "simplify_lp_setting": [["simplify", "lp.json", "--setting-state", LP_STATE]],
    "simplify_lp_remove_json": [["--json", "simplify", "lp.json", "--remove", "BH->BS",
                                 "--setting-state", LP_STATE]],
    "simplify_ex2_setting": [["simplify", "ex2.json", "--remove", "X->Y",
                              "--setting-state", "X=1,Y=0", "--setting-context", ""]],
    "simplify_illegal": [["simplify", "lp.json", "--remove", "SH->BS"]],
    "extension": [["simplify", "lp.json", "--remove", "BH->BS", "--write", "bh-bs.json"],
                  ["extension", "lp.json", "bh-bs.json"],
                  ["extension", "bh-bs.json", "lp.json"],
                  ["extension", "lp.json", "ex2.json"]],
    "discover_ex2": [["discover", "ex2.json"]],
    "discover_lp_json": [["--json", "discover", "lp.json"]],
    "discover_possibilities": [["discover", "ex2.json", "--save-possibilities", "s.json"],
                               ["discover", "--possibilities", "s.json", "--graph", "complete"],
                               ["discover", "--possibilities", "s.json", "--graph", "graph.json"],
                               ["discover", "--possibilities", "s.json", "--graph", "empty.json"]],
    "discover_thm1": [["discover", "thm1-counterexample.json"]],
    "error_parse": [["eval", "ex2.json", "--formula", "[X<-0]([X<-1] Y=1)"]],
    "error_parse_json": [["--json", "eval", "ex2.json", "--formula", "Y=="]],
    "error_not_solution": [["cause", "lp.json", "--state", "ST=0,BT=1,SH=0,BH=1,BS=1",
                            "--cause", "ST=0", "--effect", "BS=1"]],
    "error_usage": [["cause", "lp.json", "--state", LP_STATE], ["bogus"],
                    ["cause", "thm1-counterexample.json", "--state", "Z=1,X=1,Y=1",
                     "--cause", "Z=1", "--effect", "Y=1"]],
    "error_missing_file": [["solve", "nope.json"]],
    "error_guard": [["depends", "big.json", "--from", "V0", "--to", "V1"],
                    ["--force", "depends", "big.json", "--from", "V0", "--to", "V12"]],
}


def _fixtures(tmp: Path):
    sig = Signature((), ("A", "B"), {"A": BINARY, "B": BINARY})
    lint = Nscm.build(sig, [MultiFunction.constant("A", {"0", "1"}),
                            MultiFunction.from_rule(sig, "B", ["A"], lambda A: "1")])
    (tmp / "lint.json").write_text(dumps(model_to_json(lint)))
    broken = model_to_json(lint)
    broken["endogenous"][1]["table"] = broken["endogenous"][1]["table"][:1]
    broken["endogenous"][0]["table"][0]["then"] = ["0", "2"]
    (tmp / "broken.json").write_text(dumps(broken))
    (tmp / "graph.json").write_text(json.dumps({"edges": [["X", "Y"]]}))
    (tmp / "empty.json").write_text(json.dumps({"edges": [["Y", "X"], ["X", "Y"]]}))
    names = tuple(f"V{i}" for i in range(13))
    big_sig = Signature((), names, {v: ("0",) for v in names})
    big = Nscm.build(big_sig, [MultiFunction.constant(v, "0") for v in names])
    (tmp / "big.json").write_text(dumps(model_to_json(big)))


def _transcript(argvs):
    parts = []
    for argv in argvs:
        out, err = io.StringIO(), io.StringIO()
        code = run(argv, stdout=out, stderr=err)
        parts.append(f"$ nscm {' '.join(repr(a) if not a or ' ' in a else a for a in argv)}\n"
                     f"exit: {code}\n--- stdout\n{out.getvalue()}--- stderr\n{err.getvalue()}")
    return "\n".join(parts)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    _fixtures(tmp_path)
    got = _transcript(CASES[name])
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("NSCM_UPDATE_GOLDEN"):
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(got)
    assert got == path.read_text()


def test_output_is_byte_stable(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    argv = [["--json", "cause", "lp.json", "--state", LP_STATE, "--cause", "ST=1", "--effect", "BS=1"]]
    assert _transcript(argv) == _transcript(argv)


def test_json_envelope(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    out, err = io.StringIO(), io.StringIO()
    assert run(["--json", "cause", "lp.json", "--state", LP_STATE, "--cause", "ST=1",
                "--effect", "BS=1"], stdout=out, stderr=err) == 0
    data = json.loads(out.getvalue())
    assert data["version"] == 1
    assert set(data["result"]) == {"cause", "effect", "verdict", "plain_dependence", "witnesses"}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nscm", "eval", "ex2.json", "--context", "", "--state", "X=1,Y=0",
         "--formula", "<X<-0> Y=1"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "true\n"
