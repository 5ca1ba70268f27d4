import json
import subprocess
import sys

import numpy as np
import pytest

from helpers import EXAMPLE1, family_I, family_II
from linearize4 import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    return code, json.loads(capsys.readouterr().out)


def write(tmp_path, name, data):
    path = tmp_path / f"{name}.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


# ---------------------------------------------------------------------------
# test

def test_fixture_verdicts(capsys):
    code, rep = run_cli(capsys, "test", "example1")
    assert code == 0 and rep["verdict"] == "linearizable"
    assert sum(c["pass"] for c in rep["conditions"]) == 10
    code, rep = run_cli(capsys, "test", "example3")
    assert code == 1
    assert {c["id"] for c in rep["conditions"] if not c["pass"]} == {"T1.C5", "T1.C8", "T1.C10"}
    code, rep = run_cli(capsys, "test", "example4")
    assert code == 0 and len(rep["conditions"]) == 18


def test_zero_table(capsys, tmp_path):
    path = write(tmp_path, "zero", {"candidateI": {n: "0" for n in EXAMPLE1}})
    code, rep = run_cli(capsys, "test", path)
    assert code == 0


def test_report_keys(capsys):
    _, rep = run_cli(capsys, "test", "example1")
    assert {"verdict", "conditions", "samplePlan"} <= set(rep)
    assert {"id", "paperEq", "maxAbs", "maxRel", "pass"} <= set(rep["conditions"][0])


def test_parameter_override(capsys):
    for a in ("2", "3", "5"):
        code, _ = run_cli(capsys, "test", "example2", "--param", f"a={a}")
        assert code == 0


def test_errors_exit_2(capsys, tmp_path):
    code, rep = run_cli(capsys, "test", write(tmp_path, "bad", {"rhs": "y1^5"}))
    assert code == 2 and rep["error"]["type"] == "ShapeMismatch"
    code, rep = run_cli(capsys, "test", write(tmp_path, "syntax", {"rhs": "2x"}))
    assert code == 2 and "column 2" in rep["error"]["message"]
    code, rep = run_cli(capsys, "test", write(tmp_path, "extra", {"rhs": "0", "bogus": 1}))
    assert code == 2 and rep["error"]["type"] == "RequestError"
    code, rep = run_cli(capsys, "test", str(tmp_path / "missing.json"))
    assert code == 2
    code, rep = run_cli(capsys, "test", "example3", "--param", "D=zz")
    assert code == 2


def test_reports_are_byte_identical(capsys):
    cli.main(["construct", "example1", "--seed", "4"])
    first = capsys.readouterr().out
    cli.main(["construct", "example1", "--seed", "4"])
    assert capsys.readouterr().out == first


# ---------------------------------------------------------------------------
# construct

def test_construct_example1(capsys):
    code, rep = run_cli(capsys, "construct", "example1")
    assert code == 0
    assert rep["transform"]["phi"] == "x"
    assert rep["chi"]["identicallyZero"]
    assert rep["alphaBeta"]["alpha"] == "0" and rep["alphaBeta"]["beta"] == "1"
    assert rep["roundtripResidual"] < 1e-6


def test_construct_example4(capsys):
    code, rep = run_cli(capsys, "construct", "example4")
    assert code == 0
    assert (rep["transform"]["phi"], rep["transform"]["psi"]) == ("y", "x")
    assert rep["alphaBeta"]["alpha"] == "1" and rep["alphaBeta"]["beta"] == "1"
    assert rep["alphaBeta"]["theta"] == "8"
    assert rep["roundtripResidual"] < 1e-5
    grid = rep["transform"]["grid"]
    assert len(grid["phi"]) == 41 * 41


def test_construct_example2(capsys):
    code, rep = run_cli(capsys, "construct", "example2")
    assert code == 0
    assert rep["alphaBeta"]["alpha"] == "0" and rep["alphaBeta"]["beta"] == "0"


def test_construct_refuses_nonlinearizable(capsys):
    code, rep = run_cli(capsys, "construct", "example3")
    assert code == 1 and "transform" not in rep


# ---------------------------------------------------------------------------
# oracle and verify

def oracle_request(tmp_path, name, phi, psi, alpha="0", beta="0"):
    return write(tmp_path, name, {"transform": {"phi": phi, "psi": psi, "alpha": alpha,
                                                "beta": beta}})


def test_oracle_example1(capsys, tmp_path):
    code, rep = run_cli(capsys, "oracle", oracle_request(tmp_path, "o", "x", "x^2*y^2", "0", "1"))
    assert code == 0
    from linearize4.exprcore import parse_expr, simplify
    for name, text in EXAMPLE1.items():
        assert simplify(parse_expr(rep["candidateI"][name])) is simplify(parse_expr(text)), name


def test_oracle_identity(capsys, tmp_path):
    code, rep = run_cli(capsys, "oracle", oracle_request(tmp_path, "o", "x", "y"))
    assert set(rep["candidateI"].values()) == {"0"}


def test_oracle_degenerate(capsys, tmp_path):
    code, rep = run_cli(capsys, "oracle", oracle_request(tmp_path, "o", "x", "x^2"))
    assert code == 2 and rep["error"]["type"] == "DegenerateMap"


def test_oracle_then_test_pipeline(capsys, tmp_path):
    code, rep = run_cli(capsys, "oracle", oracle_request(tmp_path, "o", "y + x", "x"))
    assert "candidateII" in rep
    code, rep = run_cli(capsys, "test", write(tmp_path, "gen", rep))
    assert code == 0


@pytest.mark.parametrize("seed", range(10))
def test_oracle_pipeline_on_random_family(capsys, tmp_path, seed):
    rng = np.random.default_rng(seed)
    phi, psi, a, b = (family_I if seed % 2 else family_II)(rng)
    path = oracle_request(tmp_path, "o", str(phi), str(psi), str(a), str(b))
    _, generated = run_cli(capsys, "oracle", path)
    code, rep = run_cli(capsys, "test", write(tmp_path, "gen", generated))
    assert code == 0, [c for c in rep["conditions"] if not c["pass"]]


def test_verify(capsys, tmp_path):
    path = write(tmp_path, "v", {"rhs": cli.read_request("example1")[0]["rhs"],
                                 "transform": {"phi": "x", "psi": "x^2*y^2", "alpha": "0",
                                               "beta": "1"}})
    code, rep = run_cli(capsys, "verify", path)
    assert code == 0 and rep["verdict"] == "verified"
    assert rep["dualPathMaxRel"] < 1e-8 and rep["equationMismatch"] < 1e-12
    wrong = write(tmp_path, "w", {"rhs": cli.read_request("example1")[0]["rhs"],
                                  "transform": {"phi": "x", "psi": "x^2*y^2", "beta": "2"}})
    code, rep = run_cli(capsys, "verify", wrong)
    assert code == 1 and rep["verdict"] == "failed"


# ---------------------------------------------------------------------------
# batch and entry point

def test_batch(tmp_path):
    write(tmp_path, "one", {"candidateI": EXAMPLE1})
    write(tmp_path, "two", {"rhs": "-((y + 1)*y2 + y1^2)"})
    out = tmp_path / "out"
    code = cli.main(["test", "--batch", str(tmp_path), "--out", str(out), "--workers", "2"])
    assert code == 1
    assert json.loads((out / "one.json").read_text())["verdict"] == "linearizable"
    assert json.loads((out / "two.json").read_text())["verdict"] == "not_linearizable"


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "linearize4.cli", "test", "example1",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == ""
    assert json.loads(out.read_text())["verdict"] == "linearizable"
