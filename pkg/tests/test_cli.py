import json
import subprocess
import sys

import pytest

from thetaring import __version__
from thetaring.cli import EXIT_BOUND, EXIT_FAIL, EXIT_INPUT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_lambda_report(capsys):
    code, rep = run(capsys, "lambda", "[[2,1],[1,3]]")
    assert code == EXIT_OK
    assert rep["lambda"] == 4 and rep["method"] == "closed" and rep["oracle_agrees"] is True
    assert rep["reduced"] == [[2, 1], [1, 3]] and rep["U"] == [[1, 0], [0, 1]]
    assert rep["version"] == __version__ and rep["config"]["seed"] == 0


def test_lambda_zero(capsys):
    code, rep = run(capsys, "lambda", "[[0,0],[0,0]]")
    assert code == EXIT_OK and rep["lambda"] == 0


@pytest.mark.parametrize("text", ["[[1,2],[3,1]]", "[[1,2]", "[[1.5,0],[0,1]]", "[[1,2],[2,1]]"])
def test_lambda_bad_input(capsys, text):
    assert run(capsys, "lambda", text)[0] == EXIT_INPUT


def test_lambda_oracle_bound(capsys):
    big = json.dumps([[20, 1, 0, 0], [1, 20, 0, 0], [0, 0, 20, 0], [0, 0, 0, 20]])
    assert run(capsys, "lambda", big, "--bound", "5")[0] == EXIT_BOUND


def test_lambda_from_stdin(capsys, monkeypatch):
    import io

    monkeypatch.setattr(sys, "stdin", io.StringIO("[[5,4],[4,5]]"))
    code, rep = run(capsys, "lambda", "--json", "-")
    assert code == EXIT_OK and rep["lambda"] == 6 and rep["reduced"] == [[2, 1], [1, 5]]


def test_reduce(capsys):
    code, rep = run(capsys, "reduce", "[[3,0,0],[0,2,0],[0,0,1]]")
    assert code == EXIT_OK and rep["reduced"] == [[1, 0, 0], [0, 2, 0], [0, 0, 3]]


def test_decompose_case_two(capsys):
    code, rep = run(capsys, "decompose", "[[2,0,-1],[0,2,1],[-1,1,2]]", "--q", "4")
    assert code == EXIT_OK
    assert rep["case"] == "A2" and rep["parts"] == 4 and rep["verified"] is True
    assert rep["optimality"]["verdict"] == "no_counterexample"


def test_decompose_identity(capsys):
    code, rep = run(capsys, "decompose", "[[1,0,0],[0,1,0],[0,0,1]]")
    assert code == EXIT_OK and rep["case"] == "A1" and rep["parts"] == 3


def test_decompose_not_semipositive(capsys):
    assert run(capsys, "decompose", "[[1,2],[2,1]]")[0] == EXIT_INPUT


def test_decompose_maps_back_from_reduced_form(capsys):
    code, rep = run(capsys, "decompose", "[[5,-7],[-7,11]]")
    assert code == EXIT_OK and rep["verified"] is True
    total = [[0, 0], [0, 0]]
    for p in rep["decomposition"]["parts"]:
        a = p["column"]
        for i in range(2):
            for j in range(2):
                total[i][j] += p["mult"] * a[i] * a[j]
    assert total == [[5, -7], [-7, 11]]


def test_check_optimal_from_decomposition(capsys, tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps({"target": [[2, 0], [0, 0]], "parts": [{"mult": 2, "column": [1, 0]}]}))
    code, rep = run(capsys, "check-optimal", "--json", str(f), "--q", "2")
    assert code == EXIT_OK and rep["verdict"] == "no_counterexample"


def test_theta(capsys):
    code, rep = run(capsys, "theta", "[[[0,10]]]", "--a", "0", "--q", "4")
    assert code == EXIT_OK
    re, im = rep["value"]
    assert abs(re - 1) < 1e-12 and abs(im) < 1e-12


def test_theta_bad_level(capsys):
    assert run(capsys, "theta", "[[[0,1]]]", "--a", "0", "--q", "3")[0] == EXIT_INPUT


def test_fj_check(capsys):
    code, rep = run(capsys, "fj-check", "--a", "1", "1", "--q", "4", "--seed", "3")
    assert code == EXIT_OK and rep["residual"] < 1e-6 and rep["rank"] == 4


def test_surjectivity_and_factor4(capsys):
    code, rep = run(capsys, "surjectivity", "--abc", "1", "1", "0")
    assert code == EXIT_OK and rep["rank"] == 16
    code, rep = run(capsys, "factor4", "--tau", "1j")
    assert code == EXIT_OK and rep["rank_M333_phi"] == rep["rank_M333"] + 1


def test_verify_wp_identities(capsys):
    code, rep = run(capsys, "verify", "wp-identities")
    assert code == EXIT_OK and rep["ok"]
    assert all("method" in c for c in rep["checks"])
    assert rep["config"]["seed"] == 0 and rep["version"] == __version__


def test_verify_lambda3_with_bound(capsys):
    code, rep = run(capsys, "verify", "lambda3", "--bound", "4")
    assert code == EXIT_OK and rep["checks"][0]["forms"] == 171


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "nosuch")[0] == EXIT_INPUT


def test_verify_failure_exit_code(capsys):
    # an impossible tolerance must fail the suite
    code, rep = run(capsys, "verify", "theta-fj", "--tol", "fj_residual=0")
    assert code == EXIT_FAIL and not rep["ok"]


def test_reports_are_byte_identical(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "surjectivity", "--seed", "5", "--out", str(p)]) == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_unknown_subcommand():
    assert main(["frobnicate"]) == EXIT_INPUT


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "thetaring.cli", "lambda", "[[2,1],[1,3]]"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0 and json.loads(res.stdout)["lambda"] == 4
