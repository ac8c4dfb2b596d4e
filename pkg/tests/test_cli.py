import json
import os
import subprocess
import sys

SRC = os.path.join(os.path.dirname(__file__), "..", "src")


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env["PYTHONPATH"] = SRC + os.pathsep + env.get("PYTHONPATH", "")
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "npk", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def test_algebra_info_dual():
    out = run_cli("algebra", "--algebra", "R[x]/(x^2)")
    assert out.returncode == 0
    assert "dim      2" in out.stdout
    assert "height   1" in out.stdout
    assert "dim Der  1" in out.stdout


def test_algebra_info_plane():
    out = run_cli("algebra", "--algebra", "R[x,y]/(x^2,x*y,y^2)", "--json")
    assert out.returncode == 0
    payload = json.loads(out.stdout)
    assert payload["schema"] == 1
    assert payload["dim"] == 3
    assert payload["der_dim"] == 4
    assert payload["basis"] == ["1", "x", "y"]


def test_algebra_infinite_dimensional_exit_2():
    out = run_cli("algebra", "--algebra", "R[x,y]/(x^2)")
    assert out.returncode == 2
    assert "pure-power" in out.stderr


def test_lift_dual_square():
    out = run_cli("lift", "--algebra", "R[x]/(x^2)", "--fn", "x1^2", "--point", "[[1,1]]")
    assert out.returncode == 0
    assert out.stdout.strip() == "[1, 2]"


def test_lift_sin_jet():
    out = run_cli("lift", "--algebra", "R[t]/(t^3)", "--fn", "sin(x1)", "--point", "[[0,1,0]]")
    assert out.returncode == 0
    assert out.stdout.strip() == "[0, 1, 0]"


def test_lift_constant():
    out = run_cli("lift", "--algebra", "R[x]/(x^3)", "--fn", "2", "--point", "[[0,0,0]]")
    assert out.returncode == 0
    assert out.stdout.strip() == "[2, 0, 0]"


def test_lift_bad_expression_exit_2():
    out = run_cli("lift", "--algebra", "R[x]/(x^2)", "--fn", "x9", "--point", "[[0,1]]")
    assert out.returncode == 2


def test_check_suite_passes():
    out = run_cli(
        "check", "--suite", "lie", "--algebra", "R[x]/(x^2)", "--seed", "42", "--samples", "10"
    )
    assert out.returncode == 0
    assert "overall: PASS" in out.stdout


def test_check_tol_zero_fails_with_exit_1():
    out = run_cli(
        "check",
        "--suite",
        "lift",
        "--algebra",
        "R[x]/(x^2)",
        "--samples",
        "5",
        "--tol",
        "0",
    )
    assert out.returncode == 1
    assert "overall: FAIL" in out.stdout


def test_check_json_schema():
    out = run_cli(
        "check", "--suite", "lift", "--algebra", "R", "--samples", "5", "--json"
    )
    payload = json.loads(out.stdout)
    assert payload["schema"] == 1
    assert payload["pass"] is True
    record = payload["records"][0]
    assert set(record) == {"check", "algebra", "chart", "samples", "seed", "max_residual", "pass"}


def test_check_byte_identical_reports():
    args = (
        "check", "--suite", "lie", "--algebra", "R[x]/(x^3)",
        "--seed", "7", "--samples", "10", "--json",
    )
    first, second = run_cli(*args), run_cli(*args)
    assert first.stdout == second.stdout
    assert first.returncode == second.returncode == 0


def test_env_seed_fallback():
    by_flag = run_cli(
        "check", "--suite", "lift", "--algebra", "R", "--samples", "5", "--seed", "11", "--json"
    )
    by_env = run_cli(
        "check", "--suite", "lift", "--algebra", "R", "--samples", "5", "--json",
        env_extra={"NPK_SEED": "11"},
    )
    assert by_flag.stdout == by_env.stdout


def test_cohomology_circle():
    out = run_cli(
        "cohomology", "--model", "circle", "--algebra", "R[x]/(x^2)", "--samples", "3"
    )
    assert out.returncode == 0
    assert "circle-class-kills-exact" in out.stdout


def test_cohomology_poincare_json():
    out = run_cli(
        "cohomology", "--model", "poincare", "--algebra", "R[x]/(x^2)",
        "--chart", "box:[-1,1]^2", "--samples", "2", "--json",
    )
    payload = json.loads(out.stdout)
    assert payload["pass"] is True
    checks = [r["check"] for r in payload["records"]]
    assert checks == ["poincare-primitive-p1", "poincare-primitive-p2"]


def test_cohomology_h0():
    out = run_cli(
        "cohomology", "--model", "h0", "--algebra", "R[x,y]/(x^2,x*y,y^2)", "--samples", "3"
    )
    assert out.returncode == 0


def test_usage_error_exit_2():
    out = run_cli("check", "--suite", "nope", "--algebra", "R")
    assert out.returncode == 2
