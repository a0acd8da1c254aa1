import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "kantorovich.cli"]


@pytest.fixture
def fixtures(tmp_path):
    (tmp_path / "space.json").write_text(
        json.dumps({"kind": "matrix", "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}))
    (tmp_path / "euclid.json").write_text(
        json.dumps({"kind": "euclidean", "norm": "l1",
                    "points": [[0, 0], [1, 0], [1, 1]]}))
    (tmp_path / "space.csv").write_text("0,1,2\n1,0,1\n2,1,0\n")
    (tmp_path / "p.json").write_text(
        json.dumps({"support": [0, 1], "den": 2, "num": [1, 1]}))
    (tmp_path / "q.json").write_text(
        json.dumps({"support": [1, 2], "den": 4, "num": [1, 3]}))
    (tmp_path / "float_p.json").write_text(
        json.dumps({"support": [0, 2], "weights": [0.25, 0.75]}))
    (tmp_path / "a.json").write_text("[0, 1, 2]")
    (tmp_path / "b.json").write_text("[2, 1, 0]")
    return tmp_path


def run_cli(*args):
    return subprocess.run(CLI + [str(a) for a in args],
                          capture_output=True, text=True)


def test_dist_exit_zero_and_report_shape(fixtures):
    proc = run_cli("dist", "--space", fixtures / "space.json",
                   "--p", fixtures / "p.json", "--q", fixtures / "q.json")
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    assert report["cost"] == pytest.approx(1.25)
    assert 0.0 <= report["gap"] <= 1e-8
    assert report["solver"] in {"flow", "assignment"}
    assert report["tolerance"] == 1e-8
    assert set(report["inputs"]) == {"space", "p", "q"}
    assert all(len(v) == 64 for v in report["inputs"].values())


def test_dist_works_from_csv_and_euclidean(fixtures):
    for space in ("space.csv", "euclid.json"):
        proc = run_cli("dist", "--space", fixtures / space,
                       "--p", fixtures / "p.json", "--q", fixtures / "q.json")
        assert proc.returncode == 0, proc.stderr


def test_solver_flag_is_respected(fixtures):
    for solver in ("flow", "brute", "auto"):
        proc = run_cli("dist", "--space", fixtures / "space.json",
                       "--p", fixtures / "p.json", "--q", fixtures / "q.json",
                       "--solver", solver)
        assert proc.returncode == 0
        report = json.loads(proc.stdout)
        assert report["cost"] == pytest.approx(1.25)


def test_coupling_report_is_valid_coupling(fixtures):
    proc = run_cli("coupling", "--space", fixtures / "space.json",
                   "--p", fixtures / "p.json", "--q", fixtures / "q.json")
    report = json.loads(proc.stdout)
    matrix = report["coupling"]["matrix"]
    assert report["coupling_violations"] == []
    total = sum(sum(row) for row in matrix)
    assert total == pytest.approx(1.0, abs=1e-9)


def test_dual_certifies_cost(fixtures):
    proc = run_cli("dual", "--space", fixtures / "space.json",
                   "--p", fixtures / "p.json", "--q", fixtures / "q.json")
    report = json.loads(proc.stdout)
    assert report["dual_value"] == pytest.approx(report["cost"], abs=1e-8)
    assert len(report["potential"]["points"]) == len(report["potential"]["values"])


def test_power_dist_both_kinds(fixtures):
    tup = run_cli("power-dist", "--space", fixtures / "space.json",
                  "--a", fixtures / "a.json", "--b", fixtures / "b.json")
    assert json.loads(tup.stdout)["distance"] == pytest.approx(4 / 3)
    ms = run_cli("power-dist", "--space", fixtures / "space.json",
                 "--a", fixtures / "a.json", "--b", fixtures / "b.json",
                 "--kind", "multiset")
    assert json.loads(ms.stdout)["distance"] == 0.0


def test_laws_deterministic_and_exit_zero(fixtures):
    first = run_cli("laws", "--trials", "10", "--seed", "7")
    second = run_cli("laws", "--trials", "10", "--seed", "7")
    assert first.returncode == 0, first.stderr
    assert first.stdout == second.stdout  # byte-identical
    report = json.loads(first.stdout)
    assert report["all_pass"] is True
    assert len(report["results"]) >= 20


def test_laws_csv_output():
    proc = run_cli("laws", "--trials", "5", "--seed", "1", "--out", "csv")
    assert proc.returncode == 0
    lines = proc.stdout.strip().splitlines()
    assert lines[0] == "law,trials,worst_discrepancy,tolerance,pass"
    assert all(line.endswith("true") for line in lines[1:])


def test_algebra_check_runs_clean():
    proc = run_cli("algebra-check", "--dim", "2", "--norm", "linf",
                   "--trials", "20", "--seed", "3")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["all_pass"] is True
    assert report["carrier"] == {"dim": 2, "norm": "linf"}


def test_approx_rationalize_within_bound(fixtures):
    proc = run_cli("approx", "--space", fixtures / "space.json",
                   "--p", fixtures / "float_p.json",
                   "--mode", "rationalize", "--epsilon", "0.05")
    report = json.loads(proc.stdout)
    assert proc.returncode == 0
    assert report["within_bound"] is True
    assert report["w1_error"] <= report["bound"]


def test_approx_truncate(fixtures):
    proc = run_cli("approx", "--space", fixtures / "space.json",
                   "--p", fixtures / "q.json",
                   "--mode", "truncate", "--center", "2", "--radius", "0.5")
    report = json.loads(proc.stdout)
    assert proc.returncode == 0
    # the 1/4 mass at point 1 (distance 1 from 2) moves onto the center
    assert report["w1_error"] == pytest.approx(0.25)


def test_approx_study_deterministic_csv(fixtures):
    args = ("approx", "--space", fixtures / "space.json",
            "--p", fixtures / "p.json", "--mode", "study",
            "--sizes", "4,8", "--trials", "6", "--seed", "2", "--out", "csv")
    first, second = run_cli(*args), run_cli(*args)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert first.stdout.splitlines()[0] == "n,median_w1,trials"


def test_sample_deterministic(fixtures):
    args = ("sample", "--space", fixtures / "space.json",
            "--p", fixtures / "p.json", "--size", "10", "--seed", "4")
    first, second = run_cli(*args), run_cli(*args)
    assert first.stdout == second.stdout
    report = json.loads(first.stdout)
    assert len(report["entries"]) == 10
    assert report["rng"] == "numpy-pcg64"


def test_malformed_measure_exits_one(fixtures):
    bad = fixtures / "bad.json"
    bad.write_text('{"support": [0, 1]}')  # no weights at all
    proc = run_cli("dist", "--space", fixtures / "space.json",
                   "--p", bad, "--q", fixtures / "q.json")
    assert proc.returncode == 1
    assert proc.stdout == ""
    err = json.loads(proc.stderr)
    assert err["error"]["code"] == "parse.measure"


def test_invalid_weights_exit_one(fixtures):
    bad = fixtures / "bad.json"
    bad.write_text('{"support": [0, 1], "weights": [0.9, 0.9]}')
    proc = run_cli("dist", "--space", fixtures / "space.json",
                   "--p", bad, "--q", fixtures / "q.json")
    assert proc.returncode == 1
    assert json.loads(proc.stderr)["error"]["code"].startswith("invariant.")


def test_missing_file_exits_one(fixtures):
    proc = run_cli("dist", "--space", fixtures / "space.json",
                   "--p", fixtures / "nowhere.json", "--q", fixtures / "q.json")
    assert proc.returncode == 1
    assert json.loads(proc.stderr)["error"]["code"] == "io.not_found"


def test_non_metric_space_exits_one(fixtures):
    bad = fixtures / "badspace.json"
    bad.write_text(json.dumps({"kind": "matrix",
                               "dist": [[0, 1, 9], [1, 0, 1], [9, 1, 0]]}))
    proc = run_cli("dist", "--space", bad,
                   "--p", fixtures / "p.json", "--q", fixtures / "q.json")
    assert proc.returncode == 1
    assert json.loads(proc.stderr)["error"]["code"] == "invariant.space"


def test_console_entry_point_installed():
    proc = subprocess.run(["kantorovich", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("dist", "coupling", "dual", "power-dist", "laws",
                "algebra-check", "approx", "sample"):
        assert sub in proc.stdout


def test_usage_errors_exit_one_with_error_json(fixtures):
    # Exit status 2 is reserved for law-suite failures; a bad invocation
    # is a validation failure and must follow the stderr-JSON contract.
    cases = (
        ("power-dist", "--space", str(fixtures / "space.json")),  # missing --a/--b
        ("dist", "--space", str(fixtures / "space.json"),
         "--p", str(fixtures / "p.json"), "--q", str(fixtures / "q.json"),
         "--solver", "simplex"),                                  # bad choice
        ("no-such-command",),                                     # unknown subcommand
    )
    for argv in cases:
        proc = run_cli(*argv)
        assert proc.returncode == 1, argv
        assert proc.stdout == ""
        assert json.loads(proc.stderr)["error"]["code"] == "cli.arguments"
