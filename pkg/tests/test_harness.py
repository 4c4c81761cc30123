import csv
import json
import math

import numpy as np
import pytest

from lsarc import ConfigurationError, RunRecord, SolverConfig
from lsarc.cli import main
from lsarc.harness import (
    SOLVERS,
    export,
    load_records,
    performance_profile,
    records_to_csv,
    run_matrix,
)
from lsarc.records import CSV_COLUMNS

FAST = SolverConfig(max_iter=200)


def rec(problem, solver, cost, status="converged"):
    return RunRecord(
        problem=problem, solver=solver, n=2, status=status, outer_iters=1,
        f_evals=cost, g_evals=cost, hvp_evals=0, inner_matvecs=0,
        final_f=0.0, final_gnorm=0.0, wall_time_ms=float(cost), message="",
    )


# ---------------------------------------------------------------- profiles


def test_profile_hand_table():
    records = [rec("p1", "s1", 1), rec("p1", "s2", 2), rec("p2", "s1", 4), rec("p2", "s2", 2)]
    c1, c2 = performance_profile(records, "f_evals")
    assert (c1.solver, c2.solver) == ("s1", "s2")
    assert c1.ratios == {"p1:2": 1.0, "p2:2": 2.0}
    assert c2.ratios == {"p1:2": 2.0, "p2:2": 1.0}
    assert (c1(1), c1(2), c2(1), c2(2)) == (0.5, 1.0, 0.5, 1.0)
    assert c1.taus == [1.0, 2.0] and c1.rho == [0.5, 1.0]


def test_profile_single_solver():
    (c,) = performance_profile([rec("a", "s", 3), rec("b", "s", 7)])
    assert all(r == 1.0 for r in c.rho) and c(1.0) == 1.0 and c(1e9) == 1.0


def test_profile_failure_convention():
    records = [rec("p1", "s1", 1), rec("p1", "s2", 1, status="error"),
               rec("p2", "s1", 5, status="iteration_limit"), rec("p2", "s2", 5, status="diverged")]
    c1, c2 = performance_profile(records)
    assert c2.ratios["p1:2"] == math.inf and c1.ratios["p2:2"] == math.inf
    assert c1(1e300) == 0.5 and c2(1e300) == 0.0


def test_profile_ties_and_zero_best():
    records = [rec("p", "a", 3), rec("p", "b", 3), rec("q", "a", 0), rec("q", "b", 4)]
    a, b = performance_profile(records)
    assert a.ratios["p:2"] == b.ratios["p:2"] == 1.0
    assert a.ratios["q:2"] == 1.0 and b.ratios["q:2"] == math.inf


def test_profile_properties_random():
    rng = np.random.default_rng(0)
    solvers = ["a", "b", "c"]
    records = []
    for p in range(15):
        for s in solvers:
            status = "converged" if rng.random() > 0.2 else "error"
            records.append(rec(f"p{p}", s, int(rng.integers(1, 50)), status))
    curves = performance_profile(records)
    n_p = 15
    for c in curves:
        assert all(a <= b for a, b in zip(c.rho, c.rho[1:]))
        assert all(abs(v * n_p - round(v * n_p)) < 1e-12 for v in c.rho)
        assert c.taus[0] == 1.0
    assert max(c(1.0) for c in curves) > 0


def test_profile_errors():
    with pytest.raises(ConfigurationError):
        performance_profile([rec("p", "a", 1)], "cpu")
    with pytest.raises(ValueError):
        performance_profile([rec("p", "a", 1), rec("p", "a", 2)])
    with pytest.raises(ValueError):
        performance_profile([rec("p", "a", 1), rec("q", "b", 2)])


# ---------------------------------------------------------------- export


def test_csv_shapes(tmp_path):
    path = tmp_path / "empty.csv"
    records_to_csv([], path)
    assert path.read_text().splitlines() == [",".join(CSV_COLUMNS)]
    path = tmp_path / "one.csv"
    export([rec("p", "s", 1)], "csv", path)
    rows = list(csv.reader(path.open(newline="")))
    assert len(rows) == 2 and all(len(r) == 12 for r in rows)
    assert rows[0] == list(CSV_COLUMNS)


def test_json_round_trip(tmp_path):
    records = run_matrix([("saddle2d", 2), ("quad_spd", 10, 3)], ["ls-arc", "ls-tr"],
                         SolverConfig(trace=True, keep_vectors=True))
    path = tmp_path / "r.json"
    export(records, "json", path)
    back = load_records(path)
    assert back == records
    csv_path = tmp_path / "r.csv"
    export(records, "csv", csv_path)
    flat = load_records(csv_path)
    for a, b in zip(flat, records):
        assert all(getattr(a, c) == getattr(b, c) for c in CSV_COLUMNS)


def test_export_curves_and_errors(tmp_path):
    curves = performance_profile([rec("p", "a", 1), rec("p", "b", 2)])
    export(curves, "csv", tmp_path / "c.csv")
    rows = list(csv.reader((tmp_path / "c.csv").open(newline="")))
    assert rows[0] == ["solver", "metric", "tau", "rho"]
    export(curves, "json", tmp_path / "c.json")
    assert json.loads((tmp_path / "c.json").read_text())[0]["log2_taus"][0] == 0.0
    with pytest.raises(ConfigurationError):
        export(curves, "xml", tmp_path / "c.xml")
    with pytest.raises(OSError, match="nope"):
        export(curves, "csv", tmp_path / "nope" / "c.csv")


def test_csv_bit_stable(tmp_path):
    specs = [("rosenbrock", 10), ("quad_spd", 10, 1)]
    texts = []
    for k in range(2):
        records = run_matrix(specs, list(SOLVERS), FAST)
        for r in records:
            r.wall_time_ms = 0.0
        records_to_csv(records, tmp_path / f"{k}.csv")
        texts.append((tmp_path / f"{k}.csv").read_bytes())
    assert texts[0] == texts[1]


# ---------------------------------------------------------------- run_matrix


def test_run_matrix_shapes_and_isolation():
    (one,) = run_matrix([("rosenbrock", 4)], ["ls-arc"], FAST)
    assert one.solver == "ls-arc" and one.problem == "rosenbrock"
    specs = [("rosenbrock", 4), ("powell", 5), ("quad_spd", 6, 2)]  # powell:5 is invalid
    records = run_matrix(specs, list(SOLVERS), FAST)
    assert len(records) == 18
    bad = [r for r in records if r.problem == "powell"]
    assert len(bad) == 6 and all(r.status == "error" for r in bad)
    assert all(r.status == "converged" for r in records if r.problem != "powell")


def test_run_matrix_parallel_matches_serial():
    specs = [("rosenbrock", 6), ("trig", 6)]
    a = run_matrix(specs, ["ls-arc", "armijo"], FAST, jobs=1)
    b = run_matrix(specs, ["ls-arc", "armijo"], FAST, jobs=2)
    strip = lambda rs: [(r.problem, r.solver, r.f_evals, r.g_evals, r.final_f) for r in rs]
    assert strip(a) == strip(b)


def test_run_matrix_config_errors():
    with pytest.raises(ConfigurationError):
        run_matrix([("rosenbrock", 4)], ["bogus"])
    with pytest.raises(ConfigurationError):
        run_matrix([], ["ls-arc"])


# ---------------------------------------------------------------- cli


def test_cli_saddle_trace(capsys):
    assert main(["--problems", "saddle2d:2", "--solvers", "ls-arc", "--trace"]) == 0
    out = capsys.readouterr().out
    assert out.index("fallback_l2") < out.index("scaled")
    assert "diverged" in out


def test_cli_bad_solver():
    with pytest.raises(SystemExit) as exc:
        main(["--solvers", "bogus"])
    assert exc.value.code == 2


def test_cli_invalid_dimension():
    with pytest.raises(SystemExit) as exc:
        main(["--problems", "powell:5"])
    assert exc.value.code == 2


def test_cli_error_exit_code(tmp_path, monkeypatch):
    def broken(problem, config):
        raise RuntimeError("boom")

    monkeypatch.setitem(SOLVERS, "tr-l2", broken)
    code = main(["--problems", "rosenbrock:4", "--solvers", "ls-arc,tr-l2", "--out", str(tmp_path)])
    assert code == 1
    records = load_records(tmp_path / "records.json")
    assert [r.status for r in records] == ["converged", "error"]
    assert "boom" in records[1].message
    assert (tmp_path / "records.csv").exists()


def test_cli_profile_files(tmp_path):
    code = main(["--problems", "rosenbrock:6,trig:6", "--solvers", "ls-arc,armijo",
                 "--profile", "--out", str(tmp_path)])
    assert code == 0
    for m in ("f_evals", "g_evals", "wall_time_ms"):
        assert (tmp_path / f"profile_{m}.csv").exists()
