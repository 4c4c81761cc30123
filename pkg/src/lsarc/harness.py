"""Benchmark orchestration: run matrices, performance profiles, export.

Performance profiles follow Dolan and More: for problem ``p`` and solver
``s`` with cost ``t[p, s]`` (infinite when the run did not converge),
``r[p, s] = t[p, s] / min_s t[p, s]`` and
``rho_s(tau) = #{p : r[p, s] <= tau} / |P|``. A problem no solver converged
on stays in ``|P|`` but never counts, so such curves top out below one.
"""
from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .baselines import arc_l2_solve, armijo_solve, tr_l2_solve
from .ls_arc import lsarc_solve
from .ls_tr import lstr_solve
from .problems import ObjectiveProblem, make_problem
from .records import CSV_COLUMNS, ConfigurationError, RunRecord, SolverConfig

SOLVERS: dict[str, Callable[[ObjectiveProblem, SolverConfig], RunRecord]] = {
    "ls-arc": lambda p, c: lsarc_solve(p, c, "first_order"),
    "ls-arc-s": lambda p, c: lsarc_solve(p, c, "second_order"),
    "ls-tr": lstr_solve,
    "armijo": armijo_solve,
    "arc-l2": arc_l2_solve,
    "tr-l2": tr_l2_solve,
}

METRICS = ("f_evals", "g_evals", "wall_time_ms")

ProblemSpec = Union[ObjectiveProblem, tuple]


def _build(spec: ProblemSpec) -> ObjectiveProblem:
    if isinstance(spec, ObjectiveProblem):
        return spec
    name, n, *rest = spec
    return make_problem(name, n, rest[0] if rest else None)


def _spec_label(spec: ProblemSpec):
    if isinstance(spec, ObjectiveProblem):
        return spec.name, spec.n
    name, n, *rest = spec
    seed = rest[0] if rest else None
    return (f"{name}#{seed}" if seed is not None and name == "quad_spd" else name), n


def run_one(spec: ProblemSpec, solver: str, config: SolverConfig) -> RunRecord:
    """Run one pair; any failure, including problem construction, becomes ``status="error"``."""
    try:
        problem = _build(spec)
        return SOLVERS[solver](problem, config)
    except Exception as exc:
        name, n = _spec_label(spec)
        return RunRecord(
            problem=name, solver=solver, n=int(n), status="error", outer_iters=0,
            f_evals=0, g_evals=0, hvp_evals=0, inner_matvecs=0,
            final_f=float("nan"), final_gnorm=float("nan"), wall_time_ms=0.0,
            message=f"{type(exc).__name__}: {exc}",
            trace=[] if config.trace else None,
        )


def run_matrix(
    problems: Sequence[ProblemSpec],
    solvers: Sequence[str],
    config: Optional[SolverConfig] = None,
    jobs: int = 1,
) -> list[RunRecord]:
    """Run every solver on every problem.

    Parameters
    ----------
    problems : sequence
        ``ObjectiveProblem`` instances or ``(name, n[, seed])`` tuples.
        Worker processes (``jobs > 1``) need tuples, since evaluators are
        closures and do not pickle.
    solvers : sequence of str
        Keys of :data:`SOLVERS`.
    config : SolverConfig, optional
        Shared settings; defaults reproduce the reference protocol.
    jobs : int
        Number of worker processes.

    Returns
    -------
    list of RunRecord
        Problem-major order, one record per pair regardless of ``jobs``.
    """
    if not problems or not solvers:
        raise ConfigurationError("run_matrix needs at least one problem and one solver")
    unknown = [s for s in solvers if s not in SOLVERS]
    if unknown:
        raise ConfigurationError(f"unknown solver(s): {', '.join(unknown)}")
    config = (config or SolverConfig()).validate()
    pairs = [(p, s) for p in problems for s in solvers]
    if jobs <= 1:
        return [run_one(p, s, config) for p, s in pairs]
    if any(isinstance(p, ObjectiveProblem) for p in problems):
        raise ConfigurationError("jobs > 1 needs (name, n[, seed]) problem specs")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(run_one, p, s, config) for p, s in pairs]
        return [f.result() for f in futures]


# --------------------------------------------------------------------------
# performance profiles


@dataclass
class ProfileCurve:
    """Staircase ``rho_s(tau)`` of one solver.

    ``taus`` are the breakpoints (sorted, starting at 1) and ``rho[i]`` the
    value on ``[taus[i], taus[i+1])``. ``ratios`` maps problem to
    ``r[p, s]`` (``inf`` for failures).
    """

    solver: str
    metric: str
    taus: list
    rho: list
    ratios: dict = field(default_factory=dict)
    n_problems: int = 0

    @property
    def log2_taus(self) -> list:
        return [math.log2(t) for t in self.taus]

    def __call__(self, tau: float) -> float:
        hits = sum(1 for r in self.ratios.values() if r <= tau)
        return hits / self.n_problems if self.n_problems else 0.0


def _problem_key(rec: RunRecord):
    return f"{rec.problem}:{rec.n}"


def performance_profile(records: Iterable[RunRecord], metric: str = "f_evals") -> list[ProfileCurve]:
    """Dolan-More profiles of ``metric`` over the records' problem set.

    Every (problem, solver) pair must occur exactly once. Runs whose status
    is not ``converged`` cost ``inf``. Tied minima all get ratio 1.
    """
    if metric not in METRICS:
        raise ConfigurationError(f"unknown metric {metric!r}; choose from {', '.join(METRICS)}")
    records = list(records)
    solvers = sorted({r.solver for r in records})
    problems = sorted({_problem_key(r) for r in records})
    table: dict = {}
    for r in records:
        key = (_problem_key(r), r.solver)
        if key in table:
            raise ValueError(f"duplicate record for problem {key[0]} and solver {key[1]}")
        table[key] = float(getattr(r, metric)) if r.status == "converged" else math.inf
    missing = [(p, s) for p in problems for s in solvers if (p, s) not in table]
    if missing:
        raise ValueError(f"missing records, e.g. problem {missing[0][0]} solver {missing[0][1]}")

    ratios = {s: {} for s in solvers}
    for p in problems:
        t_best = min(table[p, s] for s in solvers)
        for s in solvers:
            t = table[p, s]
            if math.isinf(t):
                r = math.inf
            elif t == t_best:
                r = 1.0
            elif t_best == 0.0:
                r = math.inf
            else:
                r = t / t_best
            ratios[s][p] = r

    finite = {1.0}
    for s in solvers:
        finite.update(r for r in ratios[s].values() if math.isfinite(r))
    taus = sorted(finite)
    n_p = len(problems)
    curves = []
    for s in solvers:
        rs = np.array(sorted(ratios[s].values()))
        rho = [float(np.searchsorted(rs, t, side="right")) / n_p for t in taus]
        curves.append(ProfileCurve(s, metric, list(taus), rho, dict(ratios[s]), n_p))
    return curves


# --------------------------------------------------------------------------
# export / import


def _open_for_write(path):
    try:
        return open(path, "w", newline="", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _cell(value):
    return repr(value) if isinstance(value, float) else value


def records_to_csv(records: Iterable[RunRecord], path) -> None:
    with _open_for_write(path) as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([_cell(getattr(r, c)) for c in CSV_COLUMNS])


def records_to_json(records: Iterable[RunRecord], path) -> None:
    payload = [r.to_dict() for r in records]
    with _open_for_write(path) as fh:
        json.dump(payload, fh, indent=1)


def curves_to_csv(curves: Iterable[ProfileCurve], path) -> None:
    with _open_for_write(path) as fh:
        w = csv.writer(fh)
        w.writerow(("solver", "metric", "tau", "rho"))
        for c in curves:
            for tau, rho in zip(c.taus, c.rho):
                w.writerow((c.solver, c.metric, repr(float(tau)), repr(float(rho))))


def curves_to_json(curves: Iterable[ProfileCurve], path) -> None:
    payload = [dict(dataclasses.asdict(c), log2_taus=c.log2_taus) for c in curves]
    with _open_for_write(path) as fh:
        json.dump(payload, fh, indent=1)


def export(items, format: str, path) -> None:
    """Write run records or profile curves as ``csv`` or ``json``."""
    items = list(items)
    curves = bool(items) and all(isinstance(i, ProfileCurve) for i in items)
    writers = {
        ("csv", False): records_to_csv,
        ("json", False): records_to_json,
        ("csv", True): curves_to_csv,
        ("json", True): curves_to_json,
    }
    try:
        writer = writers[format, curves]
    except KeyError:
        raise ConfigurationError(f"unknown export format {format!r}") from None
    writer(items, path)


def load_records(path) -> list[RunRecord]:
    """Read records written by :func:`records_to_json` (or the CSV form, without traces)."""
    path = os.fspath(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            if path.endswith(".csv"):
                rows = list(csv.DictReader(fh))
                ints = {"n", "outer_iters", "f_evals", "g_evals", "hvp_evals", "inner_matvecs"}
                floats = {"final_f", "final_gnorm", "wall_time_ms"}
                out = []
                for row in rows:
                    d = {k: int(v) if k in ints else float(v) if k in floats else v for k, v in row.items()}
                    out.append(RunRecord(**d))
                return out
            return [RunRecord.from_dict(d) for d in json.load(fh)]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror or exc}") from exc
