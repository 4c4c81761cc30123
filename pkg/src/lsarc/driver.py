"""Outer-loop skeleton shared by every solver.

A solver supplies an ``iterate(state) -> IterationRecord`` callback that
performs one outer iteration and moves ``state`` on success. The driver owns
stopping, divergence detection, timing and the conversion of every failure
into a terminal :class:`RunRecord` status.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .problems import ObjectiveProblem, Oracle
from .records import (
    BacktrackingStalled,
    ConfigurationError,
    EvalCounters,
    EvaluationError,
    IterationRecord,
    RunRecord,
    SolverConfig,
)


@dataclass
class RunState:
    """Mutable state of one run. ``control`` is sigma or the radius."""

    problem: ObjectiveProblem
    config: SolverConfig
    oracle: Oracle
    x: np.ndarray
    f: float
    g: np.ndarray
    control: float
    k: int = 0
    fallback: bool = False
    trace: list = field(default_factory=list)

    @property
    def counters(self) -> EvalCounters:
        return self.oracle.counters

    @property
    def gnorm(self) -> float:
        return float(np.linalg.norm(self.g))

    def move(self, x_new: np.ndarray, f_new: float) -> None:
        self.x = x_new
        self.f = f_new
        self.g = self.oracle.grad(x_new)

    def record(self, mode: str, **kw) -> IterationRecord:
        c = self.counters
        kw.setdefault("f_evals", c.f_evals)
        kw.setdefault("g_evals", c.g_evals)
        kw.setdefault("matvecs_after_accept", c.inner_matvecs)
        if not self.config.keep_vectors:
            kw.pop("s_q", None)
            kw.pop("step", None)
        else:
            for key in ("s_q", "step"):
                if kw.get(key) is not None:
                    kw[key] = [float(v) for v in kw[key]]
        return IterationRecord(k=self.k, mode=mode, **kw)


def _record_aborted(state: Optional[RunState]) -> None:
    """Close the trace with the work of an iteration that raised.

    Keeps ``sum(matvecs)`` over the trace equal to the run's counter.
    """
    if state is None:
        return
    done = state.trace[-1].matvecs_after_accept if state.trace else 0
    spent = state.counters.inner_matvecs - done
    state.trace.append(state.record(
        "aborted", f=state.f, gnorm=state.gnorm, control=state.control,
        new_control=state.control, accepted=False, matvecs=spent,
        matvecs_after_solve=state.counters.inner_matvecs,
    ))


def run_solver(
    problem: ObjectiveProblem,
    config: SolverConfig,
    solver: str,
    control0: float,
    iterate: Callable[[RunState], IterationRecord],
) -> RunRecord:
    config.validate()
    oracle = Oracle(problem, EvalCounters())
    t0 = time.perf_counter()
    status, message = "error", ""
    state: Optional[RunState] = None
    try:
        x = np.array(problem.x0, dtype=float)
        f = oracle.f(x)
        g = oracle.grad(x)
        state = RunState(problem, config, oracle, x, f, g, control0)
        while True:
            if state.gnorm <= config.gtol:
                status = "converged"
                break
            if state.k >= config.max_iter:
                status = "iteration_limit"
                break
            rec = iterate(state)
            state.trace.append(rec)
            state.k += 1
            if problem.f_low is not None and state.f < problem.f_low - 1.0:
                status, message = "diverged", f"f fell below f_low - 1 ({state.f:.6g})"
                break
            if state.f <= config.f_diverge:
                status, message = "diverged", f"f unbounded below ({state.f:.6g})"
                break
    except EvaluationError as exc:
        status, message = "diverged", str(exc)
        _record_aborted(state)
    except BacktrackingStalled as exc:
        status, message = "error", f"backtracking_stalled: {exc}"
        _record_aborted(state)
    except ConfigurationError:
        raise
    except Exception as exc:  # any solver failure ends the run, never the caller
        status, message = "error", f"{type(exc).__name__}: {exc}"
        _record_aborted(state)
    wall = (time.perf_counter() - t0) * 1e3

    c = oracle.counters
    if state is not None:
        final_f, final_gnorm, iters, trace = state.f, state.gnorm, state.k, state.trace
    else:
        final_f, final_gnorm, iters, trace = float("nan"), float("nan"), 0, []
    return RunRecord(
        problem=problem.name,
        solver=solver,
        n=problem.n,
        status=status,
        outer_iters=iters,
        f_evals=c.f_evals,
        g_evals=c.g_evals,
        hvp_evals=c.hvp_evals,
        inner_matvecs=c.inner_matvecs,
        final_f=float(final_f),
        final_gnorm=float(final_gnorm),
        wall_time_ms=wall,
        message=message,
        trace=trace if config.trace else None,
    )
