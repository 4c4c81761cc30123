"""Reference solvers in the Euclidean norm.

``armijo_solve``
    Backtracking line search along the (possibly safeguarded) Newton
    direction.
``arc_l2_solve``
    Adaptive cubic regularization with ``||.||_2``.
``tr_l2_solve``
    Trust region with ``||.||_2``.

The single-iteration functions :func:`arc_l2_iteration` and
:func:`tr_l2_iteration` double as fallback engines for the scaled-norm
solvers when the quasi-Newton direction is unusable.
"""
from __future__ import annotations

from typing import Optional

import numpy as np

from .driver import RunState, run_solver
from .krylov import solve_symmetric
from .problems import ObjectiveProblem
from .records import BacktrackingStalled, IterationRecord, RunRecord, SolverConfig
from .subproblems import (
    SubproblemResult,
    cubic_subproblem_l2,
    tr_subproblem_l2,
)


def _model_operator(state: RunState, dense: bool):
    if dense and state.problem.n <= 200:
        return state.oracle.dense_hessian(state.x), "dense_exact"
    return state.oracle.inner_operator(state.x), None


def _trial(state: RunState, res: SubproblemResult):
    """Evaluate the trial point ``x + s``; returns ``(x_t, f_t, rho)``."""
    pred = -res.quad
    x_t = state.x + res.s
    f_t = state.oracle.f(x_t)
    rho = (state.f - f_t) / pred if pred > 0.0 else -np.inf
    return x_t, f_t, rho


def arc_l2_iteration(state: RunState, mode: str = "l2") -> IterationRecord:
    """One iteration of Euclidean ARC with the current ``sigma = state.control``."""
    cfg = state.config
    sigma, f0, gnorm = state.control, state.f, state.gnorm
    m0 = state.counters.inner_matvecs
    B, forced = _model_operator(state, cfg.arc_subproblem == "dense_exact")
    res = cubic_subproblem_l2(
        state.g, B, sigma, mode=forced or "lanczos", rtol=cfg.subproblem_rtol
    )
    m1 = state.counters.inner_matvecs
    x_t, f_t, rho = _trial(state, res)
    accepted = rho >= cfg.eta
    if accepted:
        state.move(x_t, f_t)
        new = max(cfg.nu1 * sigma, cfg.sigma_min)
    else:
        new = cfg.nu2 * sigma
    state.control = new
    return state.record(
        mode, f=f0, gnorm=gnorm, control=sigma, new_control=new, accepted=accepted,
        step_length=1.0, step_norm=float(np.linalg.norm(res.s)), rho=float(rho),
        inner_iters=res.iterations, inner_status="cauchy" if res.cauchy_fallback else "ok",
        matvecs=m1 - m0, matvecs_after_solve=m1, lagrange=res.multiplier, step=res.s,
    )


def tr_l2_iteration(state: RunState, mode: str = "l2") -> IterationRecord:
    """One iteration of Euclidean TR with the current radius ``state.control``."""
    cfg = state.config
    radius, f0, gnorm = state.control, state.f, state.gnorm
    m0 = state.counters.inner_matvecs
    B, forced = _model_operator(state, cfg.tr_subproblem == "dense_exact")
    res = tr_subproblem_l2(
        state.g, B, radius, mode=forced or "steihaug", rtol=cfg.subproblem_rtol
    )
    m1 = state.counters.inner_matvecs
    x_t, f_t, rho = _trial(state, res)
    accepted = rho >= cfg.eta
    if accepted:
        state.move(x_t, f_t)
        new = min(cfg.tau2 * radius, cfg.delta_max)
    else:
        new = cfg.tau1 * radius
    state.control = new
    return state.record(
        mode, f=f0, gnorm=gnorm, control=radius, new_control=new, accepted=accepted,
        step_length=1.0, step_norm=float(np.linalg.norm(res.s)), rho=float(rho),
        inner_iters=res.iterations, inner_status="cauchy" if res.cauchy_fallback else "ok",
        matvecs=m1 - m0, matvecs_after_solve=m1, lagrange=res.multiplier, step=res.s,
    )


def armijo_direction(g: np.ndarray, s_q: np.ndarray, eps_d: float) -> np.ndarray:
    """``s_q`` when it is a sufficiently steep descent direction, else ``-g``."""
    if np.any(s_q) and -float(g @ s_q) >= eps_d * np.linalg.norm(g) * np.linalg.norm(s_q):
        return s_q
    return -g


def armijo_iteration(state: RunState) -> IterationRecord:
    cfg = state.config
    f0, g, gnorm = state.f, state.g, state.gnorm
    m0 = state.counters.inner_matvecs
    rep = solve_symmetric(
        state.oracle.inner_operator(state.x), g, rtol=cfg.inner_rtol,
        max_inner=cfg.inner_limit(state.problem.n), backend=cfg.backend,
    )
    m1 = state.counters.inner_matvecs
    d = armijo_direction(g, rep.s_q, cfg.eps_d)
    dg = float(d @ g)
    t, backtracks = 1.0, 0
    while True:
        x_t = state.x + t * d
        f_t = state.oracle.f(x_t)
        if f_t <= f0 + cfg.eta * t * dg:
            break
        backtracks += 1
        if backtracks > cfg.max_backtracks:
            raise BacktrackingStalled(f"Armijo search exceeded {cfg.max_backtracks} contractions")
        t *= cfg.armijo_tau
    state.move(x_t, f_t)
    return state.record(
        "armijo" if d is rep.s_q else "armijo_gradient", f=f0, gnorm=gnorm,
        control=float("nan"), new_control=float("nan"), accepted=True, step_length=t,
        step_norm=t * float(np.linalg.norm(d)), backtracks=backtracks,
        inner_iters=rep.iterations, inner_status=rep.status, matvecs=m1 - m0,
        matvecs_after_solve=m1, slope=float(g @ rep.s_q), s_q=rep.s_q, step=t * d,
    )


def armijo_solve(problem: ObjectiveProblem, config: Optional[SolverConfig] = None) -> RunRecord:
    """Newton-direction line search with the Armijo rule ``f(x+td) <= f + eta t d'g``."""
    config = config or SolverConfig()
    return run_solver(problem, config, "armijo", float("nan"), armijo_iteration)


def arc_l2_solve(problem: ObjectiveProblem, config: Optional[SolverConfig] = None) -> RunRecord:
    """Euclidean adaptive cubic regularization.

    Success (``rho >= eta``) moves ``x`` and sets
    ``sigma <- max(nu1 sigma, sigma_min)``; failure keeps ``x`` and sets
    ``sigma <- nu2 sigma``. The ratio uses the quadratic model only.
    """
    config = config or SolverConfig()
    return run_solver(problem, config, "arc-l2", config.sigma0, arc_l2_iteration)


def tr_l2_solve(problem: ObjectiveProblem, config: Optional[SolverConfig] = None) -> RunRecord:
    """Euclidean trust region: ``radius <- min(tau2 radius, delta_max)`` on success, ``tau1 radius`` on failure."""
    config = config or SolverConfig()
    return run_solver(problem, config, "tr-l2", config.delta0, tr_l2_iteration)
