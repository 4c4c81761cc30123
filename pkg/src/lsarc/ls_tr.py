"""Trust region recast as a line search along the quasi-Newton direction.

With the scaled norm (``beta = 1``) the trust-region step is ``alpha s_q``
where ``alpha = min(1, Delta / sqrt(theta))`` for a descent direction and
``alpha = -Delta / sqrt(theta)`` when ``g's_q > 0``. Shrinking the radius
only rescales ``alpha``.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .baselines import tr_l2_iteration
from .driver import RunState, run_solver
from .krylov import solve_symmetric
from .ls_arc import CAUCHY_RTOL, StepOutcome
from .problems import ObjectiveProblem
from .records import BacktrackingStalled, IterationRecord, RunRecord, SolverConfig
from .scalednorm import DirectionInfo, beta_policy, direction_analysis

# relative disagreement beyond which the printed Cauchy length is replaced
CAUCHY_CHECK_RTOL = 1e-10


def cauchy_length_printed(info: DirectionInfo, radius: float, gBg: float) -> float:
    """Cauchy step length along ``-g`` exactly as the two-branch closed form is printed."""
    root_chi = math.sqrt(info.chi)
    if gBg <= 0.0 or gBg / info.norm_g >= radius / root_chi:
        return radius / (root_chi * info.norm_g)
    return gBg / info.norm_g**2


def cauchy_length_exact(info: DirectionInfo, radius: float, gBg: float) -> float:
    """Minimizer of ``m_Q(-t g)`` over ``0 < t <= radius / (sqrt(chi) ||g||)``."""
    t_max = radius / (math.sqrt(info.chi) * info.norm_g)
    if gBg <= 0.0:
        return t_max
    return min(info.norm_g**2 / gBg, t_max)


def tr_step_lengths(info: DirectionInfo, radius: float, gBg: float):
    """Step lengths along ``s_q`` and ``-g`` in the scaled trust region.

    Returns
    -------
    alpha : float
        Negative when ``g's_q > 0``.
    alpha_c : float
        Cauchy length. The printed closed form is checked against the exact
        1D minimizer and replaced by it when they disagree.
    corrected : bool
        True when the replacement happened.
    """
    if not info.descent_ok:
        raise ValueError("direction fails the descent gate")
    if not radius > 0.0:
        raise ValueError("radius must be positive")
    ratio = radius / math.sqrt(info.theta)
    alpha = min(1.0, ratio) if info.slope < 0 else -ratio
    printed = cauchy_length_printed(info, radius, gBg)
    exact = cauchy_length_exact(info, radius, gBg)
    if abs(printed - exact) <= CAUCHY_CHECK_RTOL * exact:
        return alpha, printed, False
    return alpha, exact, True


def lagrange_multiplier(info: DirectionInfo, radius: float) -> float:
    """Multiplier of a boundary step: ``slope / theta * (1 + sign(slope) sqrt(theta) / radius)``."""
    return info.slope / info.theta * (1.0 + info.sign * info.m_norm_sq / radius)


def tr_accept_loop(state: RunState, info: DirectionInfo, sBs: float, gBg: float) -> StepOutcome:
    """Shrink the radius until ``alpha s_q`` passes the ratio and Cauchy tests."""
    cfg = state.config
    f0 = state.f
    radius = state.control
    gg = info.norm_g**2
    backtracks = 0
    corrected_any = False
    while True:
        alpha, alpha_c, corrected = tr_step_lengths(info, radius, gBg)
        corrected_any |= corrected
        dq_step = alpha * info.slope + 0.5 * alpha * alpha * sBs
        dq_cauchy = -alpha_c * gg + 0.5 * alpha_c * alpha_c * gBg
        pred = -dq_step
        rho = float("nan")
        if pred > 0.0 and dq_step <= dq_cauchy * (1.0 - CAUCHY_RTOL):
            x_t = state.x + alpha * info.s_q
            f_t = state.oracle.f(x_t)
            rho = (f0 - f_t) / pred
            if rho >= cfg.eta:
                return StepOutcome(
                    step=alpha * info.s_q, length=alpha, rho=rho, backtracks=backtracks,
                    accepted=True, new_control=min(cfg.tau2 * radius, cfg.delta_max),
                    control=radius, cauchy_length=alpha_c, cauchy_corrected=corrected_any,
                    f_new=f_t, x_new=x_t,
                )
        backtracks += 1
        if backtracks > cfg.max_backtracks:
            raise BacktrackingStalled(
                f"no acceptable step after {cfg.max_backtracks} radius reductions (radius={radius:.3g})"
            )
        radius *= cfg.tau1


def lstr_iteration(state: RunState) -> IterationRecord:
    cfg = state.config
    if state.fallback:
        rec = tr_l2_iteration(state, mode="fallback_l2")
        state.fallback = not rec.accepted
        return rec

    f0, gnorm, radius = state.f, state.gnorm, state.control
    m0 = state.counters.inner_matvecs
    rep = solve_symmetric(
        state.oracle.inner_operator(state.x), state.g, rtol=cfg.inner_rtol,
        max_inner=cfg.inner_limit(state.problem.n), backend=cfg.backend,
    )
    m1 = state.counters.inner_matvecs
    info = None
    if np.any(rep.s_q):
        beta = beta_policy("ls_tr", None, 0.0, cfg.beta_min, cfg.beta_max)
        info = direction_analysis(state.g, rep.s_q, beta, cfg.eps_d)
    if info is None or not info.descent_ok:
        rec = tr_l2_iteration(state, mode="fallback_l2")
        rec.matvecs += m1 - m0
        rec.inner_status = f"{rep.status}/descent_failed"
        if info is not None:
            rec.slope, rec.cos_w, rec.beta = info.slope, info.cos_w, info.beta
        state.fallback = not rec.accepted
        return rec

    sBs = float(rep.s_q @ rep.Bs)
    gBg = float(state.g @ state.oracle.hvp(state.x, state.g))
    out = tr_accept_loop(state, info, sBs, gBg)
    state.move(out.x_new, out.f_new)
    state.control = out.new_control
    on_boundary = abs(out.length) * info.m_norm_sq >= out.control * (1.0 - 1e-12)
    return state.record(
        "scaled", f=f0, gnorm=gnorm, control=radius, new_control=out.new_control,
        accepted=True, step_length=out.length, step_norm=abs(out.length) * info.norm_sq,
        rho=out.rho, backtracks=out.backtracks, inner_iters=rep.iterations,
        inner_status=rep.status, matvecs=m1 - m0, matvecs_after_solve=m1,
        slope=info.slope, cos_w=info.cos_w, beta=info.beta,
        cauchy_corrected=out.cauchy_corrected,
        lagrange=lagrange_multiplier(info, out.control) if on_boundary else 0.0,
        s_q=rep.s_q, step=out.step,
    )


def lstr_solve(problem: ObjectiveProblem, config: Optional[SolverConfig] = None) -> RunRecord:
    """Run LS-TR; falls back to Euclidean TR until one success when the direction is unusable."""
    config = config or SolverConfig()
    return run_solver(problem, config, "ls-tr", config.delta0, lstr_iteration)
