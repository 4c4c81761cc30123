"""Cubic regularization recast as a line search along the quasi-Newton direction.

In the scaled norm ``||.||_M`` the minimizer of the cubic model is collinear
with ``s_q`` (an approximate solution of ``B s = -g``), so a step is
``delta s_q`` with ``delta`` in closed form and the regularization update
only rescales ``delta``: unsuccessful trials cost one function value and no
Hessian products.

``lsarc_solve(..., variant="second_order")`` picks ``s_q`` as the first
Krylov iterate whose model-gradient norm is small relative to
``|delta| ||s_q||^2``, which makes the accepted step satisfy a second-order
termination rule for the cubic model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .baselines import arc_l2_iteration
from .driver import RunState, run_solver
from .krylov import InnerSolveReport, solve_symmetric
from .problems import ObjectiveProblem
from .records import BacktrackingStalled, IterationRecord, RunRecord, SolverConfig
from .scalednorm import DirectionInfo, beta_policy, cubic_model_value, direction_analysis

# slack on the Cauchy comparison, relative to the Cauchy decrease
CAUCHY_RTOL = 1e-12


@dataclass
class StepOutcome:
    step: np.ndarray
    length: float
    rho: float
    backtracks: int
    accepted: bool
    new_control: float
    control: float = float("nan")
    cauchy_length: float = float("nan")
    cauchy_corrected: bool = False
    f_new: float = float("nan")
    x_new: Optional[np.ndarray] = None


def _delta_from_ratio(slope: float, r: float) -> float:
    """``2 / (1 - sign(slope) sqrt(1 + 4 r))`` without cancellation; ``r = sigma theta^1.5 / |slope|``."""
    root = math.sqrt(1.0 + 4.0 * r)
    if slope < 0:
        return 2.0 / (1.0 + root)
    # 2 / (1 - root) = -(1 + root) / (2 r)
    return -(1.0 + root) / (2.0 * r)


def arc_step_lengths(info: DirectionInfo, sigma: float, gBg_over_g2: float):
    """Step lengths along ``s_q`` and along ``-g`` for the scaled cubic model.

    Parameters
    ----------
    info : DirectionInfo
        Direction data; must pass the descent gate.
    sigma : float
        Regularization weight.
    gBg_over_g2 : float
        ``g'Bg / ||g||^2``.

    Returns
    -------
    delta, delta_c : float
        ``delta`` has the sign of ``-slope``; ``delta_c > 0``.
    """
    if not info.descent_ok:
        raise ValueError("direction fails the descent gate")
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    r = sigma * info.theta**1.5 / abs(info.slope)
    delta = _delta_from_ratio(info.slope, r)
    q = gBg_over_g2
    delta_c = 2.0 / (q + math.sqrt(q * q + 4.0 * sigma * info.chi**1.5 * info.norm_g))
    return delta, delta_c


def second_order_gate(residual_norm: float, info: DirectionInfo, sigma: float, zeta: float) -> bool:
    """``||B s_q + g|| <= zeta |delta| ||s_q||^2`` with ``delta`` from :func:`arc_step_lengths`."""
    r = sigma * info.theta**1.5 / abs(info.slope)
    delta = _delta_from_ratio(info.slope, r)
    return residual_norm <= zeta * abs(delta) * info.norm_sq**2


def arc_accept_loop(state: RunState, info: DirectionInfo, sBs: float, gBg: float) -> StepOutcome:
    """Grow ``sigma`` until the scaled-norm step passes both acceptance tests.

    ``sBs = s_q'B s_q`` and ``gBg = g'Bg`` are computed once by the caller;
    the loop itself evaluates ``f`` only, and only for trials whose model
    value already beats the Cauchy point.
    """
    cfg = state.config
    f0 = state.f
    sigma = state.control
    q = gBg / info.norm_g**2
    backtracks = 0
    while True:
        delta, delta_c = arc_step_lengths(info, sigma, q)
        m_step = cubic_model_value(f0, info, sBs, sigma, delta, "s_q")
        m_cauchy = cubic_model_value(f0, info, gBg, sigma, delta_c, "neg_g")
        pred = -(delta * info.slope + 0.5 * delta * delta * sBs)
        rho = float("nan")
        if pred > 0.0 and m_step - f0 <= (m_cauchy - f0) * (1.0 - CAUCHY_RTOL):
            x_t = state.x + delta * info.s_q
            f_t = state.oracle.f(x_t)
            rho = (f0 - f_t) / pred
            if rho >= cfg.eta:
                return StepOutcome(
                    step=delta * info.s_q, length=delta, rho=rho, backtracks=backtracks,
                    accepted=True, new_control=max(cfg.nu1 * sigma, cfg.sigma_min),
                    control=sigma, cauchy_length=delta_c, f_new=f_t, x_new=x_t,
                )
        backtracks += 1
        if backtracks > cfg.max_backtracks:
            raise BacktrackingStalled(
                f"no acceptable step after {cfg.max_backtracks} sigma increases (sigma={sigma:.3g})"
            )
        sigma *= cfg.nu2


class _SecondOrderInspector:
    """Per-iterate predicate: first pass the termination gate, then the descent gate."""

    def __init__(self, g, sigma, cfg: SolverConfig):
        self.g = g
        self.sigma = sigma
        self.cfg = cfg
        self.gate_met = False

    def info(self, s):
        slope = float(self.g @ s)
        beta = beta_policy("ls_arc", self.sigma, slope, self.cfg.beta_min, self.cfg.beta_max)
        return direction_analysis(self.g, s, beta, self.cfg.eps_d)

    def __call__(self, s, rnorm):
        if not np.any(s):
            return False
        info = self.info(s)
        if not self.gate_met:
            if info.slope == 0.0 or not second_order_gate(rnorm, info, self.sigma, self.cfg.zeta):
                return False
            self.gate_met = True
        return info.descent_ok


def _inner_solve(state: RunState, variant: str) -> InnerSolveReport:
    cfg = state.config
    inspect = _SecondOrderInspector(state.g, state.control, cfg) if variant == "second_order" else None
    return solve_symmetric(
        state.oracle.inner_operator(state.x), state.g, rtol=cfg.inner_rtol,
        max_inner=cfg.inner_limit(state.problem.n), inspect=inspect, backend=cfg.backend,
    )


def lsarc_iteration(state: RunState, variant: str = "first_order") -> IterationRecord:
    cfg = state.config
    if state.fallback:
        rec = arc_l2_iteration(state, mode="fallback_l2")
        state.fallback = not rec.accepted
        return rec

    f0, gnorm, sigma = state.f, state.gnorm, state.control
    m0 = state.counters.inner_matvecs
    rep = _inner_solve(state, variant)
    m1 = state.counters.inner_matvecs
    info = None
    if np.any(rep.s_q):
        slope = float(state.g @ rep.s_q)
        beta = beta_policy("ls_arc", sigma, slope, cfg.beta_min, cfg.beta_max)
        info = direction_analysis(state.g, rep.s_q, beta, cfg.eps_d)
    if info is None or not info.descent_ok:
        rec = arc_l2_iteration(state, mode="fallback_l2")
        rec.matvecs += m1 - m0
        rec.inner_status = f"{rep.status}/descent_failed"
        if info is not None:
            rec.slope, rec.cos_w, rec.beta = info.slope, info.cos_w, info.beta
            if cfg.keep_vectors:
                rec.s_q = [float(v) for v in rep.s_q]
        state.fallback = not rec.accepted
        return rec

    sBs = float(rep.s_q @ rep.Bs)
    gBg = float(state.g @ state.oracle.hvp(state.x, state.g))
    out = arc_accept_loop(state, info, sBs, gBg)
    state.move(out.x_new, out.f_new)
    state.control = out.new_control
    return state.record(
        "scaled", f=f0, gnorm=gnorm, control=sigma, new_control=out.new_control,
        accepted=True, step_length=out.length,
        step_norm=abs(out.length) * info.norm_sq, rho=out.rho, backtracks=out.backtracks,
        inner_iters=rep.iterations, inner_status=rep.status, matvecs=m1 - m0,
        matvecs_after_solve=m1, slope=info.slope, cos_w=info.cos_w, beta=info.beta,
        lagrange=out.control * abs(out.length) * info.m_norm_sq, s_q=rep.s_q, step=out.step,
    )


def lsarc_solve(
    problem: ObjectiveProblem,
    config: Optional[SolverConfig] = None,
    variant: str = "first_order",
) -> RunRecord:
    """Run LS-ARC (``variant="first_order"``) or LS-ARC(s) (``"second_order"``).

    When the quasi-Newton direction fails the descent gate the solver runs
    Euclidean ARC iterations until one succeeds, then returns to the scaled
    norm. Each trace record carries its ``mode`` (``scaled`` or
    ``fallback_l2``).
    """
    if variant not in ("first_order", "second_order"):
        raise ValueError(f"unknown variant {variant!r}")
    config = config or SolverConfig()
    name = "ls-arc" if variant == "first_order" else "ls-arc-s"
    return run_solver(
        problem, config, name, config.sigma0, lambda st: lsarc_iteration(st, variant)
    )
