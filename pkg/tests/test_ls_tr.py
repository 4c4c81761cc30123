import math

import numpy as np
import pytest

from helpers import quadratic, state_at
from lsarc import SolverConfig, make_problem
from lsarc.ls_tr import (
    cauchy_length_exact,
    cauchy_length_printed,
    lagrange_multiplier,
    lstr_solve,
    tr_accept_loop,
    tr_step_lengths,
)
from lsarc.scalednorm import build_explicit_M, direction_analysis


def info_root_theta(sign, root_theta):
    """Unit direction with ``sqrt(theta)`` prescribed (``beta = root_theta^2``)."""
    return direction_analysis(np.array([sign, 0.5]), np.array([1.0, 0.0]), root_theta**2, 1e-3)


@pytest.mark.parametrize(
    "sign, radius, expected",
    [(-1.0, 10.0, 1.0), (-1.0, 1.0, 0.5), (1.0, 1.0, -0.5)],
)
def test_step_length_examples(sign, radius, expected):
    info = info_root_theta(sign, 2.0)
    alpha, alpha_c, _ = tr_step_lengths(info, radius, 1.0)
    assert alpha == pytest.approx(expected, rel=1e-15)
    assert abs(alpha) * info.m_norm_sq <= radius * (1 + 1e-15)
    assert alpha_c * math.sqrt(info.chi) * info.norm_g <= radius * (1 + 1e-12)


def test_cauchy_cross_check():
    rng = np.random.default_rng(0)
    corrected = 0
    for _ in range(300):
        g, s = rng.standard_normal((2, 4))
        info = direction_analysis(g, s, 10 ** rng.uniform(-1, 1), 1e-3)
        if not info.descent_ok:
            continue
        radius = 10 ** rng.uniform(-2, 2)
        gBg = rng.normal() * info.norm_g**2
        _, alpha_c, flag = tr_step_lengths(info, radius, gBg)
        exact = cauchy_length_exact(info, radius, gBg)
        # the returned length always minimizes m_Q(-t g) over the scaled region
        assert alpha_c == pytest.approx(exact, rel=1e-10)
        corrected += flag
        if not flag:
            assert cauchy_length_printed(info, radius, gBg) == alpha_c
    assert corrected > 0  # the printed interior branch does disagree somewhere


def test_accept_first_trial_on_quadratic():
    B = np.diag([1.0, 2.0, 3.0])
    p = quadratic(B, [1.0, -1.0, 2.0], np.zeros(3))
    st = state_at(p, p.x0, 1e6)
    s_q = -np.linalg.solve(B, st.g)
    info = direction_analysis(st.g, s_q, 1.0, 1e-3)
    out = tr_accept_loop(st, info, s_q @ B @ s_q, st.g @ B @ st.g)
    assert out.length == 1.0 and out.backtracks == 0
    assert out.rho == pytest.approx(1.0, abs=1e-12)
    assert out.new_control == min(2.0 * 1e6, SolverConfig().delta_max)


def test_ascent_direction_reversed():
    p = make_problem("saddle2d", 2)
    x1 = np.array([0.5780, 3.7063])
    st = state_at(p, x1, 1.0)
    s_q = np.array([-0.5780, -3.7063])
    info = direction_analysis(st.g, s_q, 1.0, 1e-3)
    B = np.diag([2.0, -2.0])
    out = tr_accept_loop(st, info, s_q @ B @ s_q, st.g @ B @ st.g)
    assert out.length < 0 and out.f_new < st.f


def test_failing_trials_shrink_radius():
    x0 = np.array([2.0, 3.0])
    from lsarc.problems import ObjectiveProblem

    p = ObjectiveProblem(
        name="huber", n=2, x0=x0,
        fun=lambda x: float(np.sum(np.sqrt(1 + x * x))),
        grad=lambda x: x / np.sqrt(1 + x * x),
        hessvec=lambda x, v: v * (1 + x * x) ** -1.5,
    )
    st = state_at(p, x0, 1e3)
    H = np.diag((1 + x0 * x0) ** -1.5)
    s_q = -np.linalg.solve(H, st.g)
    info = direction_analysis(st.g, s_q, 1.0, 1e-3)
    out = tr_accept_loop(st, info, s_q @ H @ s_q, st.g @ H @ st.g)
    assert out.backtracks > 0
    radii = [1e3 * 0.5**j for j in range(out.backtracks + 1)]
    alphas = [abs(tr_step_lengths(info, r, st.g @ H @ st.g)[0]) for r in radii]
    assert all(a >= b for a, b in zip(alphas, alphas[1:])) and alphas[-1] < alphas[0]
    assert out.control == pytest.approx(radii[-1])


def test_lagrange_multiplier_boundary():
    rng = np.random.default_rng(2)
    checked = 0
    for _ in range(40):
        n = 5
        A = rng.standard_normal((n, n))
        B = (A + A.T) / 2
        g = rng.standard_normal(n)
        try:
            s_q = -np.linalg.solve(B, g)
        except np.linalg.LinAlgError:
            continue
        info = direction_analysis(g, s_q, 1.0, 1e-3)
        if not info.descent_ok:
            continue
        radius = 0.3 * info.m_norm_sq
        alpha, _, _ = tr_step_lengths(info, radius, g @ B @ g)
        lam = lagrange_multiplier(info, radius)
        M = build_explicit_M(info, dtype=np.longdouble).M.astype(float)
        r = (B + lam * M) @ (alpha * s_q) + g
        assert np.linalg.norm(r) <= 1e-8 * max(1.0, np.linalg.norm(g))
        checked += 1
    assert checked > 10


def test_quad_spd():
    rec = lstr_solve(make_problem("quad_spd", 50, seed=0), SolverConfig(trace=True))
    assert rec.status == "converged" and rec.outer_iters <= 10


def test_saddle_fallback_first():
    rec = lstr_solve(make_problem("saddle2d", 2), SolverConfig(trace=True))
    assert rec.trace[0].mode == "fallback_l2"
    assert rec.status == "diverged"


def test_trace_invariants():
    cfg = SolverConfig(trace=True)
    rec = lstr_solve(make_problem("broyden_tridiag", 30), cfg)
    assert rec.status == "converged"
    for t in rec.trace:
        if t.mode != "scaled":
            continue
        accepted_radius = t.control * cfg.tau1**t.backtracks
        assert t.new_control == min(cfg.tau2 * accepted_radius, cfg.delta_max)
        assert t.matvecs_after_accept == t.matvecs_after_solve
        assert t.step_norm * math.sqrt(t.beta) <= accepted_radius + 1e-12


def test_stationary_start():
    p = quadratic(np.eye(2), np.zeros(2), np.zeros(2))
    assert lstr_solve(p).outer_iters == 0
