import math

import numpy as np
import pytest

from helpers import quadratic, state_at
from lsarc import SolverConfig, make_problem
from lsarc.problems import ObjectiveProblem
from lsarc.ls_arc import arc_accept_loop, arc_step_lengths, lsarc_solve, second_order_gate
from lsarc.scalednorm import build_explicit_M, direction_analysis


def info_with(slope_sign, sigma_theta15, sigma=1.0):
    """Unit ``s_q`` with ``|slope| = 1`` and ``sigma theta^1.5`` prescribed."""
    s = np.array([1.0, 0.0])
    g = np.array([slope_sign * 1.0, 0.0])
    beta = (sigma_theta15 / sigma) ** (2.0 / 3.0)
    return direction_analysis(g, s, beta, 1e-3)


def test_step_length_examples():
    info = info_with(-1.0, 2.0)
    delta, delta_c = arc_step_lengths(info, 1.0, 1.0)
    assert delta == pytest.approx(0.5, rel=1e-14) and delta_c > 0
    info = info_with(+1.0, 2.0)
    delta, _ = arc_step_lengths(info, 1.0, 1.0)
    assert delta == pytest.approx(-1.0, rel=1e-14)
    st = info.slope * (1 - delta) + 2.0 * abs(delta) * delta
    assert abs(st) <= 1e-12


def test_newton_limit():
    info = info_with(-1.0, 2.0, sigma=1.0)
    delta, _ = arc_step_lengths(info, 1e-12, 1.0)
    assert abs(delta - 1.0) <= 1e-6


@pytest.mark.parametrize("sign", [-1.0, 1.0])
def test_scalar_stationarity_random(sign):
    rng = np.random.default_rng(0)
    for _ in range(200):
        k = 10 ** rng.uniform(-6, 6)
        info = info_with(sign, k)
        sigma = 10 ** rng.uniform(-3, 3)
        delta, _ = arc_step_lengths(info, sigma, rng.normal())
        c = sigma * info.theta**1.5
        resid = info.slope * (1 - delta) + c * abs(delta) * delta
        assert abs(resid) <= 1e-10 * max(abs(info.slope), c * delta * delta)


def test_second_order_gate():
    info = info_with(-1.0, 2.0)
    assert second_order_gate(0.0, info, 1.0, 1.0)
    assert second_order_gate(0.5, info, 1.0, 1.0)  # equality is inclusive
    assert not second_order_gate(0.6, info, 1.0, 1.0)


def test_model_gradient_identity():
    rng = np.random.default_rng(1)
    for _ in range(20):
        n = 6
        A = rng.standard_normal((n, n))
        B = (A + A.T) / 2 + 3 * np.eye(n)
        g = rng.standard_normal(n)
        s_q = -np.linalg.solve(B, g) + 1e-3 * rng.standard_normal(n)
        info = direction_analysis(g, s_q, 10 ** rng.uniform(-1, 1), 1e-3)
        sigma = 10 ** rng.uniform(-1, 1)
        delta, _ = arc_step_lengths(info, sigma, 1.0)
        M = build_explicit_M(info, dtype=np.longdouble).M.astype(float)
        s = delta * s_q
        grad_m = g + B @ s + sigma * math.sqrt(s @ M @ s) * (M @ s)
        ref = delta * (B @ s_q + g)
        assert np.linalg.norm(grad_m - ref) <= 1e-8 * max(np.linalg.norm(ref), np.linalg.norm(g))


def test_accept_first_trial_on_quadratic():
    B = np.diag([1.0, 2.0, 3.0])
    p = quadratic(B, [1.0, 1.0, 1.0], np.zeros(3))
    st = state_at(p, p.x0, 1e-8)
    s_q = -np.linalg.solve(B, st.g)
    info = direction_analysis(st.g, s_q, 1e-4 * (1e-8) ** (-2 / 3), 1e-3)
    out = arc_accept_loop(st, info, s_q @ B @ s_q, st.g @ B @ st.g)
    assert out.accepted and out.backtracks == 0
    assert out.rho == pytest.approx(1.0, abs=1e-6)
    assert out.new_control == max(0.5 * 1e-8, SolverConfig().sigma_min)


def test_saddle_iteration_one_step():
    p = make_problem("saddle2d", 2)
    x1 = np.array([0.5780, 3.7063])
    st = state_at(p, x1, 1.0)
    s_q = np.array([-0.5780, -3.7063])
    info = direction_analysis(st.g, s_q, 2.0, 1e-3)
    B = np.diag([2.0, -2.0])
    f0 = st.f
    out = arc_accept_loop(st, info, s_q @ B @ s_q, st.g @ B @ st.g)
    assert out.accepted and out.f_new < f0 and out.length < 0


def pseudo_huber():
    return ObjectiveProblem(
        name="huber", n=2, x0=np.array([2.0, 3.0]),
        fun=lambda x: float(np.sum(np.sqrt(1 + x * x))),
        grad=lambda x: x / np.sqrt(1 + x * x),
        hessvec=lambda x, v: v * (1 + x * x) ** -1.5,
    )


def test_backtracking_shrinks_step():
    # the Newton step of sum sqrt(1 + x^2) overshoots by a factor of ~x^2
    p = pseudo_huber()
    x = p.x0
    st = state_at(p, x, 1e-6)
    H = np.diag((1 + x * x) ** -1.5)
    s_q = -np.linalg.solve(H, st.g)
    beta = 1e-4 * 1e-6 ** (-2 / 3)
    info = direction_analysis(st.g, s_q, beta, 1e-3)
    out = arc_accept_loop(st, info, s_q @ H @ s_q, st.g @ H @ st.g)
    assert out.backtracks > 0
    lengths = [abs(arc_step_lengths(info, 1e-6 * 2.0**j, 1.0)[0]) for j in range(out.backtracks + 1)]
    assert all(a > b for a, b in zip(lengths, lengths[1:]))
    assert out.control == pytest.approx(1e-6 * 2.0**out.backtracks)


def test_saddle_run_switches_modes():
    rec = lsarc_solve(make_problem("saddle2d", 2), SolverConfig(trace=True, keep_vectors=True))
    assert rec.status == "diverged"
    t0, t1 = rec.trace[0], rec.trace[1]
    assert t0.mode == "fallback_l2" and t0.accepted
    np.testing.assert_allclose(t0.step, [-0.4220, 2.7063], atol=1e-3)
    assert t1.mode == "scaled" and abs(t1.f - (-13.4027)) < 1e-3
    np.testing.assert_allclose(t1.s_q, [-0.5780, -3.7063], atol=1e-3)


@pytest.mark.parametrize("variant", ["first_order", "second_order"])
def test_quad_spd_converges(variant):
    rec = lsarc_solve(make_problem("quad_spd", 50, seed=0), SolverConfig(trace=True), variant)
    assert rec.status == "converged" and rec.outer_iters <= 10
    for a, b in zip(rec.trace, rec.trace[1:]):
        assert b.f < a.f


def test_trace_invariants():
    cfg = SolverConfig(trace=True)
    rec = lsarc_solve(make_problem("rosenbrock", 20), cfg)
    assert rec.status == "converged"
    assert sum(t.matvecs for t in rec.trace) == rec.inner_matvecs
    for t in rec.trace:
        assert t.new_control >= cfg.sigma_min
        if t.mode == "scaled":
            accepted_sigma = t.control * cfg.nu2**t.backtracks
            assert t.new_control == max(cfg.nu1 * accepted_sigma, cfg.sigma_min)
            # backtracking reuses the direction: no inner products after the solve
            assert t.matvecs_after_accept == t.matvecs_after_solve


def test_stationary_start():
    p = quadratic(np.eye(3), np.zeros(3), np.zeros(3))
    rec = lsarc_solve(p)
    assert rec.status == "converged" and rec.outer_iters == 0


def test_bad_variant():
    with pytest.raises(ValueError):
        lsarc_solve(make_problem("saddle2d", 2), variant="third")


def test_stalled_run_closes_trace():
    p = pseudo_huber()
    cfg = SolverConfig(trace=True, sigma0=1e-6, max_backtracks=1)
    rec = lsarc_solve(p, cfg)
    assert rec.status == "error" and rec.message.startswith("backtracking_stalled")
    last = rec.trace[-1]
    assert last.mode == "aborted" and not last.accepted and last.matvecs > 0
    assert sum(t.matvecs for t in rec.trace) == rec.inner_matvecs
