"""Euclidean-norm cubic and trust-region subproblem solvers.

Both problems share one secular core. With ``B = V diag(lam) V^T`` and
``c = V^T g`` the minimizer is ``s(mu) = -V (c / (lam + mu))`` for the
multiplier ``mu >= max(0, -lam_min)`` that solves

    ||s(mu)|| = mu / sigma      (cubic, weight sigma)
    ||s(mu)|| = radius          (trust region, boundary solution)

The root is bracketed and found with Brent's method. When ``g`` has no
component along the leftmost eigenvector and the bracket collapses (the
"hard case"), the leftmost eigenvector is added to reach the target norm.

Matrix-free variants run a fully reorthogonalized Lanczos process started at
``g`` and solve the reduced tridiagonal problem with the same core after every
step; the stationarity residual of the expanded step is available for free as
``beta_{j+1} |h_j|``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
import scipy.linalg
import scipy.optimize

Operator = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]

_EPS = np.finfo(float).eps


@dataclass
class SubproblemResult:
    """Approximate minimizer of a Euclidean-norm model.

    ``quad`` is ``g's + s'Bs / 2`` (the change in the quadratic model),
    ``value`` the change in the full model (adds ``sigma/3 ||s||^3`` for the
    cubic). ``multiplier`` is ``sigma ||s||`` for the cubic and the
    trust-region Lagrange multiplier otherwise.
    """

    s: np.ndarray
    multiplier: float
    quad: float
    value: float
    hard_case: bool = False
    on_boundary: bool = False
    cauchy_fallback: bool = False
    iterations: int = 0
    matvecs: int = 0
    residual: float = 0.0


# --------------------------------------------------------------------------
# secular core


def _secular(evals: np.ndarray, c: np.ndarray, sigma: float = None, radius: float = None):
    """Solve the cubic (``sigma``) or trust-region (``radius``) secular problem.

    Returns ``(z, mu, hard, boundary)`` with ``z`` in the eigenbasis.
    """
    cubic = sigma is not None
    evals = np.asarray(evals, dtype=float)
    c = np.asarray(c, dtype=float)
    lam1 = float(evals[0])
    scale = max(1.0, float(np.max(np.abs(evals))))
    tiny = 1e-14 * scale

    def target(mu):
        return mu / sigma if cubic else radius

    def phi(mu):
        return float(np.linalg.norm(c / (evals + mu))) - target(mu)

    if lam1 > 0.0:
        z0 = -c / evals
        if not cubic and np.linalg.norm(z0) <= radius:
            return z0, 0.0, False, False
        if not np.any(c):
            return np.zeros_like(c), 0.0, False, False
        a = 0.0
    else:
        a = -lam1 + tiny

    if phi(a) <= 0.0:
        # hard (or numerically hard) case: mu pinned at -lam_min
        mu = max(0.0, -lam1)
        z = np.zeros_like(c)
        free = evals + mu > tiny
        z[free] = -c[free] / (evals[free] + mu)
        rest = target(mu) ** 2 - float(z @ z)
        left = int(np.flatnonzero(~free)[0]) if np.any(~free) else 0
        sgn = -1.0 if c[left] > 0 else 1.0
        z[left] += sgn * math.sqrt(max(rest, 0.0))
        return z, mu, True, True

    hi = max(2.0 * a, a + 1.0)
    for _ in range(2100):
        if phi(hi) < 0.0:
            break
        hi = a + 2.0 * (hi - a)
    mu = scipy.optimize.brentq(phi, a, hi, xtol=1e-300, rtol=4.0 * _EPS, maxiter=500)
    z = -c / (evals + mu)
    return z, float(mu), False, True


def _model_parts(z, c, evals):
    return float(c @ z + 0.5 * (evals * z) @ z)


def _as_dense(B: Operator, n: int) -> np.ndarray:
    if callable(B):
        eye = np.eye(n)
        B = np.column_stack([np.asarray(B(eye[:, j]), dtype=float) for j in range(n)])
    B = np.asarray(B, dtype=float)
    return 0.5 * (B + B.T)


# --------------------------------------------------------------------------
# Cauchy steps


def cubic_cauchy_l2(g: np.ndarray, gBg: float, sigma: float):
    """Exact minimizer ``-t g`` of the Euclidean cubic model along ``-g``.

    Returns ``(t, model change)``.
    """
    gn = float(np.linalg.norm(g))
    q = gBg / (gn * gn)
    t = 2.0 / (q + math.sqrt(q * q + 4.0 * sigma * gn))
    value = -t * gn * gn + 0.5 * t * t * gBg + sigma / 3.0 * (t * gn) ** 3
    return t, value


def tr_cauchy_l2(g: np.ndarray, gBg: float, radius: float):
    """Minimizer ``-t g`` of the quadratic model inside the ball. Returns ``(t, change)``."""
    gn = float(np.linalg.norm(g))
    t_max = radius / gn
    t = t_max if gBg <= 0.0 else min(gn * gn / gBg, t_max)
    return t, -t * gn * gn + 0.5 * t * t * gBg


# --------------------------------------------------------------------------
# dense solvers


def _dense(g, B, sigma=None, radius=None) -> SubproblemResult:
    g = np.asarray(g, dtype=float)
    B = _as_dense(B, g.shape[0])
    evals, V = np.linalg.eigh(B)
    c = V.T @ g
    z, mu, hard, boundary = _secular(evals, c, sigma=sigma, radius=radius)
    s = V @ z
    quad = _model_parts(z, c, evals)
    nrm = float(np.linalg.norm(z))
    value = quad + (sigma / 3.0 * nrm**3 if sigma is not None else 0.0)
    resid = float(np.linalg.norm(B @ s + g + mu * s))
    return SubproblemResult(
        s=s, multiplier=mu, quad=quad, value=value, hard_case=hard,
        on_boundary=boundary, residual=resid,
    )


# --------------------------------------------------------------------------
# Lanczos (GLRT / GLTR style)


def _lanczos_solve(g, hvp, max_iter, rtol, sigma=None, radius=None) -> SubproblemResult:
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    gn = float(np.linalg.norm(g))
    max_iter = min(int(max_iter), n)
    Q = np.zeros((n, max_iter))
    alphas, betas = [], []
    q = g / gn
    q_prev = np.zeros(n)
    b_prev = 0.0
    matvecs = 0
    h = np.zeros(1)
    mu, hard, boundary, resid = 0.0, False, False, float("inf")
    T_scale = 0.0
    for j in range(max_iter):
        Q[:, j] = q
        w = np.asarray(hvp(q), dtype=float)
        matvecs += 1
        a = float(q @ w)
        w = w - a * q - b_prev * q_prev
        for _ in range(2):
            w -= Q[:, : j + 1] @ (Q[:, : j + 1].T @ w)
        b = float(np.linalg.norm(w))
        alphas.append(a)
        T_scale = max(T_scale, abs(a) + b + b_prev)

        d = np.array(alphas)
        e = np.array(betas)
        if j == 0:
            evals, V = d.copy(), np.ones((1, 1))
        else:
            evals, V = scipy.linalg.eigh_tridiagonal(d, e)
        c = gn * V[0, :]
        z, mu, hard, boundary = _secular(evals, c, sigma=sigma, radius=radius)
        h = V @ z
        resid = b * abs(h[-1])
        if resid <= rtol * gn or b <= 1e-14 * max(T_scale, 1.0) or j == max_iter - 1:
            break
        betas.append(b)
        q_prev, q, b_prev = q, w / b, b

    k = len(alphas)
    s = Q[:, :k] @ h
    d = np.array(alphas)
    e = np.array(betas[: k - 1])
    Th = d * h
    if k > 1:
        Th[:-1] += e * h[1:]
        Th[1:] += e * h[:-1]
    quad = float(gn * h[0] + 0.5 * h @ Th)
    value = quad + (sigma / 3.0 * float(np.linalg.norm(h)) ** 3 if sigma is not None else 0.0)
    return SubproblemResult(
        s=s, multiplier=mu, quad=quad, value=value, hard_case=hard,
        on_boundary=boundary, iterations=k, matvecs=matvecs, residual=resid,
    ), alphas[0] * gn * gn


def _steihaug(g, hvp, max_iter, rtol, radius):
    """Truncated CG; returns ``(s, quad, iters, gBg)`` or ``None`` on hitting the boundary."""
    g = np.asarray(g, dtype=float)
    gn = float(np.linalg.norm(g))
    s = np.zeros_like(g)
    r = g.copy()
    d = -r
    rr = float(r @ r)
    gBg = None
    for i in range(int(max_iter)):
        Bd = np.asarray(hvp(d), dtype=float)
        dBd = float(d @ Bd)
        if i == 0:
            gBg = dBd
        if dBd <= 0.0:
            return None, i + 1, gBg
        alpha = rr / dBd
        s_next = s + alpha * d
        if np.linalg.norm(s_next) >= radius:
            return None, i + 1, gBg
        s = s_next
        r = r + alpha * Bd
        rr_next = float(r @ r)
        if math.sqrt(rr_next) <= rtol * gn:
            # r = g + B s, so g's + s'Bs/2 = (g's + r's)/2
            quad = 0.5 * float(g @ s + r @ s)
            return (s, quad), i + 1, gBg
        d = -r + (rr_next / rr) * d
        rr = rr_next
    return None, int(max_iter), gBg


# --------------------------------------------------------------------------
# public entry points


def cubic_subproblem_l2(
    g: np.ndarray,
    B: Operator,
    sigma: float,
    mode: str = "dense_exact",
    rtol: float = 1e-6,
    max_iter: int = None,
) -> SubproblemResult:
    """Minimize ``g's + s'Bs/2 + sigma/3 ||s||^3`` over ``s``.

    Parameters
    ----------
    g : ndarray
        Gradient, nonzero.
    B : ndarray or callable
        Dense symmetric matrix or Hessian-vector product.
    sigma : float
        Regularization weight, positive.
    mode : {"dense_exact", "lanczos"}
        ``dense_exact`` returns the global minimizer (``n <= 200``);
        ``lanczos`` minimizes over growing Krylov subspaces until the
        stationarity residual is at most ``rtol ||g||``.

    Returns
    -------
    SubproblemResult
        The step always decreases the model at least as much as the Cauchy
        step; if the Krylov solution does not, the Cauchy step is returned
        and ``cauchy_fallback`` is set.
    """
    g = np.asarray(g, dtype=float)
    if not sigma > 0.0:
        raise ValueError("sigma must be positive")
    if not np.any(g):
        raise ValueError("g must be nonzero")
    n = g.shape[0]
    if mode == "dense_exact":
        if n > 200:
            raise ValueError("dense_exact is limited to n <= 200")
        res = _dense(g, B, sigma=sigma)
        return res
    if mode != "lanczos":
        raise ValueError(f"unknown cubic subproblem mode {mode!r}")
    hvp = B if callable(B) else (lambda v, B=np.asarray(B, dtype=float): B @ v)
    res, gBg = _lanczos_solve(g, hvp, max_iter or n, rtol, sigma=sigma)
    t, cval = cubic_cauchy_l2(g, gBg, sigma)
    if res.value > cval + 1e-12 * abs(cval):
        return SubproblemResult(
            s=-t * g, multiplier=sigma * t * float(np.linalg.norm(g)),
            quad=cval - sigma / 3.0 * (t * float(np.linalg.norm(g))) ** 3,
            value=cval, cauchy_fallback=True, iterations=res.iterations,
            matvecs=res.matvecs, residual=float("nan"),
        )
    return res


def tr_subproblem_l2(
    g: np.ndarray,
    B: Operator,
    radius: float,
    mode: str = "dense_exact",
    rtol: float = 1e-6,
    max_iter: int = None,
) -> SubproblemResult:
    """Minimize ``g'p + p'Bp/2`` subject to ``||p|| <= radius``.

    ``mode="steihaug"`` runs truncated conjugate gradients; when CG leaves
    the ball or meets nonpositive curvature the boundary solution is refined
    by a Lanczos (GLTR-style) pass instead of stopping at the crossing
    point, so the result matches ``dense_exact`` to the requested tolerance.
    """
    g = np.asarray(g, dtype=float)
    if not radius > 0.0:
        raise ValueError("radius must be positive")
    if not np.any(g):
        raise ValueError("g must be nonzero")
    n = g.shape[0]
    if mode == "dense_exact":
        if n > 200:
            raise ValueError("dense_exact is limited to n <= 200")
        return _dense(g, B, radius=radius)
    if mode != "steihaug":
        raise ValueError(f"unknown trust-region subproblem mode {mode!r}")
    hvp = B if callable(B) else (lambda v, B=np.asarray(B, dtype=float): B @ v)
    max_iter = max_iter or n
    interior, cg_iters, gBg = _steihaug(g, hvp, max_iter, rtol, radius)
    if interior is not None:
        s, quad = interior
        t, cval = tr_cauchy_l2(g, gBg, radius)
        if quad <= cval + 1e-12 * abs(cval):
            return SubproblemResult(
                s=s, multiplier=0.0, quad=quad, value=quad,
                iterations=cg_iters, matvecs=cg_iters, residual=float("nan"),
            )
    res, gBg = _lanczos_solve(g, hvp, max_iter, rtol, radius=radius)
    res.iterations += cg_iters
    res.matvecs += cg_iters
    t, cval = tr_cauchy_l2(g, gBg, radius)
    if res.quad > cval + 1e-12 * abs(cval):
        return SubproblemResult(
            s=-t * g, multiplier=float("nan"), quad=cval, value=cval,
            on_boundary=t * float(np.linalg.norm(g)) >= radius * (1 - 1e-12),
            cauchy_fallback=True, iterations=res.iterations, matvecs=res.matvecs,
            residual=float("nan"),
        )
    return res
