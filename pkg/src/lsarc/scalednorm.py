"""Bookkeeping for the iteration-dependent scaled norm.

The norm is defined implicitly by an SPD matrix ``M`` with
``M s_q = (theta / g's_q) g`` and ``theta = beta ||s_q||^2``. Solver paths
never form ``M``: they only need ``||s_q||_M = sqrt(theta)`` and
``||g||_M = sqrt(chi) ||g||``, both closed-form in ``beta`` and the cosine
between ``g`` and ``s_q``. :func:`build_explicit_M` assembles one such
matrix for small dimensions so tests can check those identities directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .records import ConfigurationError

COS_FLOOR = 1e-300


class AssumptionViolated(ValueError):
    """The direction is (numerically) orthogonal to the gradient."""


@dataclass(frozen=True)
class DirectionInfo:
    g: np.ndarray
    s_q: np.ndarray
    slope: float
    norm_sq: float
    norm_g: float
    cos_w: float
    beta: float
    theta: float
    chi: float
    m_norm_sq: float
    m_norm_g: float
    descent_ok: bool
    orthogonal: bool

    @property
    def sign(self) -> float:
        return 1.0 if self.slope > 0 else -1.0


def chi_factor(cos_w: float) -> float:
    """``chi / beta`` as a function of the cosine alone."""
    c2 = cos_w * cos_w
    return 2.5 - 1.5 * c2 + 2.0 * ((1.0 - c2) / cos_w) ** 2


def direction_analysis(g, s_q, beta: float, eps_d: float) -> DirectionInfo:
    g = np.asarray(g, dtype=float)
    s_q = np.asarray(s_q, dtype=float)
    norm_g = float(np.linalg.norm(g))
    norm_sq = float(np.linalg.norm(s_q))
    if norm_g == 0.0 or norm_sq == 0.0:
        raise ValueError("g and s_q must be nonzero")
    if not beta > 0.0:
        raise ValueError("beta must be positive")
    slope = float(g @ s_q)
    cos_w = slope / (norm_g * norm_sq)
    cos_w = min(1.0, max(-1.0, cos_w))
    orthogonal = abs(cos_w) < COS_FLOOR
    descent_ok = slope != 0.0 and abs(slope) >= eps_d * norm_g * norm_sq
    theta = beta * norm_sq * norm_sq
    chi = float("nan") if orthogonal else beta * chi_factor(cos_w)
    return DirectionInfo(
        g=g,
        s_q=s_q,
        slope=slope,
        norm_sq=norm_sq,
        norm_g=norm_g,
        cos_w=cos_w,
        beta=beta,
        theta=theta,
        chi=chi,
        m_norm_sq=math.sqrt(theta),
        m_norm_g=math.sqrt(chi) * norm_g if not orthogonal else float("nan"),
        descent_ok=descent_ok,
        orthogonal=orthogonal,
    )


def beta_policy(
    method: str,
    sigma: Optional[float],
    slope: float,
    beta_min: float = 1e-12,
    beta_max: float = 1e12,
) -> float:
    """Scaling ``beta_k``: ``1e-4 sigma^(-2/3)`` or ``2`` for LS-ARC, ``1`` for LS-TR.

    The result is clamped into ``[beta_min, beta_max]``.
    """
    if method == "ls_arc":
        if sigma is None or not sigma > 0.0:
            raise ValueError("ls_arc beta policy needs sigma > 0")
        beta = 1e-4 * sigma ** (-2.0 / 3.0) if slope < 0 else 2.0
    elif method == "ls_tr":
        beta = 1.0
    else:
        raise ConfigurationError(f"unknown beta policy {method!r}")
    return min(max(beta, beta_min), beta_max)


@dataclass(frozen=True)
class ExplicitScaledNorm:
    M: np.ndarray
    N: np.ndarray
    gamma: float
    basis: np.ndarray
    D: np.ndarray


def build_explicit_M(info: DirectionInfo, d_fill: float = 1.0, dtype=np.float64) -> ExplicitScaledNorm:
    """Assemble an SPD ``M`` realizing the scaled norm of ``info``.

    ``M = [s, gbar, q3..qn] diag(N, D) [..]^T`` where ``s`` is the unit
    direction, ``gbar`` the unit component of ``g`` orthogonal to it, and
    ``N = [[b, b tan], [b tan, gamma]]`` with ``gamma = 2 b tan^2 + b / 2``
    so that ``lambda_min(N) = b / 2`` and ``lambda_max(N) = b (1 + 2 tan^2)``.

    Parameters
    ----------
    info : DirectionInfo
        Must pass the descent gate.
    d_fill : float
        Diagonal value on the orthogonal complement.
    dtype : numpy dtype
        Working and output precision. Entries of ``M`` span a ratio of about
        ``2 / cos^2``, so near the descent gate double precision loses six
        digits in products with ``M``; ``np.longdouble`` keeps the identities
        at the 1e-12 level where the platform provides extended precision.
    """
    if not info.descent_ok:
        raise AssumptionViolated("assumption_violated: direction fails the descent gate")
    n = info.s_q.shape[0]
    if n > 200:
        raise ConfigurationError("explicit M is a small-dimension oracle (n <= 200)")
    if n < 2:
        raise ConfigurationError("explicit M needs n >= 2")
    dt = np.dtype(dtype)
    s = info.s_q.astype(dt)
    g = info.g.astype(dt)
    s_bar = s / np.sqrt(s @ s)
    g_unit = g / np.sqrt(g @ g)
    cos_w = g_unit @ s_bar
    resid = g_unit - cos_w * s_bar
    resid -= (resid @ s_bar) * s_bar
    sin_w = np.sqrt(resid @ resid)
    if sin_w > 1e-14:
        g_bar = resid / sin_w
    else:
        sin_w = dt.type(0)
        e = np.zeros(n, dtype=dt)
        e[int(np.argmin(np.abs(info.s_q)))] = 1
        g_bar = e - (e @ s_bar) * s_bar
        g_bar /= np.sqrt(g_bar @ g_bar)
    tan_w = sin_w / cos_w
    beta = dt.type(info.beta)
    gamma = 2 * beta * tan_w * tan_w + beta / 2
    N = np.array([[beta, beta * tan_w], [beta * tan_w, gamma]], dtype=dt)

    pair = np.column_stack([s_bar, g_bar])
    Q, _ = np.linalg.qr(
        np.column_stack([pair.astype(np.float64), np.eye(n)]), mode="complete"
    )
    rest = Q[:, 2:n].astype(dt)
    rest -= pair @ (pair.T @ rest)
    basis = np.column_stack([pair, rest])
    D = np.full(n - 2, d_fill, dtype=dt)
    M = pair @ N @ pair.T + (rest * D) @ rest.T
    M = (M + M.T) / 2
    return ExplicitScaledNorm(M=M, N=N, gamma=float(gamma), basis=basis, D=D)


def cubic_model_value(
    f0: float,
    info: DirectionInfo,
    curvature: float,
    sigma: float,
    t: float,
    along: str = "s_q",
) -> float:
    """Cubic model ``m(t d)`` in the scaled norm for ``d = s_q`` or ``d = -g``.

    ``curvature`` is ``d' B d`` for the chosen ``d``. With ``sigma = 0`` this
    is the quadratic model.
    """
    if along == "s_q":
        lin = t * info.slope
        cube = info.theta**1.5 * abs(t) ** 3
    elif along == "neg_g":
        lin = -t * info.norm_g**2
        cube = (info.m_norm_g * abs(t)) ** 3
    else:
        raise ValueError(f"unknown direction {along!r}")
    return f0 + lin + 0.5 * t * t * curvature + sigma / 3.0 * cube
