"""Symmetric (possibly indefinite) linear solves for the quasi-Newton direction.

``solve_symmetric`` runs MINRES on ``B s = -g`` through a Hessian-vector
product only. The recurrence runs in a compiled kernel when the extension is
built and in NumPy otherwise; set ``LSARC_PURE_PYTHON=1`` to force the
fallback. ``BACKEND`` tells which one was picked at import.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from . import _minres_py

try:
    if os.environ.get("LSARC_PURE_PYTHON") == "1":
        raise ImportError("pure-Python backend forced")
    from . import _minres_ext
except ImportError:
    _minres_ext = None

BACKEND = "cython" if _minres_ext is not None else "python"


class SingularSystemError(np.linalg.LinAlgError):
    """Dense solve met a numerically singular matrix."""


def _kernel(backend: Optional[str]):
    backend = backend or BACKEND
    if backend == "cython":
        if _minres_ext is None:
            raise ImportError("compiled MINRES kernel is not available")
        return _minres_ext.minres
    if backend == "python":
        return _minres_py.minres
    raise ValueError(f"unknown backend {backend!r}")


@dataclass
class InnerSolveReport:
    s_q: np.ndarray
    residual_norm: float
    iterations: int
    matvecs: int
    status: str
    Bs: np.ndarray
    recurrence_residual: float = float("nan")
    iterate_trace: Optional[list] = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.status in ("converged", "inspect")


def solve_symmetric(
    hvp: Callable[[np.ndarray], np.ndarray],
    g: np.ndarray,
    rtol: float = 1e-4,
    max_inner: Optional[int] = None,
    inspect: Optional[Callable[[np.ndarray, float], bool]] = None,
    keep_iterates: bool = False,
    backend: Optional[str] = None,
) -> InnerSolveReport:
    """Approximately solve ``B s = -g`` with MINRES.

    Parameters
    ----------
    hvp : callable
        ``v -> B v`` for a symmetric ``B``.
    g : ndarray
        Right-hand side is ``-g``; must be nonzero.
    rtol : float
        Stop at the first iterate with ``||B s + g|| <= rtol ||g||``.
    max_inner : int, optional
        Iteration cap, ``2 n`` by default.
    inspect : callable, optional
        ``inspect(s, rnorm) -> bool`` evaluated on every iterate; when given
        it replaces the ``rtol`` test and the first iterate it accepts is
        returned (status ``"inspect"``).
    keep_iterates : bool
        Record every iterate with its residual estimate.

    Returns
    -------
    InnerSolveReport
        ``residual_norm`` is recomputed from an explicit product ``B s``
        (one extra matvec, included in ``matvecs``); ``Bs`` holds it.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    if not np.any(g):
        raise ValueError("right-hand side g must be nonzero")
    if not 0.0 < rtol < 1.0:
        raise ValueError("rtol must lie in (0, 1)")
    max_inner = 2 * n if max_inner is None else int(max_inner)
    if max_inner < 1:
        raise ValueError("max_inner must be >= 1")

    x, rnorm, iters, matvecs, status, iterates = _kernel(backend)(
        hvp, -g, rtol, max_inner, inspect, keep_iterates
    )
    x = np.array(x, dtype=float)
    if np.any(x):
        Bs = np.asarray(hvp(x), dtype=float)
        matvecs += 1
    else:
        Bs = np.zeros(n)
    return InnerSolveReport(
        s_q=x,
        residual_norm=float(np.linalg.norm(Bs + g)),
        iterations=iters,
        matvecs=matvecs,
        status=status,
        Bs=Bs,
        recurrence_residual=float(rnorm),
        iterate_trace=iterates,
    )


def solve_dense(B: np.ndarray, g: np.ndarray, rcond: float = 1e-13) -> np.ndarray:
    """Solve ``B s = -g`` for a dense symmetric ``B`` by an LDL^T factorization."""
    B = np.asarray(B, dtype=float)
    g = np.asarray(g, dtype=float)
    if B.shape != (g.shape[0], g.shape[0]):
        raise ValueError("shape mismatch between B and g")
    lu, d, perm = scipy.linalg.ldl(B, lower=True)
    # d is block diagonal (1x1 and 2x2 pivots)
    evals = np.linalg.eigvalsh(d)
    scale = max(np.max(np.abs(evals)), np.finfo(float).tiny)
    if np.min(np.abs(evals)) <= rcond * scale:
        raise SingularSystemError("singular_system")
    L = lu[perm]
    y = scipy.linalg.solve_triangular(L, -g[perm], lower=True, unit_diagonal=True)
    z = np.linalg.solve(d, y)
    s = np.empty_like(g)
    s[perm] = scipy.linalg.solve_triangular(L.T, z, lower=False, unit_diagonal=True)
    return s
