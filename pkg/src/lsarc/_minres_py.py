"""Pure NumPy MINRES kernel (fallback for the compiled ``_minres_ext``).

Both kernels share one contract::

    minres(hvp, b, rtol, max_inner, inspect, keep_iterates)
        -> (x, rnorm, iterations, matvecs, status, iterates)

``rnorm`` is the recurrence estimate of ``||b - A x||``. ``status`` is one of
``"converged"``, ``"inspect"``, ``"not_converged"``, ``"breakdown"``.
When ``inspect`` is given it replaces the ``rtol`` test: the loop stops at
the first iterate for which ``inspect(x, rnorm)`` is true. ``x`` is the live
work vector; callers copy it if they keep it.
"""
import math

import numpy as np

_TINY = np.finfo(float).tiny


def minres(hvp, b, rtol, max_inner, inspect=None, keep_iterates=False):
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    x = np.zeros(n)
    iterates = [] if keep_iterates else None
    beta1 = math.sqrt(float(b @ b))
    if beta1 == 0.0:
        return x, 0.0, 0, 0, "converged", iterates

    v_prev = np.zeros(n)
    v = b / beta1
    w_prev2 = np.zeros(n)
    w_prev = np.zeros(n)
    beta = 0.0
    cs, sn = -1.0, 0.0
    dbar = 0.0
    eps_prev = 0.0
    phibar = beta1
    tol = rtol * beta1
    matvecs = 0
    status = "not_converged"
    k = 0

    while k < max_inner:
        k += 1
        p = np.asarray(hvp(v), dtype=float)
        matvecs += 1
        if k > 1:
            p = p - beta * v_prev
        alpha = float(v @ p)
        p = p - alpha * v
        beta_next = math.sqrt(float(p @ p))

        # apply previous rotation, build the new one
        delta = cs * dbar + sn * alpha
        gbar = sn * dbar - cs * alpha
        eps_next = sn * beta_next
        dbar = -cs * beta_next
        gamma = math.hypot(gbar, beta_next)
        if gamma <= _TINY:
            status = "breakdown"
            break
        cs = gbar / gamma
        sn = beta_next / gamma
        phi = cs * phibar
        phibar = sn * phibar

        w = (v - eps_prev * w_prev2 - delta * w_prev) / gamma
        x += phi * w
        w_prev2, w_prev = w_prev, w
        eps_prev = eps_next
        rnorm = abs(phibar)

        if keep_iterates:
            iterates.append((x.copy(), rnorm))
        if inspect is not None:
            if inspect(x, rnorm):
                status = "inspect"
                break
        elif rnorm <= tol:
            status = "converged"
            break
        if beta_next <= _TINY:
            # invariant subspace reached: x is final
            status = "breakdown" if rnorm > tol else "converged"
            break
        v_prev = v
        v = p / beta_next
        beta = beta_next

    return x, abs(phibar), k, matvecs, status, iterates
