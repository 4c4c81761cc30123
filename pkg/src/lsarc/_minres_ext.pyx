# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled MINRES kernel.

Same contract as ``lsarc._minres_py.minres``; the Lanczos three-term
recurrence, the Givens update and the solution update are fused into single
passes over the work vectors. Only the operator application goes back into
Python.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, hypot

cnp.import_array()

cdef double _TINY = np.finfo(float).tiny


def minres(hvp, b, double rtol, Py_ssize_t max_inner, inspect=None, bint keep_iterates=False):
    cdef cnp.ndarray[double, ndim=1] bb = np.ascontiguousarray(b, dtype=np.float64)
    cdef Py_ssize_t n = bb.shape[0]
    cdef Py_ssize_t i, k = 0, matvecs = 0
    cdef cnp.ndarray[double, ndim=1] x_arr = np.zeros(n)
    cdef double[::1] x = x_arr
    cdef double[::1] bv = bb
    iterates = [] if keep_iterates else None

    cdef double beta1 = 0.0
    for i in range(n):
        beta1 += bv[i] * bv[i]
    beta1 = sqrt(beta1)
    if beta1 == 0.0:
        return x_arr, 0.0, 0, 0, "converged", iterates

    cdef double[::1] v_prev = np.zeros(n)
    cdef double[::1] v = np.empty(n)
    cdef double[::1] w_prev2 = np.zeros(n)
    cdef double[::1] w_prev = np.zeros(n)
    cdef double[::1] w = np.zeros(n)
    cdef double[::1] p
    cdef double[::1] tmp
    for i in range(n):
        v[i] = bv[i] / beta1

    cdef double beta = 0.0, beta_next, alpha, delta, gbar, eps_next, gamma
    cdef double cs = -1.0, sn = 0.0, dbar = 0.0, eps_prev = 0.0
    cdef double phibar = beta1, phi, rnorm = beta1, wi
    cdef double tol = rtol * beta1
    status = "not_converged"

    v_obj = np.asarray(v)
    while k < max_inner:
        k += 1
        p = np.array(hvp(v_obj), dtype=np.float64, copy=True)
        matvecs += 1
        alpha = 0.0
        if k > 1:
            for i in range(n):
                p[i] -= beta * v_prev[i]
                alpha += v[i] * p[i]
        else:
            for i in range(n):
                alpha += v[i] * p[i]
        beta_next = 0.0
        for i in range(n):
            p[i] -= alpha * v[i]
            beta_next += p[i] * p[i]
        beta_next = sqrt(beta_next)

        delta = cs * dbar + sn * alpha
        gbar = sn * dbar - cs * alpha
        eps_next = sn * beta_next
        dbar = -cs * beta_next
        gamma = hypot(gbar, beta_next)
        if gamma <= _TINY:
            status = "breakdown"
            break
        cs = gbar / gamma
        sn = beta_next / gamma
        phi = cs * phibar
        phibar = sn * phibar

        for i in range(n):
            wi = (v[i] - eps_prev * w_prev2[i] - delta * w_prev[i]) / gamma
            w_prev2[i] = w_prev[i]
            w_prev[i] = wi
            x[i] += phi * wi
        eps_prev = eps_next
        rnorm = fabs(phibar)

        if keep_iterates:
            iterates.append((x_arr.copy(), rnorm))
        if inspect is not None:
            if inspect(x_arr, rnorm):
                status = "inspect"
                break
        elif rnorm <= tol:
            status = "converged"
            break
        if beta_next <= _TINY:
            status = "breakdown" if rnorm > tol else "converged"
            break
        # rotate buffers: v_prev <- v, v <- p / beta_next
        tmp = v_prev
        v_prev = v
        v = tmp
        for i in range(n):
            v[i] = p[i] / beta_next
        v_obj = np.asarray(v)
        beta = beta_next

    return x_arr, fabs(phibar), k, matvecs, status, iterates
