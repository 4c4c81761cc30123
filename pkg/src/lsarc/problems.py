"""Objective interface and a scalable suite of unconstrained test problems.

Every family provides the objective, its gradient and a Hessian-vector
product in closed form. Dense Hessians are only ever assembled column by
column from the product (``ObjectiveProblem.dense_hessian``), and only for
small dimensions.

Families (``make_problem(name, n)``)::

    saddle2d          x^2 - y^2, unbounded below, n = 2
    rosenbrock        extended Rosenbrock (independent pairs), n even
    genrose           chained Rosenbrock
    powell            extended Powell singular, n % 4 == 0
    tridiag           generalized tridiagonal quadratic
    quad_spd          seeded random SPD quadratic
    trig              trigonometric sum of squares (dense Hessian, O(n) products)
    arwhead, engval1, broyden_tridiag, beale, dixon_price, wood, dqdrtic,
    liarwhd, quartc, edensch, cosine, fletchcr, himmelblau, nondia
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .records import ConfigurationError, EvalCounters, EvaluationError

DENSE_LIMIT = 200


@dataclass(frozen=True)
class ObjectiveProblem:
    name: str
    n: int
    x0: np.ndarray
    fun: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    hessvec: Callable[[np.ndarray, np.ndarray], np.ndarray]
    f_low: Optional[float] = None
    f_star: Optional[float] = None

    def dense_hessian(self, x: np.ndarray) -> np.ndarray:
        if self.n > DENSE_LIMIT:
            raise ConfigurationError(
                f"dense Hessian requested for n={self.n} > {DENSE_LIMIT}"
            )
        eye = np.eye(self.n)
        H = np.column_stack([self.hessvec(x, eye[:, j]) for j in range(self.n)])
        return 0.5 * (H + H.T)


def _check_point(problem, x):
    x = np.asarray(x, dtype=float)
    if x.shape != (problem.n,):
        raise ConfigurationError(f"point has shape {x.shape}, expected ({problem.n},)")
    return x


def _finite(value, x, what):
    if not np.all(np.isfinite(value)):
        raise EvaluationError(f"non-finite {what}", x=np.array(x, copy=True))
    return value


def evaluate(problem: ObjectiveProblem, x, what: str = "f", counters: Optional[EvalCounters] = None):
    """Evaluate ``f``, the gradient, or both at ``x``.

    ``what`` is one of ``"f"``, ``"grad"`` or ``"both"``; ``"both"`` returns
    ``(f, g)``. Counters, when given, are bumped once per quantity computed.
    Non-finite output raises :class:`EvaluationError` carrying ``x``.
    """
    x = _check_point(problem, x)
    if what == "f":
        if counters is not None:
            counters.f_evals += 1
        with np.errstate(over="ignore", invalid="ignore"):  # reported below instead
            value = problem.fun(x)
        return float(_finite(value, x, "objective"))
    if what == "grad":
        if counters is not None:
            counters.g_evals += 1
        with np.errstate(over="ignore", invalid="ignore"):
            value = problem.grad(x)
        return _finite(value, x, "gradient")
    if what == "both":
        return evaluate(problem, x, "f", counters), evaluate(problem, x, "grad", counters)
    raise ConfigurationError(f"unknown evaluation request {what!r}")


def hessian_vec(problem: ObjectiveProblem, x, v, counters: Optional[EvalCounters] = None, inner: bool = False):
    """Return ``H(x) v``. ``inner=True`` also counts it as a Krylov matvec."""
    x = _check_point(problem, x)
    if counters is not None:
        counters.hvp_evals += 1
        if inner:
            counters.inner_matvecs += 1
    with np.errstate(over="ignore", invalid="ignore"):
        value = problem.hessvec(x, np.asarray(v, dtype=float))
    return _finite(value, x, "Hessian-vector product")


class Oracle:
    """Counting view of a problem for a single run."""

    def __init__(self, problem: ObjectiveProblem, counters: Optional[EvalCounters] = None):
        self.problem = problem
        self.counters = counters if counters is not None else EvalCounters()

    def f(self, x):
        return evaluate(self.problem, x, "f", self.counters)

    def grad(self, x):
        return evaluate(self.problem, x, "grad", self.counters)

    def hvp(self, x, v, inner=False):
        return hessian_vec(self.problem, x, v, self.counters, inner=inner)

    def inner_operator(self, x):
        """Hessian at ``x`` as a callable whose products count as inner matvecs."""
        return lambda v: self.hvp(x, v, inner=True)

    def dense_hessian(self, x):
        self.counters.hvp_evals += self.problem.n
        return _finite(self.problem.dense_hessian(x), x, "Hessian")


# --------------------------------------------------------------------------
# families


def _saddle2d(n, seed):
    if n != 2:
        raise ConfigurationError("saddle2d is two-dimensional")
    scale = np.array([1.0, -1.0])

    def f(x):
        return x[0] ** 2 - x[1] ** 2

    def g(x):
        return 2.0 * scale * x

    def hv(x, v):
        return 2.0 * scale * v

    return dict(x0=np.array([1.0, 1.0]), fun=f, grad=g, hessvec=hv, f_low=None)


def _need_multiple(name, n, m):
    if n < m or n % m:
        raise ConfigurationError(f"{name} needs n to be a positive multiple of {m}, got {n}")


def _need_at_least(name, n, m):
    if n < m:
        raise ConfigurationError(f"{name} needs n >= {m}, got {n}")


def _rosenbrock(n, seed):
    _need_multiple("rosenbrock", n, 2)

    def f(x):
        a, b = x[0::2], x[1::2]
        return float(np.sum(100.0 * (b - a * a) ** 2 + (1.0 - a) ** 2))

    def g(x):
        a, b = x[0::2], x[1::2]
        t = b - a * a
        out = np.empty_like(x)
        out[0::2] = -400.0 * a * t - 2.0 * (1.0 - a)
        out[1::2] = 200.0 * t
        return out

    def hv(x, v):
        a, b = x[0::2], x[1::2]
        va, vb = v[0::2], v[1::2]
        out = np.empty_like(x)
        out[0::2] = (1200.0 * a * a - 400.0 * b + 2.0) * va - 400.0 * a * vb
        out[1::2] = -400.0 * a * va + 200.0 * vb
        return out

    x0 = np.tile([-1.2, 1.0], n // 2)
    return dict(x0=x0, fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _genrose(n, seed):
    _need_at_least("genrose", n, 2)

    def f(x):
        u, w = x[:-1], x[1:]
        return float(np.sum(100.0 * (w - u * u) ** 2 + (1.0 - u) ** 2))

    def g(x):
        u, w = x[:-1], x[1:]
        t = w - u * u
        out = np.zeros_like(x)
        out[:-1] += -400.0 * u * t - 2.0 * (1.0 - u)
        out[1:] += 200.0 * t
        return out

    def hv(x, v):
        u, w = x[:-1], x[1:]
        vu, vw = v[:-1], v[1:]
        out = np.zeros_like(x)
        out[:-1] += (1200.0 * u * u - 400.0 * w + 2.0) * vu - 400.0 * u * vw
        out[1:] += -400.0 * u * vu + 200.0 * vw
        return out

    x0 = np.arange(1, n + 1) / (n + 1.0)
    return dict(x0=x0, fun=f, grad=g, hessvec=hv, f_low=0.0)


def _powell(n, seed):
    _need_multiple("powell", n, 4)

    def parts(x):
        x1, x2, x3, x4 = x[0::4], x[1::4], x[2::4], x[3::4]
        return x1 + 10.0 * x2, x3 - x4, x2 - 2.0 * x3, x1 - x4

    def f(x):
        a, b, c, d = parts(x)
        return float(np.sum(a * a + 5.0 * b * b + c**4 + 10.0 * d**4))

    def g(x):
        a, b, c, d = parts(x)
        out = np.empty_like(x)
        out[0::4] = 2.0 * a + 40.0 * d**3
        out[1::4] = 20.0 * a + 4.0 * c**3
        out[2::4] = 10.0 * b - 8.0 * c**3
        out[3::4] = -10.0 * b - 40.0 * d**3
        return out

    def hv(x, v):
        a, b, c, d = parts(x)
        va, vb, vc, vd = parts(v)
        out = np.empty_like(x)
        out[0::4] = 2.0 * va + 120.0 * d * d * vd
        out[1::4] = 20.0 * va + 12.0 * c * c * vc
        out[2::4] = 10.0 * vb - 24.0 * c * c * vc
        out[3::4] = -10.0 * vb - 120.0 * d * d * vd
        return out

    x0 = np.tile([3.0, -1.0, 0.0, 1.0], n // 4)
    return dict(x0=x0, fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _tridiag(n, seed):
    _need_at_least("tridiag", n, 2)
    w = np.arange(2, n + 1, dtype=float)

    def f(x):
        t = 2.0 * x[1:] - x[:-1]
        return float((x[0] - 1.0) ** 2 + np.sum(w * t * t))

    def g(x):
        t = 2.0 * x[1:] - x[:-1]
        out = np.zeros_like(x)
        out[0] += 2.0 * (x[0] - 1.0)
        out[1:] += 4.0 * w * t
        out[:-1] -= 2.0 * w * t
        return out

    def hv(x, v):
        vt = 2.0 * v[1:] - v[:-1]
        out = np.zeros_like(v)
        out[0] += 2.0 * v[0]
        out[1:] += 4.0 * w * vt
        out[:-1] -= 2.0 * w * vt
        return out

    return dict(x0=np.ones(n), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _quad_spd(n, seed):
    _need_at_least("quad_spd", n, 1)
    rng = np.random.default_rng(0 if seed is None else seed)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    eig = np.logspace(0.0, 2.0, n)
    A = (Q * eig) @ Q.T
    A = 0.5 * (A + A.T)
    b = rng.standard_normal(n)
    f_star = float(-0.5 * b @ np.linalg.solve(A, b))

    def f(x):
        return float(0.5 * x @ (A @ x) - b @ x)

    def g(x):
        return A @ x - b

    def hv(x, v):
        return A @ v

    return dict(x0=np.zeros(n), fun=f, grad=g, hessvec=hv, f_low=f_star, f_star=f_star)


def _trig(n, seed):
    _need_at_least("trig", n, 1)
    idx = np.arange(1, n + 1, dtype=float)

    def residual(x):
        c, s = np.cos(x), np.sin(x)
        return n - c.sum() + idx * (1.0 - c) - s, c, s

    def f(x):
        r, _, _ = residual(x)
        return float(r @ r)

    def g(x):
        r, c, s = residual(x)
        d = idx * s - c
        return 2.0 * (s * r.sum() + d * r)

    def hv(x, v):
        r, c, s = residual(x)
        d = idx * s - c
        Jv = (s @ v) + d * v
        JtJv = s * Jv.sum() + d * Jv
        curv = r.sum() * c * v + r * (idx * c + s) * v
        return 2.0 * (JtJv + curv)

    return dict(x0=np.full(n, 1.0 / n), fun=f, grad=g, hessvec=hv, f_low=0.0)


def _arwhead(n, seed):
    _need_at_least("arwhead", n, 2)

    def f(x):
        u, z = x[:-1], x[-1]
        q = u * u + z * z
        return float(np.sum(-4.0 * u + 3.0 + q * q))

    def g(x):
        u, z = x[:-1], x[-1]
        q = u * u + z * z
        out = np.empty_like(x)
        out[:-1] = -4.0 + 4.0 * q * u
        out[-1] = np.sum(4.0 * q * z)
        return out

    def hv(x, v):
        u, z = x[:-1], x[-1]
        vu, vz = v[:-1], v[-1]
        q = u * u + z * z
        out = np.empty_like(x)
        out[:-1] = (4.0 * q + 8.0 * u * u) * vu + 8.0 * u * z * vz
        out[-1] = np.sum(8.0 * u * z * vu) + np.sum(4.0 * q + 8.0 * z * z) * vz
        return out

    return dict(x0=np.ones(n), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _engval1(n, seed):
    _need_at_least("engval1", n, 2)

    def f(x):
        u, w = x[:-1], x[1:]
        q = u * u + w * w
        return float(np.sum(q * q - 4.0 * u + 3.0))

    def g(x):
        u, w = x[:-1], x[1:]
        q = u * u + w * w
        out = np.zeros_like(x)
        out[:-1] += 4.0 * q * u - 4.0
        out[1:] += 4.0 * q * w
        return out

    def hv(x, v):
        u, w = x[:-1], x[1:]
        vu, vw = v[:-1], v[1:]
        q = u * u + w * w
        out = np.zeros_like(x)
        out[:-1] += (4.0 * q + 8.0 * u * u) * vu + 8.0 * u * w * vw
        out[1:] += 8.0 * u * w * vu + (4.0 * q + 8.0 * w * w) * vw
        return out

    return dict(x0=np.full(n, 2.0), fun=f, grad=g, hessvec=hv, f_low=0.0)


def _broyden_tridiag(n, seed):
    _need_at_least("broyden_tridiag", n, 2)

    def residual(x):
        r = (3.0 - 2.0 * x) * x + 1.0
        r[1:] -= x[:-1]
        r[:-1] -= 2.0 * x[1:]
        return r

    def jac(x, v):
        out = (3.0 - 4.0 * x) * v
        out[1:] -= v[:-1]
        out[:-1] -= 2.0 * v[1:]
        return out

    def jac_t(x, u):
        out = (3.0 - 4.0 * x) * u
        out[:-1] -= u[1:]
        out[1:] -= 2.0 * u[:-1]
        return out

    def f(x):
        r = residual(x)
        return float(r @ r)

    def g(x):
        return 2.0 * jac_t(x, residual(x))

    def hv(x, v):
        return 2.0 * jac_t(x, jac(x, v)) - 8.0 * residual(x) * v

    return dict(x0=np.full(n, -1.0), fun=f, grad=g, hessvec=hv, f_low=0.0)


def _beale(n, seed):
    _need_multiple("beale", n, 2)
    consts = (1.5, 2.25, 2.625)

    def terms(x):
        a, b = x[0::2], x[1::2]
        out = []
        for k, c in enumerate(consts, start=1):
            t = c - a * (1.0 - b**k)
            da = -(1.0 - b**k)
            db = k * a * b ** (k - 1)
            dab = k * b ** (k - 1)
            dbb = k * (k - 1) * a * b ** (k - 2) if k > 1 else np.zeros_like(a)
            out.append((t, da, db, dab, dbb))
        return out

    def f(x):
        return float(sum(np.sum(t * t) for t, *_ in terms(x)))

    def g(x):
        out = np.zeros_like(x)
        for t, da, db, _, _ in terms(x):
            out[0::2] += 2.0 * t * da
            out[1::2] += 2.0 * t * db
        return out

    def hv(x, v):
        va, vb = v[0::2], v[1::2]
        out = np.zeros_like(x)
        for t, da, db, dab, dbb in terms(x):
            haa = 2.0 * da * da
            hab = 2.0 * (da * db + t * dab)
            hbb = 2.0 * (db * db + t * dbb)
            out[0::2] += haa * va + hab * vb
            out[1::2] += hab * va + hbb * vb
        return out

    return dict(x0=np.ones(n), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _dixon_price(n, seed):
    _need_at_least("dixon_price", n, 2)
    w = np.arange(2, n + 1, dtype=float)

    def f(x):
        t = 2.0 * x[1:] ** 2 - x[:-1]
        return float((x[0] - 1.0) ** 2 + np.sum(w * t * t))

    def g(x):
        t = 2.0 * x[1:] ** 2 - x[:-1]
        out = np.zeros_like(x)
        out[0] += 2.0 * (x[0] - 1.0)
        out[1:] += 8.0 * w * t * x[1:]
        out[:-1] -= 2.0 * w * t
        return out

    def hv(x, v):
        xj = x[1:]
        t = 2.0 * xj**2 - x[:-1]
        vt = 4.0 * xj * v[1:] - v[:-1]
        out = np.zeros_like(x)
        out[0] += 2.0 * v[0]
        out[1:] += 2.0 * w * (4.0 * xj * vt + 4.0 * t * v[1:])
        out[:-1] -= 2.0 * w * vt
        return out

    return dict(x0=np.ones(n), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _wood(n, seed):
    _need_multiple("wood", n, 4)

    def f(x):
        x1, x2, x3, x4 = x[0::4], x[1::4], x[2::4], x[3::4]
        val = (
            100.0 * (x2 - x1 * x1) ** 2
            + (1.0 - x1) ** 2
            + 90.0 * (x4 - x3 * x3) ** 2
            + (1.0 - x3) ** 2
            + 10.1 * ((x2 - 1.0) ** 2 + (x4 - 1.0) ** 2)
            + 19.8 * (x2 - 1.0) * (x4 - 1.0)
        )
        return float(np.sum(val))

    def g(x):
        x1, x2, x3, x4 = x[0::4], x[1::4], x[2::4], x[3::4]
        out = np.empty_like(x)
        out[0::4] = -400.0 * x1 * (x2 - x1 * x1) - 2.0 * (1.0 - x1)
        out[1::4] = 200.0 * (x2 - x1 * x1) + 20.2 * (x2 - 1.0) + 19.8 * (x4 - 1.0)
        out[2::4] = -360.0 * x3 * (x4 - x3 * x3) - 2.0 * (1.0 - x3)
        out[3::4] = 180.0 * (x4 - x3 * x3) + 20.2 * (x4 - 1.0) + 19.8 * (x2 - 1.0)
        return out

    def hv(x, v):
        x1, x2, x3, x4 = x[0::4], x[1::4], x[2::4], x[3::4]
        v1, v2, v3, v4 = v[0::4], v[1::4], v[2::4], v[3::4]
        out = np.empty_like(x)
        out[0::4] = (1200.0 * x1 * x1 - 400.0 * x2 + 2.0) * v1 - 400.0 * x1 * v2
        out[1::4] = -400.0 * x1 * v1 + 220.2 * v2 + 19.8 * v4
        out[2::4] = (1080.0 * x3 * x3 - 360.0 * x4 + 2.0) * v3 - 360.0 * x3 * v4
        out[3::4] = -360.0 * x3 * v3 + 200.2 * v4 + 19.8 * v2
        return out

    x0 = np.tile([-3.0, -1.0, -3.0, -1.0], n // 4)
    return dict(x0=x0, fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _dqdrtic(n, seed):
    _need_at_least("dqdrtic", n, 3)
    c = np.zeros(n)
    c[: n - 2] += 1.0
    c[1 : n - 1] += 100.0
    c[2:] += 100.0

    def f(x):
        return float(c @ (x * x))

    def g(x):
        return 2.0 * c * x

    def hv(x, v):
        return 2.0 * c * v

    return dict(x0=np.full(n, 3.0), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _liarwhd(n, seed):
    _need_at_least("liarwhd", n, 2)

    def f(x):
        t = x * x - x[0]
        return float(np.sum(4.0 * t * t + (x - 1.0) ** 2))

    def g(x):
        t = x * x - x[0]
        out = 16.0 * t * x + 2.0 * (x - 1.0)
        out[0] -= 8.0 * t.sum()
        return out

    def hv(x, v):
        t = x * x - x[0]
        vt = 2.0 * x * v - v[0]
        out = 8.0 * (2.0 * x * vt + 2.0 * t * v) + 2.0 * v
        out[0] -= 8.0 * vt.sum()
        return out

    return dict(x0=np.full(n, 4.0), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _quartc(n, seed):
    _need_at_least("quartc", n, 1)
    target = np.arange(1, n + 1, dtype=float)

    def f(x):
        return float(np.sum((x - target) ** 4))

    def g(x):
        return 4.0 * (x - target) ** 3

    def hv(x, v):
        return 12.0 * (x - target) ** 2 * v

    return dict(x0=np.full(n, 2.0), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _edensch(n, seed):
    _need_at_least("edensch", n, 2)

    def f(x):
        u, w = x[:-1], x[1:]
        p = w * (u - 2.0)
        return float(16.0 + np.sum((u - 2.0) ** 4 + p * p + (w + 1.0) ** 2))

    def g(x):
        u, w = x[:-1], x[1:]
        p = w * (u - 2.0)
        out = np.zeros_like(x)
        out[:-1] += 4.0 * (u - 2.0) ** 3 + 2.0 * p * w
        out[1:] += 2.0 * p * (u - 2.0) + 2.0 * (w + 1.0)
        return out

    def hv(x, v):
        u, w = x[:-1], x[1:]
        vu, vw = v[:-1], v[1:]
        p = w * (u - 2.0)
        huu = 12.0 * (u - 2.0) ** 2 + 2.0 * w * w
        huw = 2.0 * w * (u - 2.0) + 2.0 * p
        hww = 2.0 * (u - 2.0) ** 2 + 2.0
        out = np.zeros_like(x)
        out[:-1] += huu * vu + huw * vw
        out[1:] += huw * vu + hww * vw
        return out

    return dict(x0=np.zeros(n), fun=f, grad=g, hessvec=hv, f_low=16.0)


def _cosine(n, seed):
    _need_at_least("cosine", n, 2)

    def f(x):
        return float(np.sum(np.cos(x[:-1] ** 2 - 0.5 * x[1:])))

    def g(x):
        u = x[:-1]
        s = np.sin(u * u - 0.5 * x[1:])
        out = np.zeros_like(x)
        out[:-1] -= 2.0 * u * s
        out[1:] += 0.5 * s
        return out

    def hv(x, v):
        u = x[:-1]
        t = u * u - 0.5 * x[1:]
        c, s = np.cos(t), np.sin(t)
        vt = 2.0 * u * v[:-1] - 0.5 * v[1:]
        out = np.zeros_like(x)
        out[:-1] += -c * 2.0 * u * vt - 2.0 * s * v[:-1]
        out[1:] += 0.5 * c * vt
        return out

    return dict(x0=np.ones(n), fun=f, grad=g, hessvec=hv, f_low=-(n - 1.0))


def _fletchcr(n, seed):
    _need_at_least("fletchcr", n, 2)

    def f(x):
        u, w = x[:-1], x[1:]
        t = w - u + 1.0 - u * u
        return float(100.0 * np.sum(t * t))

    def g(x):
        u, w = x[:-1], x[1:]
        t = w - u + 1.0 - u * u
        out = np.zeros_like(x)
        out[:-1] += 200.0 * t * (-1.0 - 2.0 * u)
        out[1:] += 200.0 * t
        return out

    def hv(x, v):
        u, w = x[:-1], x[1:]
        t = w - u + 1.0 - u * u
        vt = (-1.0 - 2.0 * u) * v[:-1] + v[1:]
        out = np.zeros_like(x)
        out[:-1] += 200.0 * ((-1.0 - 2.0 * u) * vt - 2.0 * t * v[:-1])
        out[1:] += 200.0 * vt
        return out

    return dict(x0=np.zeros(n), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _himmelblau(n, seed):
    _need_multiple("himmelblau", n, 2)

    def f(x):
        a, b = x[0::2], x[1::2]
        return float(np.sum((a * a + b - 11.0) ** 2 + (a + b * b - 7.0) ** 2))

    def g(x):
        a, b = x[0::2], x[1::2]
        t1, t2 = a * a + b - 11.0, a + b * b - 7.0
        out = np.empty_like(x)
        out[0::2] = 4.0 * a * t1 + 2.0 * t2
        out[1::2] = 2.0 * t1 + 4.0 * b * t2
        return out

    def hv(x, v):
        a, b = x[0::2], x[1::2]
        va, vb = v[0::2], v[1::2]
        hab = 4.0 * (a + b)
        out = np.empty_like(x)
        out[0::2] = (12.0 * a * a + 4.0 * b - 42.0) * va + hab * vb
        out[1::2] = hab * va + (4.0 * a + 12.0 * b * b - 26.0) * vb
        return out

    return dict(x0=np.ones(n), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


def _nondia(n, seed):
    _need_at_least("nondia", n, 2)

    def f(x):
        t = x[0] - x[:-1] ** 2
        return float((x[0] - 1.0) ** 2 + 100.0 * np.sum(t * t))

    def g(x):
        u = x[:-1]
        t = x[0] - u * u
        out = np.zeros_like(x)
        out[:-1] += -400.0 * t * u
        out[0] += 2.0 * (x[0] - 1.0) + 200.0 * t.sum()
        return out

    def hv(x, v):
        u = x[:-1]
        t = x[0] - u * u
        vt = v[0] - 2.0 * u * v[:-1]
        out = np.zeros_like(x)
        out[:-1] += 200.0 * (-2.0 * u * vt - 2.0 * t * v[:-1])
        out[0] += 2.0 * v[0] + 200.0 * vt.sum()
        return out

    return dict(x0=np.full(n, -1.0), fun=f, grad=g, hessvec=hv, f_low=0.0, f_star=0.0)


REGISTRY = {
    "saddle2d": _saddle2d,
    "rosenbrock": _rosenbrock,
    "genrose": _genrose,
    "powell": _powell,
    "tridiag": _tridiag,
    "quad_spd": _quad_spd,
    "trig": _trig,
    "arwhead": _arwhead,
    "engval1": _engval1,
    "broyden_tridiag": _broyden_tridiag,
    "beale": _beale,
    "dixon_price": _dixon_price,
    "wood": _wood,
    "dqdrtic": _dqdrtic,
    "liarwhd": _liarwhd,
    "quartc": _quartc,
    "edensch": _edensch,
    "cosine": _cosine,
    "fletchcr": _fletchcr,
    "himmelblau": _himmelblau,
    "nondia": _nondia,
}

# Bounded-below families used for the desk-scale benchmark matrix.
BENCHMARK_FAMILIES = tuple(name for name in REGISTRY if name != "saddle2d")


def make_problem(name: str, n: int, seed: Optional[int] = None) -> ObjectiveProblem:
    """Build a registered problem of dimension ``n``.

    ``seed`` only affects seeded families (``quad_spd``); it is folded into
    the problem name so runs on different instances stay distinguishable.
    """
    try:
        builder = REGISTRY[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown problem {name!r}; known: {', '.join(sorted(REGISTRY))}"
        ) from None
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ConfigurationError(f"dimension must be a positive integer, got {n!r}")
    parts = builder(int(n), seed)
    label = name if seed is None or name != "quad_spd" else f"{name}#{seed}"
    x0 = np.asarray(parts.pop("x0"), dtype=float)
    x0.setflags(write=False)
    return ObjectiveProblem(name=label, n=int(n), x0=x0, **parts)


def parse_problem_list(text: str) -> list[tuple[str, int, Optional[int]]]:
    """Parse ``name:n[:seed],name:n,...`` into ``(name, n, seed)`` triples."""
    out = []
    for item in filter(None, (p.strip() for p in text.split(","))):
        fields = item.split(":")
        if len(fields) not in (2, 3):
            raise ConfigurationError(f"bad problem spec {item!r}; expected name:n[:seed]")
        name = fields[0]
        try:
            n = int(fields[1])
            seed = int(fields[2]) if len(fields) == 3 else None
        except ValueError:
            raise ConfigurationError(f"bad problem spec {item!r}") from None
        if name not in REGISTRY:
            raise ConfigurationError(f"unknown problem {name!r}")
        out.append((name, n, seed))
    if not out:
        raise ConfigurationError("empty problem list")
    return out


def benchmark_suite(n: int = 100) -> list[tuple[str, int, Optional[int]]]:
    """Desk-scale suite: every bounded-below family at dimension ``n``."""
    return [(name, n, 7 if name == "quad_spd" else None) for name in BENCHMARK_FAMILIES]
