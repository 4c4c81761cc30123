"""Small builders shared by the solver tests."""
import numpy as np

from lsarc import SolverConfig
from lsarc.driver import RunState
from lsarc.problems import ObjectiveProblem, Oracle


def quadratic(B, c, x0, name="quad"):
    B = np.asarray(B, dtype=float)
    c = np.asarray(c, dtype=float)
    return ObjectiveProblem(
        name=name,
        n=B.shape[0],
        x0=np.asarray(x0, dtype=float),
        fun=lambda x: float(0.5 * x @ B @ x + c @ x),
        grad=lambda x: B @ x + c,
        hessvec=lambda x, v: B @ v,
    )


def state_at(problem, x, control, **cfg):
    config = SolverConfig(**cfg)
    oracle = Oracle(problem)
    x = np.asarray(x, dtype=float)
    return RunState(problem, config, oracle, x, oracle.f(x), oracle.grad(x), control)
