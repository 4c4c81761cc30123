"""Shared value types: solver configuration, evaluation counters, run records."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Optional

STATUSES = ("converged", "iteration_limit", "diverged", "error")


class ConfigurationError(ValueError):
    """Invalid solver configuration, problem name or problem dimension."""


class EvaluationError(ArithmeticError):
    """An evaluator produced a non-finite value.

    The offending point is kept on ``x`` so the caller can report where the
    run blew up.
    """

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class BacktrackingStalled(RuntimeError):
    """The step-acceptance loop exceeded its backtrack budget."""


@dataclass
class EvalCounters:
    f_evals: int = 0
    g_evals: int = 0
    hvp_evals: int = 0
    inner_matvecs: int = 0

    def snapshot(self) -> "EvalCounters":
        return dataclasses.replace(self)


@dataclass
class SolverConfig:
    """Parameters shared by every solver in the package.

    Defaults follow the experimental protocol the methods were benchmarked
    with: ``eta=0.1``, ``nu1=0.5``, ``nu2=2``, ``sigma0=1``,
    ``sigma_min=1e-16`` for the cubic methods; ``tau1=0.5``, ``tau2=2``,
    ``delta0=1``, ``delta_max=1e16`` for the trust-region methods;
    contraction ``armijo_tau=0.5`` for Armijo; ``eps_d=1e-3``; inner
    relative tolerance ``1e-4``; at most 10000 iterations; stop once
    ``||g|| <= 1e-5``.
    """

    eta: float = 0.1
    nu1: float = 0.5
    nu2: float = 2.0
    sigma0: float = 1.0
    sigma_min: float = 1e-16
    tau1: float = 0.5
    tau2: float = 2.0
    delta0: float = 1.0
    delta_max: float = 1e16
    armijo_tau: float = 0.5
    eps_d: float = 1e-3
    zeta: float = 1.0
    inner_rtol: float = 1e-4
    max_inner: Optional[int] = None  # None -> 2n
    max_iter: int = 10000
    gtol: float = 1e-5
    beta_min: float = 1e-12
    beta_max: float = 1e12
    max_backtracks: int = 100
    subproblem_rtol: float = 1e-6
    arc_subproblem: str = "lanczos"
    tr_subproblem: str = "steihaug"
    trace: bool = False
    keep_vectors: bool = False
    backend: Optional[str] = None  # MINRES kernel; None -> krylov.BACKEND
    f_diverge: float = -1e30  # f at or below this counts as unbounded

    def validate(self) -> "SolverConfig":
        checks = [
            (0.0 < self.eta < 1.0, "eta must lie in (0, 1)"),
            (0.0 < self.nu1 <= 1.0, "nu1 must lie in (0, 1]"),
            (self.nu2 > 1.0, "nu2 must exceed 1"),
            (0.0 < self.sigma_min <= self.sigma0, "need 0 < sigma_min <= sigma0"),
            (0.0 <= self.tau1 < 1.0 <= self.tau2, "need 0 <= tau1 < 1 <= tau2"),
            (0.0 < self.delta0 < self.delta_max, "need 0 < delta0 < delta_max"),
            (0.0 < self.armijo_tau < 1.0, "armijo_tau must lie in (0, 1)"),
            (0.0 < self.eps_d < 1.0, "eps_d must lie in (0, 1)"),
            (self.zeta > 0.0, "zeta must be positive"),
            (0.0 < self.inner_rtol < 1.0, "inner_rtol must lie in (0, 1)"),
            (self.max_inner is None or self.max_inner >= 1, "max_inner must be >= 1"),
            (self.max_iter >= 0, "max_iter must be nonnegative"),
            (self.gtol > 0.0, "gtol must be positive"),
            (0.0 < self.beta_min < self.beta_max, "need 0 < beta_min < beta_max"),
            (self.max_backtracks >= 1, "max_backtracks must be >= 1"),
            (self.arc_subproblem in ("lanczos", "dense_exact"), "arc_subproblem must be lanczos or dense_exact"),
            (self.tr_subproblem in ("steihaug", "dense_exact"), "tr_subproblem must be steihaug or dense_exact"),
            (self.backend in (None, "cython", "python"), "backend must be cython or python"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigurationError(msg)
        return self

    def inner_limit(self, n: int) -> int:
        return self.max_inner if self.max_inner is not None else 2 * n


@dataclass
class IterationRecord:
    """One outer iteration of a solver.

    ``control`` is the regularization weight (cubic methods) or the radius
    (trust-region methods) in force when the iteration started;
    ``new_control`` is the value handed to the next iteration.

    ``mode`` is ``scaled``, ``fallback_l2``, ``l2``, ``armijo`` or
    ``armijo_gradient``; a run that stops on an exception ends with an
    ``aborted`` record carrying the inner matvecs of the interrupted
    iteration.
    """

    k: int
    mode: str
    f: float
    gnorm: float
    control: float
    new_control: float
    accepted: bool
    step_length: float = float("nan")
    step_norm: float = 0.0
    rho: float = float("nan")
    backtracks: int = 0
    inner_iters: int = 0
    inner_status: str = ""
    matvecs: int = 0
    matvecs_after_solve: int = 0
    matvecs_after_accept: int = 0
    f_evals: int = 0
    g_evals: int = 0
    slope: float = float("nan")
    cos_w: float = float("nan")
    beta: float = float("nan")
    cauchy_corrected: bool = False
    lagrange: float = float("nan")
    s_q: Optional[list] = None
    step: Optional[list] = None


@dataclass
class RunRecord:
    problem: str
    solver: str
    n: int
    status: str
    outer_iters: int
    f_evals: int
    g_evals: int
    hvp_evals: int
    inner_matvecs: int
    final_f: float
    final_gnorm: float
    wall_time_ms: float
    message: str = ""
    trace: Optional[list] = field(default=None, repr=False)

    def to_dict(self) -> dict[str, Any]:
        d = dataclasses.asdict(self)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "RunRecord":
        d = dict(d)
        trace = d.pop("trace", None)
        if trace is not None:
            trace = [IterationRecord(**t) for t in trace]
        return cls(trace=trace, **d)


CSV_COLUMNS = (
    "problem",
    "solver",
    "n",
    "status",
    "outer_iters",
    "f_evals",
    "g_evals",
    "hvp_evals",
    "inner_matvecs",
    "final_f",
    "final_gnorm",
    "wall_time_ms",
)
