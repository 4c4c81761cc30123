"""Line-search forms of cubic regularization and trust-region methods.

The scaled-norm solvers (:func:`lsarc_solve`, :func:`lstr_solve`) take
steps along an approximate Newton direction; Euclidean ARC, TR and an
Armijo line search serve as baselines. :mod:`lsarc.harness` runs solver x
problem matrices and builds performance profiles.
"""
from .baselines import arc_l2_solve, armijo_solve, tr_l2_solve
from .harness import ProfileCurve, export, load_records, performance_profile, run_matrix
from .krylov import BACKEND, InnerSolveReport, solve_dense, solve_symmetric
from .ls_arc import StepOutcome, arc_accept_loop, arc_step_lengths, lsarc_solve, second_order_gate
from .ls_tr import lstr_solve, tr_accept_loop, tr_step_lengths
from .problems import ObjectiveProblem, evaluate, hessian_vec, make_problem
from .records import (
    BacktrackingStalled,
    ConfigurationError,
    EvalCounters,
    EvaluationError,
    IterationRecord,
    RunRecord,
    SolverConfig,
)
from .scalednorm import (
    AssumptionViolated,
    DirectionInfo,
    ExplicitScaledNorm,
    beta_policy,
    build_explicit_M,
    cubic_model_value,
    direction_analysis,
)
from .subproblems import SubproblemResult, cubic_subproblem_l2, tr_subproblem_l2

__version__ = "0.1.0"

__all__ = [
    "AssumptionViolated", "BACKEND", "BacktrackingStalled", "ConfigurationError",
    "DirectionInfo", "EvalCounters", "EvaluationError", "ExplicitScaledNorm",
    "InnerSolveReport", "IterationRecord", "ObjectiveProblem", "ProfileCurve",
    "RunRecord", "SolverConfig", "StepOutcome", "SubproblemResult",
    "arc_accept_loop", "arc_l2_solve", "arc_step_lengths", "armijo_solve",
    "beta_policy", "build_explicit_M", "cubic_model_value", "cubic_subproblem_l2",
    "direction_analysis", "evaluate", "export", "hessian_vec", "load_records",
    "lsarc_solve", "lstr_solve", "make_problem", "performance_profile",
    "run_matrix", "second_order_gate", "solve_dense", "solve_symmetric",
    "tr_accept_loop", "tr_l2_solve", "tr_step_lengths", "tr_subproblem_l2",
]
