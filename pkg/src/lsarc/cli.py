"""Command-line benchmark runner (``lsarc-bench`` or ``python3 -m lsarc``)."""
from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .harness import METRICS, SOLVERS, export, performance_profile, run_matrix
from .problems import benchmark_suite, parse_problem_list
from .records import ConfigurationError, SolverConfig

EPILOG = """\
defaults (reference protocol):
  ratio threshold eta = 0.1
  cubic methods: nu1 = 0.5, nu2 = 2, sigma0 = 1, sigma_min = 1e-16,
    beta = 1e-4 sigma^(-2/3) if g's_q < 0 else 2
  trust-region methods: tau1 = 0.5, tau2 = 2, Delta0 = 1, Delta_max = 1e16, beta = 1
  Armijo contraction 0.5
  descent gate eps_d = 1e-3, MINRES relative tolerance 1e-4 (at most 2n iterations)
  stop when ||g|| <= 1e-5 or after 10000 iterations

exit status: 0 if no run ended in status "error", 1 otherwise, 2 on usage errors.
"""


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lsarc-bench",
        description="Run LS-ARC, LS-ARC(s), LS-TR and the Euclidean baselines on test problems.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument(
        "--problems",
        help="comma list name:n[:seed]; default: every bounded family at n=--n",
    )
    p.add_argument("--n", type=int, default=100, help="dimension of the default suite (default 100)")
    p.add_argument(
        "--solvers", default=",".join(SOLVERS),
        help=f"comma list from {','.join(SOLVERS)} (default: all)",
    )
    p.add_argument("--gtol", type=float, default=1e-5, help="gradient-norm tolerance (default 1e-5)")
    p.add_argument("--max-iter", type=int, default=10000, help="outer iteration cap (default 10000)")
    p.add_argument("--eps-d", type=float, default=1e-3, help="descent gate eps_d (default 1e-3)")
    p.add_argument("--inner-rtol", type=float, default=1e-4, help="MINRES relative tolerance (default 1e-4)")
    p.add_argument("--seed", type=int, default=None, help="seed for seeded families given without one")
    p.add_argument("--trace", action="store_true", help="keep and print per-iteration traces")
    p.add_argument(
        "--metric", default=",".join(METRICS),
        help=f"profile metric(s), comma list from {','.join(METRICS)}",
    )
    p.add_argument("--out", metavar="DIR", help="write records.csv / records.json (and profiles) here")
    p.add_argument("--profile", action="store_true", help="emit one profile CSV per metric")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    return p


def _print_trace(rec, out) -> None:
    print(f"# {rec.problem} / {rec.solver}", file=out)
    for it in rec.trace or []:
        print(
            f"  k={it.k:<5d} mode={it.mode:<12s} f={it.f:<+.6e} |g|={it.gnorm:.3e} "
            f"ctrl={it.control:.3e} len={it.step_length:+.4e} rho={it.rho:.4f} "
            f"bt={it.backtracks} acc={int(it.accepted)}",
            file=out,
        )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    solvers = _csv_list(args.solvers)
    bad = [s for s in solvers if s not in SOLVERS]
    if not solvers or bad:
        parser.error(f"unknown solver(s): {', '.join(bad) or '(none given)'}")
    metrics = _csv_list(args.metric)
    if not metrics or any(m not in METRICS for m in metrics):
        parser.error(f"--metric must be a comma list from {', '.join(METRICS)}")
    try:
        if args.problems:
            specs = parse_problem_list(args.problems)
        else:
            specs = benchmark_suite(args.n)
        if args.seed is not None:
            specs = [(nm, n, args.seed if s is None else s) for nm, n, s in specs]
        config = SolverConfig(
            gtol=args.gtol, max_iter=args.max_iter, eps_d=args.eps_d,
            inner_rtol=args.inner_rtol, trace=args.trace,
        ).validate()
        # surface bad names/dimensions as usage errors before any run starts
        from .problems import make_problem

        for nm, n, s in specs:
            make_problem(nm, n, s)
    except ConfigurationError as exc:
        parser.error(str(exc))

    records = run_matrix(specs, solvers, config, jobs=max(1, args.jobs))

    out = sys.stdout
    print(f"{'problem':<20s} {'solver':<9s} {'status':<16s} {'iters':>6s} {'f_evals':>8s} {'|g|':>10s}", file=out)
    for r in records:
        print(
            f"{r.problem:<20s} {r.solver:<9s} {r.status:<16s} {r.outer_iters:>6d} "
            f"{r.f_evals:>8d} {r.final_gnorm:>10.3e}",
            file=out,
        )
        if args.trace:
            _print_trace(r, out)

    if args.out:
        os.makedirs(args.out, exist_ok=True)
        export(records, "csv", os.path.join(args.out, "records.csv"))
        export(records, "json", os.path.join(args.out, "records.json"))
        if args.profile:
            for m in metrics:
                export(performance_profile(records, m), "csv", os.path.join(args.out, f"profile_{m}.csv"))
    elif args.profile:
        for m in metrics:
            print(f"\n# profile {m}", file=out)
            for c in performance_profile(records, m):
                print(f"{c.solver}: " + " ".join(f"({t:.3g},{r:.3f})" for t, r in zip(c.taus, c.rho)), file=out)

    return 1 if any(r.status == "error" for r in records) else 0


if __name__ == "__main__":
    sys.exit(main())
