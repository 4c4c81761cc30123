"""Compare the compiled and NumPy MINRES kernels.

Runs both kernels on the same systems (a cheap tridiagonal operator, where
recurrence overhead dominates, and a dense matrix, where the matvec does)
and reports median wall time per solve, the speedup, and the relative
residual each kernel reaches (unconverged runs differ in roundoff only).

    python3 benchmarks/bench_minres.py [--sizes 100,1000,10000] [--repeat 7]
"""
import argparse
import statistics
import time

import numpy as np

from lsarc.krylov import _minres_ext, solve_symmetric


def tridiag_operator(n, rng):
    d = rng.uniform(-1.0, 3.0, n)
    e = rng.uniform(-0.5, 0.5, n - 1)

    def hvp(v):
        out = d * v
        out[:-1] += e * v[1:]
        out[1:] += e * v[:-1]
        return out

    return hvp


def dense_operator(n, rng):
    A = rng.standard_normal((n, n)) / np.sqrt(n)
    B = 0.5 * (A + A.T)
    return lambda v: B @ v


def time_solve(hvp, g, backend, repeat, max_inner):
    times = []
    rep = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        rep = solve_symmetric(hvp, g, rtol=1e-10, max_inner=max_inner, backend=backend)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), rep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="100,1000,10000")
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--max-inner", type=int, default=200)
    args = ap.parse_args()
    if _minres_ext is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")

    rng = np.random.default_rng(0)
    print(f"{'operator':<9s} {'n':>6s} {'iters':>6s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s} {'res py':>8s} {'res cy':>8s}")
    for n in (int(s) for s in args.sizes.split(",")):
        for label, make in (("tridiag", tridiag_operator), ("dense", dense_operator)):
            if label == "dense" and n > 2000:
                continue
            hvp = make(n, rng)
            g = rng.standard_normal(n)
            t_py, r_py = time_solve(hvp, g, "python", args.repeat, args.max_inner)
            t_cy, r_cy = time_solve(hvp, g, "cython", args.repeat, args.max_inner)
            gn = float(np.linalg.norm(g))
            print(
                f"{label:<9s} {n:>6d} {r_cy.iterations:>6d} {t_py * 1e3:>10.3f} "
                f"{t_cy * 1e3:>10.3f} {t_py / t_cy:>8.2f} "
                f"{r_py.residual_norm / gn:>8.1e} {r_cy.residual_norm / gn:>8.1e}"
            )


if __name__ == "__main__":
    main()
