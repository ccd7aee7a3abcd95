"""Benchmark the compiled descent kernel against the numpy fallback.

Runs identical seeded descents through both implementations and reports
per-restart wall time plus the speedup.  Values must agree to 1e-9 or the
run aborts: a fast kernel that lands in a different basin is a bug, not a
win.

Usage: python benchmarks/bench_descent.py [--restarts 24]
"""

import argparse
import time

import numpy as np

from nonclass import _descent_py
from nonclass.core import random_density, random_haar_unitary
from nonclass.kernels import _c_writable, _compiled, interaction_kernel
from nonclass.measure import roots_of_unity
from nonclass.optim import ACCEPT_TOL, F_FLOOR, SHRINK, STEP0, STEP_FLOOR

DEFAULTS = dict(
    step0=STEP0, shrink=SHRINK, step_floor=STEP_FLOOR, max_sweeps=2000, accept_tol=ACCEPT_TOL, f_floor=F_FLOOR
)


def run_python(c_kernel, purity, starts, lam):
    values = []
    t0 = time.perf_counter()
    for v0 in starts:
        f, _, _ = _descent_py.ru_descent(c_kernel, purity, v0, lam, **DEFAULTS)
        values.append(f)
    return time.perf_counter() - t0, values


def run_cython(c_kernel, purity, starts, lam):
    values = []
    t0 = time.perf_counter()
    for v0 in starts:
        f, _, _ = _compiled.ru_descent(
            _c_writable(c_kernel),
            float(purity),
            _c_writable(v0),
            _c_writable(lam),
            DEFAULTS["step0"],
            DEFAULTS["shrink"],
            DEFAULTS["step_floor"],
            DEFAULTS["max_sweeps"],
            DEFAULTS["accept_tol"],
            DEFAULTS["f_floor"],
        )
        values.append(f)
    return time.perf_counter() - t0, values


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--restarts", type=int, default=24)
    args = parser.parse_args()

    if _compiled is None:
        raise SystemExit("compiled extension not built; nothing to compare")

    print(f"{'M':>3} {'N':>3} {'restarts':>9} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for m, n in [(2, 2), (2, 8), (3, 3), (4, 4), (5, 5), (6, 6)]:
        rho = random_density(m, n, m * n, seed=m * 100 + n)
        c_kernel = interaction_kernel(rho.matrix, m, n)
        purity = rho.purity()
        lam = roots_of_unity(m)
        starts = [random_haar_unitary(m, seed=1000 + k).matrix for k in range(args.restarts)]

        t_py, vals_py = run_python(c_kernel, purity, starts, lam)
        t_cy, vals_cy = run_cython(c_kernel, purity, starts, lam)
        mismatch = max(abs(a - b) for a, b in zip(vals_py, vals_cy))
        if mismatch > 1e-9:
            raise SystemExit(f"backend disagreement at M={m}: {mismatch:.3e}")
        per_py = 1000.0 * t_py / args.restarts
        per_cy = 1000.0 * t_cy / args.restarts
        print(f"{m:>3} {n:>3} {args.restarts:>9} {per_py:>10.2f} {per_cy:>10.2f} {t_py / t_cy:>8.1f}x")


if __name__ == "__main__":
    main()
