#!/usr/bin/env python3
"""Timing comparison between the compiled kernels and the numpy fallback.

Runs the hot special-function paths on log-spaced grids through the
public dispatch layer (so validation overhead is included, same as in
production), then a small end-to-end terminal-sampling run per backend.

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --size 200000 --repeats 9
"""

import argparse
import time

import numpy as np

from gigsim import _purekern, gig, kernels

try:
    from gigsim import _fastkern
except ImportError:
    _fastkern = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(size, rng):
    z = np.logspace(-3.0, 3.0, size)
    x = np.logspace(-4.0, 2.0, size)
    p = rng.uniform(1e-6, 1.0 - 1e-6, size)
    return [
        ("bessel_jy  nu=0.30", lambda: kernels.bessel_jy(0.30, z)),
        ("hankel_sq  nu=1.20", lambda: kernels.hankel_sq(1.20, z)),
        ("gammainc_p a=0.30", lambda: kernels.gammainc_p(0.30, x)),
        ("gammainc_q a=0.50", lambda: kernels.gammainc_q(0.50, x)),
        ("upper_gamma_scaled", lambda: kernels.upper_gamma_scaled(0.50, x)),
        ("inv_gammainc_p    ", lambda: kernels.inv_gammainc_p(0.30, p)),
    ]


def end_to_end():
    params = gig.GigParams(-0.3, 0.5, 2.0)
    gig.sample_gig_terminal(params, 150, budget=1000, seed=1)


def run(impl, size, repeats):
    old = kernels._impl
    kernels._impl = impl
    try:
        rng = np.random.default_rng(0)
        rows = [(label, best_of(fn, repeats)) for label, fn in kernel_cases(size, rng)]
        rows.append(("terminal sampling ", best_of(end_to_end, max(1, repeats // 3))))
        return rows
    finally:
        kernels._impl = old


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=100_000, help="grid length per call")
    ap.add_argument("--repeats", type=int, default=5, help="timing repeats, best kept")
    args = ap.parse_args()

    pure = run(_purekern, args.size, args.repeats)
    if _fastkern is None:
        print("compiled extension not built; pure backend only\n")
        for label, t in pure:
            print(f"{label:22s} {t * 1e3:9.2f} ms")
        return
    fast = run(_fastkern, args.size, args.repeats)

    print(f"grid size {args.size}, best of {args.repeats}\n")
    print(f"{'case':22s} {'pure':>10s} {'compiled':>10s} {'speedup':>9s}")
    for (label, tp), (_, tf) in zip(pure, fast):
        print(f"{label:22s} {tp * 1e3:8.2f}ms {tf * 1e3:8.2f}ms {tp / tf:8.1f}x")


if __name__ == "__main__":
    main()
