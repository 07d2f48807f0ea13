"""Compiled versus numpy advection kernels.

    python benchmarks/bench_advect.py [--n 512] [--repeat 20] [--full]

Times one advection step of an n x n grid for each backend, scheme and axis,
and with ``--full`` the whole fig2 run at 512 x 512.
"""

import argparse
import timeit

import numpy as np

from eitswap.numeric import SolverSpec, kernels, run_scenario
from eitswap.scenario import fig2_scenario


def bench_step(n: int, repeat: int):
    rng = np.random.default_rng(0)
    u = rng.standard_normal((n, n))
    inflow = np.zeros(n)
    rows = []
    for backend in kernels.available_backends():
        for scheme, name in ((0, "upwind"), (1, "lax-wendroff")):
            for axis in (1, 0):
                t = min(timeit.repeat(
                    lambda: kernels.advect(u, 0.7, scheme, axis, inflow, backend=backend),
                    number=1, repeat=repeat))
                rows.append((backend, name, "x" if axis == 1 else "y", t))
    return rows


def bench_full():
    out = []
    for backend in kernels.available_backends():
        series = run_scenario(fig2_scenario(), SolverSpec(backend=backend))
        out.append((backend, series.steps, series.wall_time))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--full", action="store_true")
    args = ap.parse_args()

    rows = bench_step(args.n, args.repeat)
    print(f"one step, {args.n} x {args.n} (best of {args.repeat})")
    print(f"{'backend':<8} {'scheme':<13} {'axis':<4} {'ms':>8}")
    base = {(s, a): t for b, s, a, t in rows if b == "python"}
    for backend, scheme, axis, t in rows:
        speedup = base[(scheme, axis)] / t
        print(f"{backend:<8} {scheme:<13} {axis:<4} {1e3 * t:8.3f}  x{speedup:.1f}")
    if args.full:
        print("\nfig2 run, 512 x 512, Lax-Wendroff")
        for backend, steps, wall in bench_full():
            print(f"{backend:<8} {steps} steps {wall:7.2f} s")


if __name__ == "__main__":
    main()
