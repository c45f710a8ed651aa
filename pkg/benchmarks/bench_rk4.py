#!/usr/bin/env python3
"""Benchmark the RK4 propagation kernels: numba against pure numpy.

Builds the master-equation generator of a representative strong-coupling
blockade configuration and times both backends over identical fixed-step
integrations, reporting throughput, speedup, and the worst entrywise
difference between the two result vectors.

Usage: python benchmarks/bench_rk4.py [--steps N] [--repeat R] [--mech-cutoff N]
"""

import argparse
import time

import numpy as np

from phonoblock import kernels
from phonoblock.model import MqParams, build_h_mq, collapse_ops, two_mode_space
from phonoblock.solver import build_liouvillian, steady_state, vec


def _time(fn, repeat):
    best = np.inf
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=50_000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--mech-cutoff", type=int, default=8)
    args = parser.parse_args()

    params = MqParams(delta=10.0, j=10.0, eps=0.01)
    space = two_mode_space(args.mech_cutoff)
    liou = build_liouvillian(build_h_mq(params, space), collapse_ops(params, space))
    matrix = liou.matrix
    y0 = vec(steady_state(liou).mat)
    row_sum = float(abs(matrix).sum(axis=1).max())
    h = 0.01 / row_sum

    print(f"generator: {matrix.shape[0]} x {matrix.shape[1]}, nnz {matrix.nnz}")
    print(f"step {h:.3e}, {args.steps} steps per run, best of {args.repeat}")

    t_numpy, out_numpy = _time(
        lambda: kernels.rk4_propagate_numpy(matrix, y0, h, args.steps), args.repeat
    )
    print(f"numpy : {t_numpy:8.3f} s  ({args.steps / t_numpy:,.0f} steps/s)")

    if kernels._HAVE_NUMBA:
        kernels.rk4_propagate_numba(matrix, y0, h, 10)  # compile outside timing
        t_numba, out_numba = _time(
            lambda: kernels.rk4_propagate_numba(matrix, y0, h, args.steps), args.repeat
        )
        print(f"numba : {t_numba:8.3f} s  ({args.steps / t_numba:,.0f} steps/s)")
        print(f"speedup: x{t_numpy / t_numba:.2f}")
        print(f"max |numba - numpy|: {np.max(np.abs(out_numba - out_numpy)):.3e}")
    else:
        print("numba : not importable, skipped")


if __name__ == "__main__":
    main()
