#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs the two hot loops (PID sequence stepping and plant substep
integration) on both backends with identical inputs, checks they agree,
and prints throughput plus speedup.

    python3 benchmarks/bench_kernels.py [--pid-steps N] [--plant-substeps N]
"""

import argparse
import random
import time

import numpy as np

from greenloop import _kernels_py


def _load_compiled():
    try:
        from greenloop import _kernels

        return _kernels
    except ImportError:
        return None


def bench_pid(kernel, errors, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = kernel.pid_run_sequence(2500, 10, 500, errors)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_plant(kernel, substeps, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = kernel.plant_run_substeps(
            30_000, 25_000, 40_000, 20_000_000, 200_000_000, 500_000_000,
            31_337, True, 10, substeps,
        )
        best = min(best, time.perf_counter() - start)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pid-steps", type=int, default=1_000_000)
    parser.add_argument("--plant-substeps", type=int, default=1_000_000)
    args = parser.parse_args()

    compiled = _load_compiled()
    rng = random.Random(1)
    errors = np.array([rng.randint(-100, 100) for _ in range(args.pid_steps)], dtype=np.int64)

    print(f"{'kernel':<28}{'backend':<10}{'time':>10}{'rate':>16}")
    rows = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])

    pid_results = {}
    for name, kernel in rows:
        elapsed, result = bench_pid(kernel, errors)
        pid_results[name] = result
        print(f"{'pid_run_sequence':<28}{name:<10}{elapsed:>9.3f}s"
              f"{args.pid_steps / elapsed / 1e6:>12.1f} Msteps/s")

    plant_results = {}
    for name, kernel in rows:
        elapsed, result = bench_plant(kernel, args.plant_substeps)
        plant_results[name] = result
        print(f"{'plant_run_substeps':<28}{name:<10}{elapsed:>9.3f}s"
              f"{args.plant_substeps / elapsed / 1e6:>12.1f} Msubsteps/s")

    if compiled:
        assert all(
            np.array_equal(a, b) for a, b in zip(pid_results["python"], pid_results["cython"])
        ), "backend mismatch in pid_run_sequence"
        assert plant_results["python"] == plant_results["cython"], \
            "backend mismatch in plant_run_substeps"
        print("parity: both backends produced identical results")
    else:
        print("compiled kernels not built; ran the pure-Python backend only")


if __name__ == "__main__":
    main()
