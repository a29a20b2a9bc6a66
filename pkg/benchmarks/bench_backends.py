"""Timing comparison of the compiled and the pure-numpy schedule executors.

The package picks the executor at import time: numba when importable and
PFADFT_DISABLE_NUMBA is unset, vectorized numpy otherwise. This script runs
the same workloads through both code paths in one process and reports the
ratio, so the env-flag tradeoff is visible without re-launching.

Usage: python benchmarks/bench_backends.py [--repeats N]
"""

import argparse
import time

import numpy as np

from pfadft import accel, plan
from pfadft.kernels import approx_fast_schedule
from pfadft.pfa import _run_tree
from pfadft.schedule import run_numpy


def _time(fn, repeats):
    fn()  # warm up (includes jit compilation on the compiled path)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=7)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"numba available: {accel.HAVE_NUMBA}, disabled by flag: {accel.NUMBA_DISABLED}")
    compiled_active = accel.HAVE_NUMBA and not accel.NUMBA_DISABLED

    rows = []
    for n in (11, 31):
        sched = approx_fast_schedule(n)
        for batch in (1, 64, 1024):
            x = rng.standard_normal((n, batch)) + 1j * rng.standard_normal((n, batch))
            t_np = _time(lambda: run_numpy(sched, x), args.repeats)
            t_nb = _time(lambda: accel.run(sched, x), args.repeats) if compiled_active else float("nan")
            rows.append((f"kernel n={n}", batch, t_np, t_nb))

    tree = plan(1023, "csd").tree
    for batch in (1, 16):
        x = rng.standard_normal((1023, batch)) + 1j * rng.standard_normal((1023, batch))
        t_np = _time(lambda: _run_tree(tree, x, run_numpy), args.repeats)
        t_nb = _time(lambda: _run_tree(tree, x, accel.run), args.repeats) if compiled_active else float("nan")
        rows.append(("1023-point composition", batch, t_np, t_nb))

    print(f"{'workload':26s} {'batch':>5s} {'numpy (ms)':>12s} {'numba (ms)':>12s} {'speedup':>8s}")
    for name, batch, t_np, t_nb in rows:
        ratio = t_np / t_nb if t_nb == t_nb and t_nb > 0 else float("nan")
        print(f"{name:26s} {batch:5d} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {ratio:8.1f}")
    if not compiled_active:
        print("compiled path inactive; rerun without PFADFT_DISABLE_NUMBA to compare")


if __name__ == "__main__":
    main()
