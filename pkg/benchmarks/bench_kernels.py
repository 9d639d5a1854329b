"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 100000]

Prints one line per kernel with best-of-N timings and the speedup, then
times an end-to-end bound-domination sweep under each backend (the
backend is fixed at import, so the sweep runs in subprocesses).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from p1bounds.kernels import backend_module

SWEEP = """
import time
from p1bounds import preset, uniform_mesh, verify_bound, TAYLOR, taylor_like
t = time.perf_counter()
for name in ("sin_pi", "gauss_bump", "expx"):
    for cells in (32, 64, 128):
        for p in (2, 3, 5):
            for m in (TAYLOR, taylor_like(4)):
                verify_bound(preset(name), uniform_mesh(cells), p, m)
print(time.perf_counter() - t)
"""


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=100_000)
    args = ap.parse_args()

    try:
        cy = backend_module("cython")
    except ImportError:
        sys.exit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    py = backend_module("python")

    rng = np.random.default_rng(0)
    m = args.size
    v = rng.standard_normal(m)
    w = rng.uniform(0.0, 1.0, m)
    off = rng.uniform(-1.0, 1.0, m - 1)
    diag = 2.5 + rng.uniform(0.0, 1.0, m)

    cases = {
        "compensated_sum": lambda k: k.compensated_sum(v),
        "trapezoid_mean": lambda k: k.trapezoid_mean(v),
        "weighted_abs_power_sum(p=5)": lambda k: k.weighted_abs_power_sum(v, w, 5),
        "thomas_solve": lambda k: k.thomas_solve(off, diag, off, v),
    }
    print(f"size {m}, best of {args.repeat}")
    print(f"{'kernel':30s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>9s}")
    for name, call in cases.items():
        tp = best(lambda: call(py), args.repeat)
        tc = best(lambda: call(cy), args.repeat)
        print(f"{name:30s} {tp:12.4e} {tc:12.4e} {tp / tc:9.1f}")

    print("\nend-to-end sweep (54 verify_bound calls)")
    for label, env in (("python", {"P1BOUNDS_PURE_PYTHON": "1"}), ("cython", {"P1BOUNDS_PURE_PYTHON": "0"})):
        out = subprocess.run([sys.executable, "-c", SWEEP], env=dict(os.environ, **env),
                             capture_output=True, text=True, check=True)
        print(f"  {label:8s} {float(out.stdout):.3f} s")


if __name__ == "__main__":
    main()
