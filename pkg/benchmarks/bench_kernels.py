"""Compare the compiled sign-enumeration kernel against the numpy fallback.

Both backends scan all 2^m sign patterns of an m x n sign matrix and return
the maximizing pattern; results must agree exactly on integer input.  Run

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --rows 14,18,22 --cols 16 --repeats 5
"""

import argparse
import math
import time

import numpy as np

from signforms import _kernels_py
from signforms.ksz import sample_signs

try:
    from signforms import _accel
except ImportError:
    _accel = None


def time_backend(fn, M, reps):
    best = math.inf
    result = None
    for _ in range(reps):
        t0 = time.perf_counter()
        result = fn(M, 0, 1 << M.shape[0])
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", default="12,16,20,22", help="comma list of m values")
    ap.add_argument("--cols", type=int, default=8, help="n, the free dimension")
    ap.add_argument("--repeats", type=int, default=3, help="best-of repetitions")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _accel is None:
        print("compiled extension not available; timing the fallback only")
    rows = [int(m) for m in args.rows.split(",")]
    header = f"{'m':>4} {'patterns':>12} {'python s':>10}"
    if _accel is not None:
        header += f" {'compiled s':>11} {'speedup':>8}"
    print(header)
    for m in rows:
        M = np.ascontiguousarray(
            sample_signs((m, args.cols), args.seed).signs, dtype=np.float64
        )
        t_py, res_py = time_backend(_kernels_py.best_sign_pattern, M, args.repeats)
        line = f"{m:>4} {1 << m:>12} {t_py:>10.4f}"
        if _accel is not None:
            t_c, res_c = time_backend(_accel.best_sign_pattern, M, args.repeats)
            assert res_py[0] == res_c[0] and np.array_equal(res_py[1], res_c[1])
            line += f" {t_c:>11.4f} {t_py / t_c:>8.1f}"
        print(line)


if __name__ == "__main__":
    main()
