"""Compare the compiled and pure-Python majorisation kernels.

    python3 benchmarks/bench_kernels.py [--dims 3 6 12 24] [--repeat 5]

Prints microseconds per call for each kernel and dimension, and the speedup.
"""
import argparse
import timeit

import numpy as np

from workconv import _kernels_py
from workconv.majorisation import chain_matrix

try:
    from workconv import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def instance(d, rng):
    x = np.sort(rng.dirichlet(np.ones(d)))[::-1].copy()
    mix = [(rng.uniform(0.5, 1.0), i, j) for i in range(d) for j in range(i + 1, d)]
    y = np.sort(chain_matrix(d, mix) @ x)[::-1].copy()
    dmat = chain_matrix(d, _kernels_py.t_transform_chain(x, y, 1e-13))
    return x, y, dmat


def per_call(fn, repeat):
    timer = timeit.Timer(fn)
    n, _ = timer.autorange()
    return min(timer.repeat(repeat, n)) / n * 1e6


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[3, 6, 12, 24])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not available; only the Python backend is timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<18}{'d':>4}{'python us':>12}{'cython us':>12}{'speedup':>9}")
    for d in args.dims:
        x, y, dmat = instance(d, rng)
        cases = {
            "partial_sum_gaps": lambda m: m.partial_sum_gaps(x, y),
            "t_transform_chain": lambda m: m.t_transform_chain(x, y, 1e-13),
            "birkhoff": lambda m: m.birkhoff(dmat, 1e-13),
        }
        for name, call in cases.items():
            py = per_call(lambda: call(_kernels_py), args.repeat)
            if compiled is None:
                print(f"{name:<18}{d:>4}{py:>12.2f}{'-':>12}{'-':>9}")
                continue
            cy = per_call(lambda: call(compiled), args.repeat)
            print(f"{name:<18}{d:>4}{py:>12.2f}{cy:>12.2f}{py / cy:>8.1f}x")


if __name__ == "__main__":
    main()
