"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--repeat 5]

Prints one row per (kernel, size) with the best-of-``repeat`` time of each
backend and the speedup. Also times the dense stability constant, whose
triangular solve goes through ``banded_solve``.
"""
import argparse
import time

import numpy as np

from lmmstab import _pykernels, kernels
from lmmstab.methods import get_method
from lmmstab.norms import INF_SPIJKER, stability_constant
from lmmstab.operators import make_bundle


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    found = kernels.backends()
    ext = found.get("cython")
    print(f"selected backend: {kernels.BACKEND}")
    if ext is None:
        print("compiled extension not available; timing the Python backend only")

    coeffs = list(get_method("milne").alpha)
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'n':>9}{'python [s]':>14}{'cython [s]':>14}{'speedup':>10}")
    for n in sizes:
        x = rng.standard_normal(n)
        cases = {
            "banded_matvec": lambda k, x=x: k.banded_matvec(coeffs, x),
            "banded_solve": lambda k, x=x: k.banded_solve(coeffs, x, start=2),
            "banded_solve x8 cols": lambda k, X=rng.standard_normal((n, 8)): k.banded_solve(coeffs, X, start=2),
            "max_abs_prefix_sum": lambda k, x=x: k.max_abs_prefix_sum(x),
        }
        for name, call in cases.items():
            tp = best_time(lambda: call(_pykernels), args.repeat)
            if ext is None:
                print(f"{name:<22}{n:>9}{tp:>14.3e}{'-':>14}{'-':>10}")
                continue
            tc = best_time(lambda: call(ext), args.repeat)
            print(f"{name:<22}{n:>9}{tp:>14.3e}{tc:>14.3e}{tp / tc:>9.1f}x")

    print()
    for n in (128, 512, 1024):
        b = make_bundle(get_method("milne"), n)
        t = best_time(lambda: stability_constant(b, INF_SPIJKER), max(1, args.repeat // 2))
        print(f"stability_constant milne inf-spijker n={n}: {t:.3e} s ({kernels.BACKEND})")


if __name__ == "__main__":
    main()
