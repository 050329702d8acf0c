"""Time the numba and pure-numpy Smith normal form kernels on the same matrices.

    python3 benchmarks/bench_snf.py [--sizes 20 40 80] [--repeat 3]
"""

import argparse
import time

import numpy as np

from posethom._accel import USE_NUMBA
from posethom.kernels import smith_kernel, smith_numpy


def workloads(n, rng):
    sparse = rng.integers(-1, 2, (n, n + n // 2)) * (rng.random((n, n + n // 2)) < 0.15)
    dense = rng.integers(-9, 10, (n, n))
    # a coboundary-like matrix with a large torsion factor
    torsion = np.diag(rng.integers(1, 5, n)) @ rng.integers(-2, 3, (n, n))
    return {"sparse +-1": sparse, "dense small": dense, "scaled": torsion}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    if not USE_NUMBA:
        print("numba backend disabled (POSETHOM_NUMBA=0 or numba missing); timing numpy only")
    rng = np.random.default_rng(args.seed)
    smith_kernel(np.eye(3, dtype=np.int64), backend="numba")  # compile or load the cache
    print(f"{'matrix':<14}{'size':>10}{'int64':>7}{'numba ms':>12}{'numpy ms':>12}{'speedup':>10}")
    for n in args.sizes:
        for name, A in workloads(n, rng).items():
            ref = smith_kernel(A, backend="numpy")
            out = smith_kernel(A, backend="numba")
            assert [out[1][i, i] for i in range(out[0])] == [ref[1][i, i] for i in range(ref[0])]
            t_np = best_of(lambda: smith_kernel(A, backend="numpy"), args.repeat)
            t_nb = best_of(lambda: smith_kernel(A, backend="numba"), args.repeat)
            shape = f"{A.shape[0]}x{A.shape[1]}"
            # "no" means entries outgrew int64 and both backends ran the exact path
            fits = "yes" if smith_numpy(A.astype(np.int64), True, True) is not None else "no"
            print(f"{name:<14}{shape:>10}{fits:>7}{t_nb * 1e3:>12.2f}{t_np * 1e3:>12.2f}"
                  f"{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
