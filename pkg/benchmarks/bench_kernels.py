#!/usr/bin/env python3
"""Compare the compiled distance kernels against the NumPy/SciPy fallback.

Times the two kernel entry points that dominate cross-validation runs:
the pairwise distance matrix for a single bag pair, and the fused
one-bag-versus-all-references operator table that featurization uses.

Usage: python benchmarks/bench_kernels.py [--dim 64] [--refs 80] ...
"""

import argparse
import time

import numpy as np

from mibrv import _kernels
from mibrv.brv import ReferenceSet
from mibrv.core import Bag


def _random_bags(rng, count, size_range, dim):
    bags = []
    for i in range(count):
        size = int(rng.integers(size_range[0], size_range[1] + 1))
        bags.append(Bag(id=f"b{i}", features=rng.standard_normal((size, dim))))
    return bags


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dim", type=int, default=64)
    parser.add_argument("--refs", type=int, default=80)
    parser.add_argument("--bag-sizes", default="8,32,128",
                        help="comma list of query-bag instance counts")
    parser.add_argument("--ref-size-range", default="4,16",
                        help="min,max instances per reference bag")
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    backends = _kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the numpy fallback is available")
    rng = np.random.default_rng(args.seed)
    lo, hi = (int(t) for t in args.ref_size_range.split(","))
    refs = ReferenceSet(_random_bags(rng, args.refs, (lo, hi), args.dim))
    bag_sizes = [int(t) for t in args.bag_sizes.split(",")]

    print(f"dim={args.dim} refs={args.refs} ref sizes {lo}..{hi} k={args.k} "
          f"(best of {args.repeats})")
    header = f"{'case':<34}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)

    cases = []
    for m in bag_sizes:
        a = rng.standard_normal((m, args.dim))
        b = rng.standard_normal((max(lo, m // 2), args.dim))
        cases.append((f"distance matrix {m}x{b.shape[0]}",
                      lambda a=a, b=b: _kernels.cross_distance_matrix(a, b)))
        cases.append((f"operator table, bag of {m} vs refs",
                      lambda a=a: _kernels.operator_table_block(
                          a, refs._stacked, refs._offsets, args.k)))

    for name, fn in cases:
        times = {}
        for backend in backends:
            _kernels.use_backend(backend)
            fn()  # warm up, and sanity-check the call works
            times[backend] = _time(fn, args.repeats)
        row = f"{name:<34}" + "".join(f"{times[b] * 1e3:>10.3f}ms" for b in backends)
        if len(backends) == 2:
            row += f"{times['numpy'] / times['cython']:>9.1f}x"
        print(row)

    # agreement spot check while both backends are loaded
    if len(backends) == 2:
        a = rng.standard_normal((16, args.dim))
        _kernels.use_backend("numpy")
        t_np = _kernels.operator_table_block(a, refs._stacked, refs._offsets, args.k)
        _kernels.use_backend("cython")
        t_cy = _kernels.operator_table_block(a, refs._stacked, refs._offsets, args.k)
        print(f"max |cython - numpy| over one table: {np.abs(t_np - t_cy).max():.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
