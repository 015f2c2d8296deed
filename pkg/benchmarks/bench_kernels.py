"""Compare the compiled and numpy kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from treeharm import _kernels_py
from treeharm.tree import (
    ancestor_indices,
    ancestor_ratios,
    enumerate_ball,
    index_to_address,
    make_tree_params,
    sphere_size,
)

try:
    from treeharm import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases():
    """``(name, args-builder, kernel name)`` for representative workloads."""
    out = []
    for d0, d1, kappa, n in ((3, 3, 1, 16), (4, 5, 2, 10), (4, 5, 2, 12)):
        params = make_tree_params(d0, d1, kappa)
        x = index_to_address(params, n, sphere_size(params, n) // 3)
        args = (sphere_size(params, n), ancestor_ratios(params, n), ancestor_indices(params, x), n)
        out.append((f"prefix_counts ({d0},{d1},{kappa}) sphere {n}, {args[0]} vertices",
                    "prefix_counts", args))
    params = make_tree_params(4, 5, 2)
    ball = enumerate_ball(params, 4)
    verts = [ball.address(g) for g in range(len(ball)) if int(ball.depth[g]) % 2 == 0]
    anc = np.full((len(verts), 5), -1, dtype=np.int64)
    for i, v in enumerate(verts):
        a = ancestor_indices(params, v)
        anc[i, : a.size] = a
    out.append((f"pairwise_prefix (4,5,2) orbit ball radius 4, {len(verts)} vertices",
                "pairwise_prefix", (anc,)))
    return out


def best_of(fn, args, repeat: int) -> float:
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    print(f"{'workload':<62} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8}")
    for name, kernel, kargs in cases():
        t_py = best_of(getattr(_kernels_py, kernel), kargs, args.repeat)
        if _ckernels is None:
            print(f"{name:<62} {t_py:>10.4f} {'n/a':>11} {'n/a':>8}")
            continue
        fast = getattr(_ckernels, kernel)
        assert np.array_equal(np.asarray(fast(*kargs)), getattr(_kernels_py, kernel)(*kargs))
        t_cy = best_of(fast, kargs, args.repeat)
        print(f"{name:<62} {t_py:>10.4f} {t_cy:>11.4f} {t_py / t_cy:>7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
