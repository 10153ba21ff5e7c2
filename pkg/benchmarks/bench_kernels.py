"""Compiled vs numpy modular kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from resurgia import kernels


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(rng, P):
    a = rng.integers(0, P, 2000, dtype=np.int64)
    b = rng.integers(0, P, 2000, dtype=np.int64)
    A = rng.integers(0, P, (120, 120), dtype=np.int64)
    B = rng.integers(0, P, (120, 120), dtype=np.int64)
    # tall rank-deficient system, the shape annihilator scans produce
    L = rng.integers(0, P, (400, 100), dtype=np.int64)
    M = np.asarray(kernels._py.matmul_mod(L, rng.integers(0, P, (100, 126), dtype=np.int64), P))
    return {
        "conv_mod 2000": lambda impl: impl.conv_mod(a, b, 2000, P),
        "matmul_mod 120": lambda impl: impl.matmul_mod(A, B, P),
        "rank_mod 400x126": lambda impl: impl.rank_mod(M, P),
        "rref_mod 400x126": lambda impl: impl.rref_mod(M, P)[1],
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    P = kernels.PRIME
    impls = kernels.implementations()
    rng = np.random.default_rng(0)
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':<20}" + "".join(f"{n:>12}" for n in impls) + f"{'speedup':>10}")
    for name, fn in cases(rng, P).items():
        times, outs = {}, {}
        for iname, impl in impls.items():
            times[iname], outs[iname] = _best(lambda: fn(impl), args.repeat)
        vals = list(outs.values())
        agree = all(np.array_equal(np.asarray(v), np.asarray(vals[0])) for v in vals[1:])
        speed = times["numpy"] / times["compiled"] if "compiled" in times else float("nan")
        row = f"{name:<20}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in impls) + f"{speed:>9.1f}x"
        print(row + ("" if agree else "  MISMATCH"))


if __name__ == "__main__":
    main()
