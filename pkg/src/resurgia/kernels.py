"""Modular arithmetic kernels with a compiled core and a numpy fallback.

The compiled module is used when it was built and ``RESURGIA_PURE`` is not
set; ``BACKEND`` names the active implementation.
"""

from __future__ import annotations

import os

import numpy as np

from . import _modkern_py as _py

# 2^31 - 1: a prime small enough for exact int64 products
PRIME = 2147483647
PRIME2 = 2147483629

_compiled = None
if not os.environ.get("RESURGIA_PURE"):
    try:
        from . import _modkern as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _compiled = None

_impl = _compiled if _compiled is not None else _py
BACKEND = "compiled" if _compiled is not None else "numpy"

conv_mod = _impl.conv_mod
matmul_mod = _impl.matmul_mod
rank_mod = _impl.rank_mod
rref_mod = _impl.rref_mod


def implementations() -> dict:
    """Both implementations (for benchmarks and cross-checks)."""
    out = {"numpy": _py}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out


def to_mod(x, P: int = PRIME) -> int:
    """Image of a rational in GF(P)."""
    from fractions import Fraction

    x = Fraction(x)
    if x.denominator % P == 0:
        raise ZeroDivisionError(f"denominator of {x} vanishes modulo {P}")
    return x.numerator % P * pow(x.denominator, -1, P) % P


def rational_reconstruct(a: int, P: int = PRIME):
    """Fraction n/d with n = a d mod P and |n|, d <= sqrt(P/2), or None."""
    from fractions import Fraction
    from math import gcd, isqrt

    bound = isqrt(P // 2)
    r0, r1, t0, t1 = P, a % P, 0, 1
    while r1 > bound:
        qt = r0 // r1
        r0, r1, t0, t1 = r1, r0 - qt * r1, t1, t0 - qt * t1
    if t1 == 0 or abs(t1) > bound or gcd(r1, abs(t1)) != 1:
        return None
    return Fraction(r1, t1)


def nullspace_mod(M, P: int = PRIME) -> np.ndarray:
    """Basis of the right nullspace modulo P, one row per free column."""
    M = np.asarray(M, dtype=np.int64)
    n = M.shape[1]
    R, piv = rref_mod(M, P)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, c in enumerate(piv):
            out[t, c] = (-R[i, f]) % P
    return out


__all__ = ["PRIME", "PRIME2", "BACKEND", "conv_mod", "matmul_mod", "rank_mod", "rref_mod", "nullspace_mod",
           "to_mod", "rational_reconstruct", "implementations"]
