"""Pure numpy versions of the modular kernels.

Products are split into 15-bit limbs so every int64 accumulation stays exact
for moduli below 2^31 and inner dimensions below 2^17.
"""

from __future__ import annotations

import numpy as np

_SHIFT = 15
_MASK = (1 << _SHIFT) - 1


def conv_mod(a, b, n: int, P: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)[:n]
    b = np.asarray(b, dtype=np.int64)[:n]
    out = np.zeros(n, dtype=np.int64)
    if not len(a) or not len(b):
        return out
    lo = np.convolve(a, b & _MASK)[:n] % P
    hi = np.convolve(a, b >> _SHIFT)[:n] % P
    res = (lo + (hi << _SHIFT) % P) % P
    out[: len(res)] = res
    return out


def matmul_mod(A, B, P: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    lo = (A @ (B & _MASK)) % P
    hi = (A @ (B >> _SHIFT)) % P
    return (lo + (hi << _SHIFT) % P) % P


def _inv(a: int, P: int) -> int:
    return pow(int(a), -1, P)


def rref_mod(M, P: int):
    W = np.array(M, dtype=np.int64) % P
    m, n = W.shape
    r = 0
    piv = []
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(W[r:, c])[0]
        if not len(nz):
            continue
        k = r + int(nz[0])
        if k != r:
            W[[r, k]] = W[[k, r]]
        W[r, c:] = W[r, c:] * _inv(W[r, c], P) % P
        f = W[:, c].copy()
        f[r] = 0
        rows = np.nonzero(f)[0]
        if len(rows):
            W[rows, c:] = (W[rows, c:] + (P - f[rows])[:, None] * W[r, c:][None, :]) % P
        piv.append(c)
        r += 1
    return W[:r], piv


def rank_mod(M, P: int) -> int:
    W = np.array(M, dtype=np.int64) % P
    m, n = W.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(W[r:, c])[0]
        if not len(nz):
            continue
        k = r + int(nz[0])
        if k != r:
            W[[r, k]] = W[[k, r]]
        W[r, c:] = W[r, c:] * _inv(W[r, c], P) % P
        f = W[r + 1:, c]
        rows = r + 1 + np.nonzero(f)[0]
        if len(rows):
            W[rows, c:] = (W[rows, c:] + (P - W[rows, c])[:, None] * W[r, c:][None, :]) % P
        r += 1
    return r
