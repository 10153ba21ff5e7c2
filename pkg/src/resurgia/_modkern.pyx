# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular kernels: series products, matrix products, elimination."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64


def conv_mod(a, b, Py_ssize_t n, i64 P):
    """First n coefficients of a*b modulo P (inputs reduced to [0, P), P < 2^31)."""
    cdef const i64[:] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef const i64[:] bv = np.ascontiguousarray(b, dtype=np.int64)
    cdef Py_ssize_t la = min(av.shape[0], n), lb = min(bv.shape[0], n), i, j, k, jlo, jhi
    blo_a = np.empty(lb, dtype=np.int64)
    bhi_a = np.empty(lb, dtype=np.int64)
    cdef i64[:] blo = blo_a
    cdef i64[:] bhi = bhi_a
    for j in range(lb):
        blo[j] = bv[j] & 32767
        bhi[j] = bv[j] >> 15
    out = np.zeros(n, dtype=np.int64)
    cdef i64[:] ov = out
    cdef i64 slo, shi, x
    # 15-bit limbs keep each product below 2^46; sums of < 2^17 terms fit in int64
    for k in range(min(n, la + lb - 1)):
        slo = 0
        shi = 0
        jlo = k - la + 1 if k - la + 1 > 0 else 0
        jhi = k if k < lb - 1 else lb - 1
        for j in range(jlo, jhi + 1):
            x = av[k - j]
            slo += x * blo[j]
            shi += x * bhi[j]
        ov[k] = (slo % P + ((shi % P) << 15) % P) % P
    return out


def matmul_mod(A, B, i64 P):
    cdef const i64[:, :] Av = np.ascontiguousarray(A, dtype=np.int64)
    cdef const i64[:, :] Bv = np.ascontiguousarray(B, dtype=np.int64)
    cdef Py_ssize_t m = Av.shape[0], k = Av.shape[1], n = Bv.shape[1], i, j, t
    if Bv.shape[0] != k:
        raise ValueError("shape mismatch")
    lo_a = np.zeros(n, dtype=np.int64)
    hi_a = np.zeros(n, dtype=np.int64)
    cdef i64[:] lo = lo_a
    cdef i64[:] hi = hi_a
    out = np.zeros((m, n), dtype=np.int64)
    cdef i64[:, :] ov = out
    cdef i64 x, y
    for i in range(m):
        for j in range(n):
            lo[j] = 0
            hi[j] = 0
        for t in range(k):
            x = Av[i, t]
            if x == 0:
                continue
            for j in range(n):
                y = Bv[t, j]
                lo[j] += x * (y & 32767)
                hi[j] += x * (y >> 15)
        for j in range(n):
            ov[i, j] = (lo[j] % P + ((hi[j] % P) << 15) % P) % P
    return out


cdef i64 _inv(i64 a, i64 P) except -1:
    cdef i64 t = 0, nt = 1, r = P, nr = a % P, qq, tmp
    while nr:
        qq = r // nr
        tmp = t - qq * nt; t = nt; nt = tmp
        tmp = r - qq * nr; r = nr; nr = tmp
    if r != 1:
        raise ZeroDivisionError("not invertible modulo P")
    t = t % P
    if t < 0:
        t += P
    return t


def rref_mod(M, i64 P):
    """Reduced row echelon form modulo P; returns (matrix, pivot columns)."""
    W = np.array(M, dtype=np.int64) % P
    cdef i64[:, :] Wv = W
    cdef Py_ssize_t m = Wv.shape[0], n = Wv.shape[1], r = 0, c, i, j, k
    cdef i64 inv, f
    piv = []
    for c in range(n):
        if r == m:
            break
        k = -1
        for i in range(r, m):
            if Wv[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(n):
                f = Wv[r, j]; Wv[r, j] = Wv[k, j]; Wv[k, j] = f
        inv = _inv(Wv[r, c], P)
        for j in range(c, n):
            Wv[r, j] = (Wv[r, j] * inv) % P
        for i in range(m):
            if i == r:
                continue
            f = Wv[i, c]
            if f == 0:
                continue
            f = P - f
            for j in range(c, n):
                Wv[i, j] = (Wv[i, j] + f * Wv[r, j]) % P
        piv.append(c)
        r += 1
    return W[:r], piv


def rank_mod(M, i64 P):
    """Rank modulo P by forward elimination only."""
    W = np.array(M, dtype=np.int64) % P
    cdef i64[:, :] Wv = W
    cdef Py_ssize_t m = Wv.shape[0], n = Wv.shape[1], r = 0, c, i, j, k
    cdef i64 inv, f
    for c in range(n):
        if r == m:
            break
        k = -1
        for i in range(r, m):
            if Wv[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, n):
                f = Wv[r, j]; Wv[r, j] = Wv[k, j]; Wv[k, j] = f
        inv = _inv(Wv[r, c], P)
        for j in range(c, n):
            Wv[r, j] = (Wv[r, j] * inv) % P
        for i in range(r + 1, m):
            f = Wv[i, c]
            if f == 0:
                continue
            f = P - f
            for j in range(c, n):
                Wv[i, j] = (Wv[i, j] + f * Wv[r, j]) % P
        r += 1
    return r
