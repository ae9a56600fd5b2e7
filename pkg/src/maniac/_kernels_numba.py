"""Numba twins of the numpy kernels (same contracts, explicit loops).

Each function mirrors maniac._kernels_numpy exactly; the backend module picks
one implementation at import time.  Partial reductions keep every intermediate
below 2**63 for p < 2**21.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def _modpow(x, e, p):
    x %= p
    r = 1
    while e > 0:
        if e & 1:
            r = r * x % p
        x = x * x % p
        e >>= 1
    return r


@njit(cache=True)
def elem_mul(a, b, S, p):
    d = S.shape[0]
    out = np.zeros(d, dtype=np.int64)
    for i in range(d):
        if a[i] == 0:
            continue
        for j in range(d):
            t = a[i] * b[j] % p
            if t == 0:
                continue
            for k in range(d):
                out[k] += t * S[i, j, k]
        for k in range(d):
            out[k] %= p
    return out


@njit(cache=True)
def _solve_mod_p(m, rhs, p):
    d = m.shape[0]
    for i in range(d):
        for j in range(d):
            m[i, j] %= p
        rhs[i] %= p
    for col in range(d):
        row = col
        while m[row, col] == 0:
            row += 1
        if row != col:
            for j in range(d):
                tmp = m[col, j]
                m[col, j] = m[row, j]
                m[row, j] = tmp
            tmp = rhs[col]
            rhs[col] = rhs[row]
            rhs[row] = tmp
        s = _modpow(m[col, col], p - 2, p)
        for j in range(d):
            m[col, j] = m[col, j] * s % p
        rhs[col] = rhs[col] * s % p
        for r in range(d):
            if r != col and m[r, col] != 0:
                f = m[r, col]
                for j in range(d):
                    m[r, j] = (m[r, j] - f * m[col, j]) % p
                rhs[r] = (rhs[r] - f * rhs[col]) % p
    return rhs


@njit(cache=True)
def inv_elem(a, S, p):
    d = S.shape[0]
    if d == 1:
        out = np.empty(1, dtype=np.int64)
        out[0] = _modpow(a[0], p - 2, p)
        return out
    t = np.zeros((d, d), dtype=np.int64)
    for j in range(d):
        for i in range(d):
            if a[i] == 0:
                continue
            for k in range(d):
                t[k, j] += a[i] * S[i, j, k] % p
        for k in range(d):
            t[k, j] %= p
    e0 = np.zeros(d, dtype=np.int64)
    e0[0] = 1
    return _solve_mod_p(t, e0, p)


@njit(cache=True)
def mat_mul(A, B, S, p):
    r, kk, d = A.shape
    c = B.shape[1]
    out = np.zeros((r, c, d), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            acc = np.zeros(d, dtype=np.int64)
            for m in range(kk):
                for a in range(d):
                    va = A[i, m, a]
                    if va == 0:
                        continue
                    for b in range(d):
                        t = va * B[m, j, b] % p
                        if t == 0:
                            continue
                        for k in range(d):
                            acc[k] += t * S[a, b, k]
                for k in range(d):
                    acc[k] %= p
            out[i, j] = acc
    return out


@njit(cache=True)
def rre(A, S, p):
    rows, cols, d = A.shape
    R = A.copy()
    for i in range(rows):
        for j in range(cols):
            for k in range(d):
                R[i, j, k] %= p
    T = np.zeros((rows, rows, d), dtype=np.int64)
    for i in range(rows):
        T[i, i, 0] = 1
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    pr = 0
    for col in range(cols):
        if pr == rows:
            break
        row = -1
        for r in range(pr, rows):
            for k in range(d):
                if R[r, col, k] != 0:
                    row = r
                    break
            if row >= 0:
                break
        if row < 0:
            continue
        if row != pr:
            for j in range(cols):
                for k in range(d):
                    tmp = R[pr, j, k]
                    R[pr, j, k] = R[row, j, k]
                    R[row, j, k] = tmp
            for j in range(rows):
                for k in range(d):
                    tmp = T[pr, j, k]
                    T[pr, j, k] = T[row, j, k]
                    T[row, j, k] = tmp
        s = inv_elem(R[pr, col].copy(), S, p)
        for j in range(cols):
            R[pr, j] = elem_mul(R[pr, j], s, S, p)
        for j in range(rows):
            T[pr, j] = elem_mul(T[pr, j], s, S, p)
        for r in range(rows):
            if r == pr:
                continue
            hit = False
            for k in range(d):
                if R[r, col, k] != 0:
                    hit = True
                    break
            if not hit:
                continue
            f = R[r, col].copy()
            for j in range(cols):
                prod = elem_mul(f, R[pr, j], S, p)
                for k in range(d):
                    R[r, j, k] = (R[r, j, k] - prod[k]) % p
            for j in range(rows):
                prod = elem_mul(f, T[pr, j], S, p)
                for k in range(d):
                    T[r, j, k] = (T[r, j, k] - prod[k]) % p
        pivots[pr] = col
        pr += 1
    return R, T, pivots[:pr].copy()
