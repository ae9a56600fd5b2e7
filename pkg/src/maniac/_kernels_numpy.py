"""Pure-numpy kernels for exact matrix algebra over tower fields.

A matrix over a field of total degree D (over the prime subfield F_p) is an
int64 array of shape (rows, cols, D) holding coefficient vectors; the field's
bilinear multiplication is given by a structure tensor S of shape (D, D, D)
with e_i * e_j = sum_k S[i,j,k] e_k.  All arithmetic stays exact in int64,
which is safe for p < 2**21 at desk-scale shapes (see fields module guard).
"""

from __future__ import annotations

import numpy as np


def elem_mul(a, b, S, p):
    """Product of two coefficient vectors."""
    if S.shape[0] == 1:
        return (a * b) % p
    return np.einsum("i,j,ijk->k", a, b, S) % p


def _solve_mod_p(m, rhs, p):
    """Solve m @ x = rhs over F_p for an invertible m (in place, returns x)."""
    d = m.shape[0]
    m = m % p
    rhs = rhs % p
    for col in range(d):
        row = col
        while m[row, col] == 0:
            row += 1
        if row != col:
            m[[col, row]] = m[[row, col]]
            rhs[[col, row]] = rhs[[row, col]]
        s = pow(int(m[col, col]), p - 2, p)
        m[col] = m[col] * s % p
        rhs[col] = rhs[col] * s % p
        for r in range(d):
            if r != col and m[r, col]:
                f = m[r, col]
                m[r] = (m[r] - f * m[col]) % p
                rhs[r] = (rhs[r] - f * rhs[col]) % p
    return rhs


def inv_elem(a, S, p):
    """Inverse of a nonzero coefficient vector."""
    d = S.shape[0]
    if d == 1:
        return np.array([pow(int(a[0]), p - 2, p)], dtype=np.int64)
    # right-multiplication-by-a matrix: (b*a)_k = sum_j b_j t[j,k]
    t = np.tensordot(a, S, axes=(0, 0)) % p
    e0 = np.zeros(d, dtype=np.int64)
    e0[0] = 1
    return _solve_mod_p(t.T.copy(), e0, p)


def mat_mul(A, B, S, p):
    """Field matrix product of (r,k,D) by (k,c,D)."""
    if S.shape[0] == 1:
        return (A[:, :, 0] @ B[:, :, 0] % p)[:, :, None]
    tmp = np.einsum("rki,kcj->rcij", A, B) % p
    return np.tensordot(tmp, S, axes=([2, 3], [0, 1])) % p


def rre(A, S, p):
    """Reduced row echelon form with transform tracking.

    Returns (R, T, pivots) where T @ A = R, T invertible, and pivots lists
    the pivot column of each leading row.  Pivot choice is the first row with
    a nonzero entry scanning top to bottom, so the result is deterministic.
    """
    rows, cols, d = A.shape
    R = A.copy() % p
    T = np.zeros((rows, rows, d), dtype=np.int64)
    for i in range(rows):
        T[i, i, 0] = 1
    pivots = []
    pr = 0
    for col in range(cols):
        if pr == rows:
            break
        nz = np.nonzero(R[pr:, col, :].any(axis=1))[0]
        if nz.size == 0:
            continue
        row = pr + int(nz[0])
        if row != pr:
            R[[pr, row]] = R[[row, pr]]
            T[[pr, row]] = T[[row, pr]]
        s = inv_elem(R[pr, col], S, p)
        if d == 1:
            R[pr] = R[pr] * s[0] % p
            T[pr] = T[pr] * s[0] % p
            f = R[:, col, 0].copy()
            f[pr] = 0
            R = (R - f[:, None, None] * R[pr][None, :, :]) % p
            T = (T - f[:, None, None] * T[pr][None, :, :]) % p
        else:
            R[pr] = np.einsum("ci,j,ijk->ck", R[pr], s, S) % p
            T[pr] = np.einsum("ci,j,ijk->ck", T[pr], s, S) % p
            f = R[:, col, :].copy()
            f[pr] = 0
            R = (R - np.einsum("ri,cj,ijk->rck", f, R[pr], S)) % p
            T = (T - np.einsum("ri,cj,ijk->rck", f, T[pr], S)) % p
        pivots.append(col)
        pr += 1
    return R, T, np.array(pivots, dtype=np.int64)
