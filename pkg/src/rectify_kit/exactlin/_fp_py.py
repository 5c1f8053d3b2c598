"""Pure-Python twin of the compiled modular elimination kernel.

Same signatures and pivoting rule (first nonzero entry in column order) as
``_fpkernel``; row updates are vectorised with numpy int64 arithmetic, which
is exact for residues below 2**20.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def rref(a, p):
    """Reduced row echelon form of ``a`` mod p.

    Returns ``(r, pivots)`` where ``r`` is a new int64 array and ``pivots``
    lists pivot column indices in order.
    """
    a = np.array(a, dtype=np.int64) % p
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            a[rows] = (a[rows] - np.outer(col[rows], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(a, p):
    return len(rref(a, p)[1])


def kernel(a, p):
    """Columns of the result form a basis of the right kernel mod p."""
    a = np.asarray(a, dtype=np.int64)
    m, n = a.shape
    red, pivots = rref(a, p)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    out = np.zeros((n, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        out[fc, j] = 1
        for i, pc in enumerate(pivots):
            out[pc, j] = (-int(red[i, fc])) % p
    return out


def solve(a, b, p):
    """One solution of a x = b mod p with free variables set to 0, or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError("rhs length %d does not match %d rows" % (b.shape[0], m))
    aug = np.concatenate([a, b.reshape(m, 1)], axis=1)
    red, pivots = rref(aug, p)
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = red[i, n]
    return x


def matmul(a, b, p):
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    k = a.shape[1]
    # residues < 2**20, so dot products of length < 2**22 fit in int64
    step = 1 << 21
    if k <= step:
        return (a @ b) % p
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        acc = (acc + a[:, s : s + step] @ b[s : s + step]) % p
    return acc
