# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular elimination kernel (int64 residues, prime < 2**20).

Mirrors the pure-Python twin ``_fp_py`` exactly: same pivoting rule (first
nonzero entry in column order), same return conventions.
"""

import numpy as np

BACKEND = "compiled"


cdef long long _inv_mod(long long a, long long p):
    # extended Euclid; a is nonzero mod p
    cdef long long t = 0, newt = 1
    cdef long long r = p, newr = a % p
    cdef long long q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref(a, long long p):
    """Reduced row echelon form mod p; returns (array, pivot column list)."""
    arr = np.array(a, dtype=np.int64) % p
    cdef long long[:, ::1] m = arr
    cdef Py_ssize_t nrows = arr.shape[0], ncols = arr.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, pr
    cdef long long inv, factor, v
    pivots = []
    for c in range(ncols):
        if r == nrows:
            break
        pr = -1
        for i in range(r, nrows):
            if m[i, c] != 0:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(ncols):
                v = m[r, j]
                m[r, j] = m[pr, j]
                m[pr, j] = v
        inv = _inv_mod(m[r, c], p)
        for j in range(ncols):
            m[r, j] = (m[r, j] * inv) % p
        for i in range(nrows):
            if i != r and m[i, c] != 0:
                factor = m[i, c]
                for j in range(ncols):
                    m[i, j] = (m[i, j] - factor * m[r, j]) % p
                    if m[i, j] < 0:
                        m[i, j] += p
        pivots.append(c)
        r += 1
    return arr, pivots


def rank(a, long long p):
    return len(rref(a, p)[1])


def kernel(a, long long p):
    arr = np.asarray(a, dtype=np.int64)
    n = arr.shape[1]
    red, pivots = rref(arr, p)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    out = np.zeros((n, len(free)), dtype=np.int64)
    cdef long long[:, ::1] o = out
    cdef long long[:, ::1] rd = red
    cdef Py_ssize_t j, i, fc, pc
    for j in range(len(free)):
        fc = free[j]
        o[fc, j] = 1
        for i in range(len(pivots)):
            pc = pivots[i]
            o[pc, j] = (-rd[i, fc]) % p
            if o[pc, j] < 0:
                o[pc, j] += p
    return out


def solve(a, b, long long p):
    arr = np.asarray(a, dtype=np.int64)
    rhs = np.asarray(b, dtype=np.int64).reshape(-1)
    m_, n = arr.shape
    if rhs.shape[0] != m_:
        raise ValueError("rhs length %d does not match %d rows" % (rhs.shape[0], m_))
    aug = np.concatenate([arr, rhs.reshape(m_, 1)], axis=1)
    red, pivots = rref(aug, p)
    # wraparound is off module-wide, so avoid negative list indices
    if pivots and pivots[len(pivots) - 1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = red[i, n]
    return x


def matmul(a, b, long long p):
    A = np.ascontiguousarray(np.asarray(a, dtype=np.int64) % p)
    B = np.ascontiguousarray(np.asarray(b, dtype=np.int64) % p)
    cdef long long[:, ::1] x = A
    cdef long long[:, ::1] y = B
    cdef Py_ssize_t n = A.shape[0], k = A.shape[1], m_ = B.shape[1]
    out = np.zeros((n, m_), dtype=np.int64)
    cdef long long[:, ::1] o = out
    cdef Py_ssize_t i, j, t
    cdef long long acc, reduce_every = 1 << 21
    for i in range(n):
        for j in range(m_):
            acc = 0
            for t in range(k):
                acc += x[i, t] * y[t, j]
                if (t & (reduce_every - 1)) == reduce_every - 1:
                    acc %= p
            o[i, j] = acc % p
    return out
