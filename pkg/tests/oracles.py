"""Independent reference implementations used only by the test suite.

These deliberately avoid the library's elimination code paths: rank here is
fraction-free (Bareiss) over the rationals and last-nonzero-pivot elimination
mod p, so an agreement between library and oracle is evidence rather than a
tautology.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product


def bareiss_rank(rows) -> int:
    """Fraction-free Gaussian elimination rank over exact integers/rationals."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    prev = Fraction(1)
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, m):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        for i in range(row + 1, m):
            for j in range(col + 1, n):
                a[i][j] = (a[row][col] * a[i][j] - a[i][col] * a[row][j]) / prev
            a[i][col] = Fraction(0)
        prev = a[row][col]
        rank += 1
        row += 1
        if row == m:
            break
    return rank


def modp_rank(rows, p: int) -> int:
    """Row reduction mod p choosing the LAST nonzero entry as pivot."""
    a = [[x % p for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    rank = 0
    row = 0
    for col in range(n):
        if row == m:
            break
        piv = None
        for i in range(m - 1, row - 1, -1):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], p - 2, p)
        a[row] = [(v * inv) % p for v in a[row]]
        for i in range(m):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [(a[i][j] - f * a[row][j]) % p for j in range(n)]
        rank += 1
        row += 1
    return rank


def exhaustive_kernel(rows, p: int):
    """All kernel vectors of a small matrix mod p, by brute force."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    out = []
    for vec in product(range(p), repeat=n):
        if all(sum(rows[i][j] * vec[j] for j in range(n)) % p == 0 for i in range(m)):
            out.append(vec)
    return out


def mat_vec_q(rows, vec):
    return [sum(Fraction(rows[i][j]) * Fraction(vec[j]) for j in range(len(vec))) for i in range(len(rows))]
