"""Immutable exact matrices over the rationals or a prime field.

Storage is a coordinate map of nonzero entries; small matrices (both sides
below 64) run their products densely, larger ones stay in dictionary form.
Elimination uses the first nonzero entry in column order as pivot, with no
magnitude heuristics; over the rationals this is simple and deterministic
but can grow numerators and denominators quickly on large inputs, which is
acceptable at the scale this library targets.

Prime field elimination is delegated to the kernel selected in
``_dispatch`` (compiled extension when available, numpy fallback otherwise).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from ..errors import InputError
from . import _dispatch
from .fields import FieldSpec

DENSE_CUTOFF = 64


class Matrix:
    """A rows x cols matrix over ``field``; treat instances as immutable."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise InputError("negative matrix dimensions (%d, %d)" % (rows, cols))
        self.field = field
        self.rows = rows
        self.cols = cols
        clean = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (i, j), raw in items:
                if not (0 <= i < rows and 0 <= j < cols):
                    raise InputError(
                        "entry position (%d, %d) outside a %dx%d matrix"
                        % (i, j, rows, cols)
                    )
                v = field.coerce(raw)
                if v != 0:
                    clean[(i, j)] = v
        self.entries = clean

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence]) -> "Matrix":
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        ent = {}
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise InputError("ragged rows in matrix literal")
            for j, v in enumerate(row):
                ent[(i, j)] = v
        return cls(field, nr, nc, ent)

    @classmethod
    def zero(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def from_columns(cls, field: FieldSpec, cols: Sequence[Sequence]) -> "Matrix":
        nc = len(cols)
        nr = len(cols[0]) if nc else 0
        ent = {}
        for j, col in enumerate(cols):
            for i, v in enumerate(col):
                ent[(i, j)] = v
        return cls(field, nr, nc, ent)

    # -- basic queries --------------------------------------------------------

    def entry(self, i: int, j: int):
        return self.entries.get((i, j), self.field.zero())

    def items(self):
        return sorted(self.entries.items())

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __repr__(self) -> str:
        return "Matrix(%dx%d over %s, %d nonzero)" % (
            self.rows,
            self.cols,
            "Q" if self.field.is_rational else "F_%d" % self.field.characteristic,
            len(self.entries),
        )

    def to_dense_rows(self):
        z = self.field.zero()
        out = [[z] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def column(self, j: int):
        return tuple(self.entry(i, j) for i in range(self.rows))

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    # -- arithmetic -----------------------------------------------------------

    def add(self, other: "Matrix") -> "Matrix":
        self._require_same_shape(other)
        f = self.field
        ent = dict(self.entries)
        for k, v in other.entries.items():
            ent[k] = f.add(ent.get(k, f.zero()), v)
        return Matrix(f, self.rows, self.cols, ent)

    def sub(self, other: "Matrix") -> "Matrix":
        return self.add(other.scale(self.field.coerce(-1)))

    def scale(self, scalar) -> "Matrix":
        f = self.field
        s = f.coerce(scalar)
        return Matrix(
            f, self.rows, self.cols, {k: f.mul(v, s) for k, v in self.entries.items()}
        )

    def mul(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise InputError("matrix product over mismatched fields")
        if self.cols != other.rows:
            raise InputError(
                "cannot multiply %dx%d by %dx%d"
                % (self.rows, self.cols, other.rows, other.cols)
            )
        f = self.field
        small = max(self.rows, self.cols, other.cols) < DENSE_CUTOFF
        if not f.is_rational and not small:
            a = self._to_np()
            b = other._to_np()
            prod = _dispatch.matmul(a, b, f.characteristic)
            ent = {
                (int(i), int(j)): int(prod[i, j])
                for i, j in zip(*np.nonzero(prod))
            }
            return Matrix(f, self.rows, other.cols, ent)
        # dictionary product; exact over both fields
        by_row = {}
        for (i, k), v in self.entries.items():
            by_row.setdefault(k, []).append((i, v))
        acc = {}
        for (k, j), w in other.entries.items():
            for i, v in by_row.get(k, ()):
                key = (i, j)
                acc[key] = f.add(acc.get(key, f.zero()), f.mul(v, w))
        return Matrix(f, self.rows, other.cols, acc)

    def apply(self, vec: Sequence):
        """Matrix times column vector, returned as a tuple."""
        if len(vec) != self.cols:
            raise InputError("vector length %d does not match %d columns" % (len(vec), self.cols))
        f = self.field
        v = [f.coerce(x) for x in vec]
        out = [f.zero()] * self.rows
        for (i, j), a in self.entries.items():
            if v[j] != 0:
                out[i] = f.add(out[i], f.mul(a, v[j]))
        return tuple(out)

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            {(j, i): v for (i, j), v in self.entries.items()},
        )

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.rows != other.rows or self.field != other.field:
            raise InputError("hstack shape mismatch")
        ent = dict(self.entries)
        for (i, j), v in other.entries.items():
            ent[(i, j + self.cols)] = v
        return Matrix(self.field, self.rows, self.cols + other.cols, ent)

    # -- elimination ----------------------------------------------------------

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if self.field.is_rational:
            return len(_q_rref(self.to_dense_rows())[1])
        return int(_dispatch.rank(self._to_np(), self.field.characteristic))

    def kernel_basis(self):
        """Basis of the right kernel, as a list of coefficient tuples."""
        if self.cols == 0:
            return []
        if self.rows == 0:
            e = [self.field.zero()] * self.cols
            out = []
            for j in range(self.cols):
                v = list(e)
                v[j] = self.field.one()
                out.append(tuple(v))
            return out
        if self.field.is_rational:
            red, pivots = _q_rref(self.to_dense_rows())
            pivot_set = set(pivots)
            free = [c for c in range(self.cols) if c not in pivot_set]
            basis = []
            for fc in free:
                v = [Fraction(0)] * self.cols
                v[fc] = Fraction(1)
                for i, pc in enumerate(pivots):
                    v[pc] = -red[i][fc]
                basis.append(tuple(v))
            return basis
        ker = _dispatch.kernel(self._to_np(), self.field.characteristic)
        return [tuple(int(ker[i, j]) for i in range(ker.shape[0])) for j in range(ker.shape[1])]

    def solve(self, rhs: Sequence):
        """One solution of self * x = rhs, or None when inconsistent."""
        if len(rhs) != self.rows:
            raise InputError(
                "right-hand side length %d does not match %d rows" % (len(rhs), self.rows)
            )
        f = self.field
        b = [f.coerce(x) for x in rhs]
        if self.cols == 0:
            return () if all(x == 0 for x in b) else None
        if self.rows == 0:
            return tuple([f.zero()] * self.cols)
        if f.is_rational:
            aug = [row + [b[i]] for i, row in enumerate(self.to_dense_rows())]
            red, pivots = _q_rref(aug)
            if pivots and pivots[-1] == self.cols:
                return None
            x = [Fraction(0)] * self.cols
            for i, pc in enumerate(pivots):
                x[pc] = red[i][self.cols]
            return tuple(x)
        res = _dispatch.solve(self._to_np(), np.array(b, dtype=np.int64), f.characteristic)
        if res is None:
            return None
        return tuple(int(v) for v in res)

    def column_space_echelon(self) -> "Matrix":
        """Matrix whose columns are a column echelon basis of the column
        space; deterministic given the column order."""
        cols = []
        for col in self.columns():
            cols.append(list(col))
        basis = _echelonize_columns(self.field, cols)
        return Matrix.from_columns(self.field, basis) if basis else Matrix(self.field, self.rows, 0)

    # -- internals ------------------------------------------------------------

    def _require_same_shape(self, other: "Matrix"):
        if self.field != other.field or self.rows != other.rows or self.cols != other.cols:
            raise InputError("matrix shape or field mismatch")

    def _to_np(self):
        a = np.zeros((self.rows, self.cols), dtype=np.int64)
        for (i, j), v in self.entries.items():
            a[i, j] = v
        return a


def _q_rref(rows):
    """Reduced row echelon form over the rationals; mutates a copy.

    Returns (rows, pivots)."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        pr = None
        for i in range(r, m):
            if a[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            a[r], a[pr] = a[pr], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                fac = a[i][c]
                a[i] = [a[i][j] - fac * a[r][j] for j in range(n)]
        pivots.append(c)
        r += 1
    return a, pivots


def _echelonize_columns(field: FieldSpec, cols: Iterable[Sequence]):
    """Column echelon basis by sequential reduction; keeps first-seen columns."""
    cols = [[field.coerce(x) for x in col] for col in cols]
    rows = len(cols[0]) if cols else 0
    if field.characteristic and len(cols) * rows >= 2048:
        return _echelonize_columns_modp(field, cols)
    basis = []  # list of (pivot_row, column list)
    for col in cols:
        for prow, bcol in basis:
            if col[prow] != 0:
                fac = field.mul(col[prow], field.inv(bcol[prow]))
                col = [field.sub(col[i], field.mul(fac, bcol[i])) for i in range(len(col))]
        pivot = next((i for i, v in enumerate(col) if v != 0), None)
        if pivot is not None:
            basis.append((pivot, col))
    return [col for _, col in basis]


def _echelonize_columns_modp(field: FieldSpec, cols):
    """Same sequential reduction, vectorised per column; identical output."""
    p = field.characteristic
    basis = []  # list of (pivot_row, np column, inverse of pivot value)
    for col in cols:
        v = np.array(col, dtype=np.int64)
        for prow, bcol, binv in basis:
            if v[prow]:
                fac = (int(v[prow]) * binv) % p
                v = (v - fac * bcol) % p
        nz = np.nonzero(v)[0]
        if nz.size:
            pivot = int(nz[0])
            basis.append((pivot, v, field.inv(int(v[pivot]))))
    return [[int(x) for x in v] for _, v, _ in basis]


def reduce_against_echelon(field: FieldSpec, echelon: Matrix, vec: Sequence):
    """Reduce ``vec`` modulo the echelonised columns of ``echelon``."""
    col = [field.coerce(x) for x in vec]
    if field.characteristic and echelon.cols * echelon.rows >= 2048:
        p = field.characteristic
        a = echelon._to_np()
        v = np.array(col, dtype=np.int64)
        for j in range(echelon.cols):
            b = a[:, j]
            nz = np.nonzero(b)[0]
            if not nz.size:
                continue
            prow = int(nz[0])
            if v[prow]:
                fac = (int(v[prow]) * field.inv(int(b[prow]))) % p
                v = (v - fac * b) % p
        return tuple(int(x) for x in v)
    pivots = []
    for j in range(echelon.cols):
        b = [echelon.entry(i, j) for i in range(echelon.rows)]
        pivot = next((i for i, v in enumerate(b) if v != 0), None)
        if pivot is not None:
            pivots.append((pivot, b))
    for prow, b in pivots:
        if col[prow] != 0:
            fac = field.mul(col[prow], field.inv(b[prow]))
            col = [field.sub(col[i], field.mul(fac, b[i])) for i in range(len(col))]
    return tuple(col)
