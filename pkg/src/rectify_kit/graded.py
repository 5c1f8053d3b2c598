"""Graded vector spaces, degree-shifted linear maps, cochain complexes.

Cohomology representatives are kernel basis vectors reduced against a column
echelon form of the image, so the chosen basis is deterministic given the
basis order of the underlying complex. All reports name basis labels rather
than raw indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import ConsistencyError, InputError
from .exactlin import FieldSpec, Matrix
from .exactlin.matrix import reduce_against_echelon


class GradedVectorSpace:
    """Finitely supported graded space with named basis labels per degree."""

    __slots__ = ("field", "labels")

    def __init__(self, field: FieldSpec, labels: Mapping[int, Sequence[str]]):
        clean = {}
        for deg, names in labels.items():
            names = tuple(names)
            if not names:
                continue
            if len(set(names)) != len(names):
                raise InputError("duplicate basis labels in degree %d" % deg)
            clean[int(deg)] = names
        self.field = field
        self.labels = clean

    def dim(self, deg: int) -> int:
        return len(self.labels.get(deg, ()))

    @property
    def support(self):
        return {d: len(n) for d, n in self.labels.items()}

    def degrees(self):
        return sorted(self.labels)

    def total_dim(self) -> int:
        return sum(len(n) for n in self.labels.values())

    def basis_label(self, deg: int, i: int) -> str:
        return self.labels[deg][i]

    def zero_vector(self, deg: int):
        return tuple(self.field.zero() for _ in range(self.dim(deg)))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedVectorSpace)
            and self.field == other.field
            and self.labels == other.labels
        )

    def __repr__(self) -> str:
        return "GradedVectorSpace(%s)" % (
            ", ".join("%d:%d" % (d, self.dim(d)) for d in self.degrees()) or "0",
        )


class GradedLinearMap:
    """Degree-homogeneous linear map; block at degree d goes to degree d+shift."""

    __slots__ = ("source", "target", "shift", "blocks")

    def __init__(
        self,
        source: GradedVectorSpace,
        target: GradedVectorSpace,
        shift: int,
        blocks: Mapping[int, Matrix],
    ):
        if source.field != target.field:
            raise InputError("graded map between spaces over different fields")
        clean = {}
        for deg, mat in blocks.items():
            deg = int(deg)
            want_rows = target.dim(deg + shift)
            want_cols = source.dim(deg)
            if (mat.rows, mat.cols) != (want_rows, want_cols):
                raise InputError(
                    "block at degree %d is %dx%d, expected %dx%d"
                    % (deg, mat.rows, mat.cols, want_rows, want_cols)
                )
            if mat.field != source.field:
                raise InputError("block at degree %d over the wrong field" % deg)
            if not mat.is_zero():
                clean[deg] = mat
        self.source = source
        self.target = target
        self.shift = shift
        self.blocks = clean

    @classmethod
    def zero(cls, source, target, shift: int) -> "GradedLinearMap":
        return cls(source, target, shift, {})

    @classmethod
    def identity(cls, space: GradedVectorSpace) -> "GradedLinearMap":
        return cls(
            space,
            space,
            0,
            {d: Matrix.identity(space.field, space.dim(d)) for d in space.degrees()},
        )

    def block(self, deg: int) -> Matrix:
        got = self.blocks.get(deg)
        if got is not None:
            return got
        return Matrix.zero(
            self.source.field, self.target.dim(deg + self.shift), self.source.dim(deg)
        )

    def apply(self, deg: int, vec: Sequence):
        return self.block(deg).apply(vec)

    def compose(self, other: "GradedLinearMap") -> "GradedLinearMap":
        """self after other."""
        if other.target != self.source:
            raise InputError("composition of graded maps with mismatched middle space")
        shift = self.shift + other.shift
        blocks = {}
        for deg in other.source.degrees():
            blocks[deg] = self.block(deg + other.shift).mul(other.block(deg))
        return GradedLinearMap(other.source, self.target, shift, blocks)

    def add(self, other: "GradedLinearMap") -> "GradedLinearMap":
        if (self.source, self.target, self.shift) != (other.source, other.target, other.shift):
            raise InputError("sum of graded maps with mismatched shape")
        blocks = {}
        for deg in set(self.blocks) | set(other.blocks):
            blocks[deg] = self.block(deg).add(other.block(deg))
        return GradedLinearMap(self.source, self.target, self.shift, blocks)

    def scale(self, scalar) -> "GradedLinearMap":
        return GradedLinearMap(
            self.source,
            self.target,
            self.shift,
            {d: m.scale(scalar) for d, m in self.blocks.items()},
        )

    def is_zero(self) -> bool:
        return not self.blocks

    def is_iso(self) -> bool:
        """Square and full rank in every degree where either side is nonzero."""
        degrees = set(self.source.degrees()) | {
            d - self.shift for d in self.target.degrees()
        }
        for deg in degrees:
            m = self.block(deg)
            if m.rows != m.cols or m.rank() != m.rows:
                return False
        return True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedLinearMap)
            and self.source == other.source
            and self.target == other.target
            and self.shift == other.shift
            and self.blocks == other.blocks
        )


@dataclass(frozen=True)
class DifferentialFailure:
    degree: int
    source_label: str
    target_label: str


@dataclass(frozen=True)
class DifferentialReport:
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


class CochainComplex:
    """A graded space with a degree +1 differential and an explicit window.

    Data outside [window_min, window_max] is rejected at construction, never
    silently truncated.
    """

    __slots__ = ("space", "d", "window")

    def __init__(self, space: GradedVectorSpace, d: GradedLinearMap, window):
        lo, hi = int(window[0]), int(window[1])
        if lo > hi:
            raise InputError("empty degree window [%d, %d]" % (lo, hi))
        for deg in space.degrees():
            if not (lo <= deg <= hi):
                raise InputError(
                    "basis in degree %d lies outside the window [%d, %d]" % (deg, lo, hi)
                )
        if d.shift != 1:
            raise InputError("differential must have degree +1, got %d" % d.shift)
        if d.source != space or d.target != space:
            raise InputError("differential endpoints must be the complex's own space")
        self.space = space
        self.d = d
        self.window = (lo, hi)

    @classmethod
    def with_zero_differential(cls, space: GradedVectorSpace, window) -> "CochainComplex":
        return cls(space, GradedLinearMap.zero(space, space, 1), window)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CochainComplex)
            and self.space == other.space
            and self.d == other.d
            and self.window == other.window
        )


def verify_differential(c: CochainComplex) -> DifferentialReport:
    """List every degree where d∘d has a nonzero entry, by basis labels."""
    failures = []
    for deg in c.space.degrees():
        sq = c.d.block(deg + 1).mul(c.d.block(deg))
        for (i, j), _ in sq.items():
            failures.append(
                DifferentialFailure(
                    degree=deg,
                    source_label=c.space.basis_label(deg, j),
                    target_label=c.space.basis_label(deg + 2, i),
                )
            )
    return DifferentialReport(tuple(failures))


class Cohomology:
    """Cohomology of a complex with chosen representative cocycles.

    ``representatives[deg]`` lists coefficient vectors in the complex's own
    basis at that degree; their classes form the chosen basis of H^deg.
    """

    __slots__ = ("complex", "space", "representatives", "_image_echelon")

    def __init__(self, complex_, space, representatives, image_echelon):
        self.complex = complex_
        self.space = space
        self.representatives = representatives
        self._image_echelon = image_echelon

    def dim(self, deg: int) -> int:
        return self.space.dim(deg)

    def class_coordinates(self, deg: int, vec: Sequence):
        """Coordinates of the class of a cocycle in the chosen basis.

        Returns None when the vector is not a cocycle-plus-boundary
        combination of the chosen data (i.e. not in ker d at this degree)."""
        field = self.complex.space.field
        n = self.complex.space.dim(deg)
        if len(vec) != n:
            raise InputError("vector length %d does not match degree %d" % (len(vec), deg))
        reps = self.representatives.get(deg, ())
        ech = self._image_echelon.get(deg)
        cols = [list(r) for r in reps]
        if ech is not None:
            cols.extend(ech.columns())
        if not cols:
            return () if all(field.coerce(x) == 0 for x in vec) else None
        m = Matrix.from_columns(field, cols)
        sol = m.solve(list(vec))
        if sol is None:
            return None
        return tuple(sol[: len(reps)])

    def is_boundary(self, deg: int, vec: Sequence) -> bool:
        coords = self.class_coordinates(deg, vec)
        return coords is not None and all(x == 0 for x in coords)


def cohomology(c: CochainComplex) -> Cohomology:
    report = verify_differential(c)
    if not report.ok:
        first = report.failures[0]
        err = InputError(
            "differential does not square to zero: degree %d sends %s into %s"
            % (first.degree, first.source_label, first.target_label)
        )
        err.report = report
        raise err
    field = c.space.field
    labels = {}
    reps = {}
    echelons = {}
    for deg in c.space.degrees():
        ker = c.d.block(deg).kernel_basis()
        image = c.d.block(deg - 1).column_space_echelon()
        if image.cols:
            echelons[deg] = image
        chosen = []
        # working echelon over image columns tracks independence of classes
        working = image.columns()
        pivots = [
            (next(i for i, v in enumerate(col) if v != 0), list(col)) for col in working
        ]
        for kv in ker:
            red = reduce_against_echelon(field, image, kv) if image.cols else tuple(
                field.coerce(x) for x in kv
            )
            probe = list(red)
            for prow, bcol in pivots:
                if probe[prow] != 0:
                    fac = field.mul(probe[prow], field.inv(bcol[prow]))
                    probe = [
                        field.sub(probe[i], field.mul(fac, bcol[i]))
                        for i in range(len(probe))
                    ]
            lead = next((i for i, v in enumerate(probe) if v != 0), None)
            if lead is None:
                continue
            pivots.append((lead, probe))
            chosen.append(red)
        expected = len(ker) - c.d.block(deg - 1).rank()
        if len(chosen) != expected:
            raise ConsistencyError(
                "cohomology dimension bookkeeping failed in degree %d" % deg
            )
        if chosen:
            names = []
            seen = {}
            for red in chosen:
                lead = next(i for i, v in enumerate(red) if v != 0)
                base = "[%s]" % c.space.basis_label(deg, lead)
                count = seen.get(base, 0) + 1
                seen[base] = count
                names.append(base if count == 1 else "%s#%d" % (base, count))
            labels[deg] = tuple(names)
            reps[deg] = tuple(tuple(r) for r in chosen)
    return Cohomology(c, GradedVectorSpace(field, labels), reps, echelons)


class ChainMap:
    """Degree 0 map of complexes; commutation with d is checked on demand."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: CochainComplex, target: CochainComplex, blocks):
        if isinstance(blocks, GradedLinearMap):
            if blocks.shift != 0:
                raise InputError("chain map must have degree 0")
            if blocks.source != source.space or blocks.target != target.space:
                raise InputError("chain map endpoints do not match the complexes")
            self.map = blocks
        else:
            self.map = GradedLinearMap(source.space, target.space, 0, blocks)
        self.source = source
        self.target = target

    def first_noncommuting_degree(self):
        """Smallest degree where f∘d differs from d∘f, or None."""
        degrees = sorted(set(self.source.space.degrees()))
        for deg in degrees:
            lhs = self.map.block(deg + 1).mul(self.source.d.block(deg))
            rhs = self.target.d.block(deg).mul(self.map.block(deg))
            if lhs != rhs:
                return deg
        return None

    def compose(self, other: "ChainMap") -> "ChainMap":
        if other.target != self.source:
            raise InputError("chain map composition endpoints do not match")
        return ChainMap(other.source, self.target, self.map.compose(other.map))


def induced_map_on_cohomology(
    f: ChainMap, source_cohomology=None, target_cohomology=None
) -> GradedLinearMap:
    bad = f.first_noncommuting_degree()
    if bad is not None:
        raise InputError(
            "not a chain map: composing with the differentials disagrees first at degree %d" % bad
        )
    hs = source_cohomology if source_cohomology is not None else cohomology(f.source)
    ht = target_cohomology if target_cohomology is not None else cohomology(f.target)
    blocks = {}
    for deg in hs.space.degrees():
        cols = []
        for rep in hs.representatives[deg]:
            image_vec = f.map.apply(deg, rep)
            coords = ht.class_coordinates(deg, image_vec)
            if coords is None:
                raise ConsistencyError(
                    "image of a cocycle failed to be a cocycle in degree %d" % deg
                )
            cols.append(list(coords))
        blocks[deg] = Matrix(
            f.source.space.field,
            ht.dim(deg),
            len(cols),
            {(i, j): v for j, col in enumerate(cols) for i, v in enumerate(col)},
        )
    return GradedLinearMap(hs.space, ht.space, 0, blocks)


def is_quasi_iso(f: ChainMap) -> bool:
    induced = induced_map_on_cohomology(f)
    return induced.is_iso()
