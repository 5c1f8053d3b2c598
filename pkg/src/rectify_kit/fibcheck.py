"""Fibration predicates for functors of finite categories.

Two checks make up the fibration property: the linear part must hit every
degree of every target hom space (a rank condition, exact over both ground
fields), and the induced degree 0 functor must lift isomorphisms landing in
its image. Isomorphism lifting is decided exactly for functors of finite
plain categories and over F_p in small hom dimension; over the rationals the
search walks the same small coefficient lattice as the essential-surjectivity
machinery and reports ``inconclusive`` instead of guessing when that lattice
cannot be exhaustive. Verdicts are therefore tri-state: True and False are
certificates, None means a truncated search.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Optional

from .ainf import (
    AInfFunctor,
    CANDIDATE_CAP,
    LinearCategory,
    LinearFunctor,
    check_functor_relations,
    el_to_vector,
    h_functor,
    is_quasi_equivalence,
)
from .errors import InputError
from .exactlin import Matrix
from .graded import GradedLinearMap
from .relcat import RelativeFunctor, check_relative_functor


@dataclass(frozen=True)
class IsofibrationReport:
    """Outcome of the isomorphism lifting check.

    failures holds triples (source object, isomorphism description, target
    object) for isomorphisms out of an image object with no lift; the
    inconclusive list records (source object, target object, note) for pairs
    where a truncated search kept the answer open."""

    status: str  # "true" | "false" | "inconclusive"
    failures: tuple
    inconclusive: tuple

    @property
    def verdict(self) -> Optional[bool]:
        if self.status == "true":
            return True
        if self.status == "false":
            return False
        return None


@dataclass(frozen=True)
class FibrationVerdict:
    """surjectivity_failures: ((x, y), degree) pairs where the linear part
    misses part of the target hom space; isofibration_failures: unliftable
    isomorphisms of the induced degree 0 functor. verdict is None when every
    exact check passed but an isomorphism search was truncated."""

    surjectivity_failures: tuple
    isofibration_failures: tuple
    verdict: Optional[bool]
    inconclusive: tuple = ()

    @property
    def is_true(self) -> bool:
        return self.verdict is True


def _basis0(cat: LinearCategory, x, y):
    return [(0, i) for i in range(cat.homs[(x, y)].dim(0))]


def _render_el(cat: LinearCategory, pair, el: dict) -> str:
    if not el:
        return "0"
    f = cat.field
    out = ""
    for key in sorted(el):
        c = el[key]
        label = cat.basis_label(pair, key)
        negative = f.is_rational and c < 0
        mag = -c if negative else c
        term = label if mag == f.one() else "%s*%s" % (mag, label)
        if not out:
            out = "-" + term if negative else term
        else:
            out += (" - " if negative else " + ") + term
    return out


def _two_sided_inverse(cat: LinearCategory, x, z, u: dict) -> Optional[dict]:
    """Inverse of the degree 0 element u: x -> z, or None.

    Solves v.u = e_x and u.v = e_z simultaneously as one linear system in the
    coordinates of v."""
    f = cat.field
    ex, ez = cat.unit(x), cat.unit(z)
    vbasis = _basis0(cat, z, x)
    if not vbasis:
        # only v = 0 available; it inverts u exactly when both identity
        # classes vanish
        return {} if not ex and not ez else None
    cols = []
    for vk in vbasis:
        vu = cat.compose(x, z, x, {vk: f.one()}, u)
        uv = cat.compose(z, x, z, u, {vk: f.one()})
        cols.append(
            list(el_to_vector(cat.homs[(x, x)], 0, vu))
            + list(el_to_vector(cat.homs[(z, z)], 0, uv))
        )
    rhs = list(el_to_vector(cat.homs[(x, x)], 0, ex)) + list(
        el_to_vector(cat.homs[(z, z)], 0, ez)
    )
    sol = Matrix.from_columns(f, cols).solve(rhs)
    if sol is None:
        return None
    return {vbasis[j]: c for j, c in enumerate(sol) if c != 0}


def _line_lattice(f, k: int):
    """Coordinate tuples covering candidate lines in a k dimensional space,
    plus a flag telling whether the covering is exhaustive.

    One representative per line: over F_p the first nonzero coordinate is 1
    and the walk is complete for k <= 4 within the candidate cap; over the
    rationals only k <= 1 is complete, for 2 <= k <= 4 the {-1, 0, 1} lattice
    is walked and flagged as truncated."""
    if f.is_rational:
        if k <= 1:
            return ([(f.one(),)] if k == 1 else []), True
        if k > 4:
            return [], False
        combos = []
        for combo in iproduct((-1, 0, 1), repeat=k):
            nz = [c for c in combo if c]
            if not nz or nz[0] != 1:
                continue
            combos.append(tuple(f.coerce(c) for c in combo))
        return combos, False
    p = f.characteristic
    if k == 0:
        return [], True
    count = (p**k - 1) // (p - 1)
    if k > 4 or count > CANDIDATE_CAP:
        return [], False
    combos = []
    for lead in range(k):
        for tail in iproduct(range(p), repeat=k - lead - 1):
            combos.append((0,) * lead + (f.one(),) + tail)
    return combos, True


def _shift_lattice(f, k: int):
    """Coordinate tuples for kernel shifts in a lift search; zero included."""
    if k == 0:
        return [()], True
    if f.is_rational:
        if k > 4:
            return [(f.zero(),) * k], False
        combos = [
            tuple(f.coerce(c) for c in combo) for combo in iproduct((-1, 0, 1), repeat=k)
        ]
        return combos, False
    p = f.characteristic
    if p**k > CANDIDATE_CAP:
        return [(f.zero(),) * k], False
    return list(iproduct(tuple(range(p)), repeat=k)), True


def _check_linear_functor(fun: LinearFunctor) -> None:
    """Reject maps that fail the functor laws; every later certificate in
    this module leans on unit preservation and multiplicativity."""
    f = fun.source.field
    src, tgt = fun.source, fun.target
    for x in src.objects:
        if fun.apply(x, x, src.unit(x)) != tgt.unit(fun.object_map[x]):
            raise InputError("not a functor: unit of %s is not preserved" % x)
    for x in src.objects:
        for y in src.objects:
            for z in src.objects:
                tx, ty, tz = (fun.object_map[o] for o in (x, y, z))
                for gk in src.basis(y, z):
                    for fk in src.basis(x, y):
                        g_el = {gk: f.one()}
                        f_el = {fk: f.one()}
                        lhs = fun.apply(x, z, src.compose(x, y, z, g_el, f_el))
                        rhs = tgt.compose(tx, ty, tz, fun.apply(y, z, g_el), fun.apply(x, y, f_el))
                        if lhs != rhs:
                            raise InputError(
                                "not a functor: composition fails on (%s, %s, %s)" % (x, y, z)
                            )


def _bijective_on_square(fun: LinearFunctor, x, zt) -> bool:
    """Certificate that every isomorphism out of the image of x lifts
    through zt, with no candidate enumeration.

    When the functor is bijective on the four degree 0 hom spaces linking x
    and zt to their images, two-sided inverses transport backwards: the
    unique preimages w of an isomorphism and v of its inverse compose to
    elements that hit the identity classes, and injectivity on the
    endomorphism spaces forces them to be the identity classes."""
    a = fun.object_map[x]
    z = fun.object_map[zt]
    for (sx, sy), (tx, ty) in (
        ((x, zt), (a, z)),
        ((zt, x), (z, a)),
        ((x, x), (a, a)),
        ((zt, zt), (z, z)),
    ):
        k = fun.source.homs[(sx, sy)].dim(0)
        if k != fun.target.homs[(tx, ty)].dim(0):
            return False
        if k == 0:
            continue
        gm = fun.hom_maps.get((sx, sy))
        if gm is None or gm.block(0).rank() != k:
            return False
    return True


def _iso_lines(cat: LinearCategory, a, z):
    """All isomorphisms a -> z up to scalar, with a completeness flag.

    Scalar multiples of an isomorphism lift together, so one representative
    per line suffices for the lifting question."""
    f = cat.field
    ex, ez = cat.unit(a), cat.unit(z)
    if not ex and not ez:
        return [{}], True  # both identity classes vanish, the zero map inverts itself
    if bool(ex) != bool(ez):
        return [], True
    ubasis = _basis0(cat, a, z)
    vbasis = _basis0(cat, z, a)
    if not ubasis or not vbasis:
        return [], True
    # sound emptiness test before any lattice walk: each identity class must
    # lie in the span of the composites through the other object
    for xx, uv_first in ((a, False), (z, True)):
        span = []
        for vk in vbasis:
            for uk in ubasis:
                if uv_first:
                    comp = cat.compose(z, a, z, {uk: f.one()}, {vk: f.one()})
                else:
                    comp = cat.compose(a, z, a, {vk: f.one()}, {uk: f.one()})
                span.append(list(el_to_vector(cat.homs[(xx, xx)], 0, comp)))
        rhs = list(el_to_vector(cat.homs[(xx, xx)], 0, cat.unit(xx)))
        if Matrix.from_columns(f, span).solve(rhs) is None:
            return [], True
    combos, complete = _line_lattice(f, len(ubasis))
    isos = []
    for combo in combos:
        u = {ubasis[i]: c for i, c in enumerate(combo) if c != 0}
        if u and _two_sided_inverse(cat, a, z, u) is not None:
            isos.append(u)
    return isos, complete


def _lift_iso(fun: LinearFunctor, x, z, u: dict, zfibre):
    """Search the fibre over z for an isomorphism from x mapping onto u.

    Returns (lifted, limited); limited means some affine solution space was
    sampled rather than exhausted, so a negative answer is not a certificate."""
    f = fun.source.field
    a = fun.object_map[x]
    tspace = fun.target.homs[(a, z)]
    rhs = list(el_to_vector(tspace, 0, u))
    limited = False
    for zt in zfibre:
        k = fun.source.homs[(x, zt)].dim(0)
        if k == 0:
            if not any(c != 0 for c in rhs):
                if _two_sided_inverse(fun.source, x, zt, {}) is not None:
                    return True, limited
            continue
        gm = fun.hom_maps.get((x, zt))
        block = gm.block(0) if gm is not None else Matrix(f, tspace.dim(0), k, {})
        w0 = block.solve(rhs)
        if w0 is None:
            continue
        kern = block.kernel_basis()
        combos, complete = _shift_lattice(f, len(kern))
        if not complete:
            limited = True
        for combo in combos:
            coords = list(w0)
            for j, c in enumerate(combo):
                if c == 0:
                    continue
                kv = kern[j]
                for i in range(k):
                    coords[i] = f.add(coords[i], f.mul(c, kv[i]))
            w = {(0, i): c for i, c in enumerate(coords) if c != 0}
            if _two_sided_inverse(fun.source, x, zt, w) is not None:
                return True, limited
    return False, limited


def _linear_isofibration(fun: LinearFunctor) -> IsofibrationReport:
    _check_linear_functor(fun)
    src, tgt = fun.source, fun.target
    fibres: dict = {}
    for xo in src.objects:
        fibres.setdefault(fun.object_map[xo], []).append(xo)
    line_cache: dict = {}
    failures = []
    fuzzy = []
    for x in src.objects:
        a = fun.object_map[x]
        for z in tgt.objects:
            if any(_bijective_on_square(fun, x, zt) for zt in fibres.get(z, ())):
                continue
            if (a, z) not in line_cache:
                line_cache[(a, z)] = _iso_lines(tgt, a, z)
            isos, complete = line_cache[(a, z)]
            if not complete:
                fuzzy.append(
                    (x, z, "isomorphism walk truncated in dimension %d" % tgt.homs[(a, z)].dim(0))
                )
            for u in isos:
                lifted, limited = _lift_iso(fun, x, z, u, fibres.get(z, ()))
                if lifted:
                    continue
                desc = _render_el(tgt, (a, z), u)
                if limited:
                    fuzzy.append((x, z, "lift search truncated for %s" % desc))
                else:
                    failures.append((x, desc, z))
    if failures:
        status = "false"
    elif fuzzy:
        status = "inconclusive"
    else:
        status = "true"
    return IsofibrationReport(status, tuple(failures), tuple(fuzzy))


def _finite_isofibration(fun: RelativeFunctor) -> IsofibrationReport:
    probs = [fl for fl in check_relative_functor(fun).failures if fl[0] != "weak-equivalence"]
    if probs:
        raise InputError("not a functor: first failure %s" % (probs[0],))
    src, tgt = fun.source.cat, fun.target.cat
    src_isos = src.isomorphisms()
    tgt_isos = sorted(tgt.isomorphisms())
    failures = []
    for x in src.objects:
        fx = fun.object_map[x]
        for phi in tgt_isos:
            if tgt.src(phi) != fx:
                continue
            lifted = any(
                fun.morphism_map[m] == phi and m in src_isos
                for m in src.morphisms
                if src.src(m) == x
            )
            if not lifted:
                failures.append((x, phi, tgt.tgt(phi)))
    return IsofibrationReport("false" if failures else "true", tuple(failures), ())


def is_isofibration(fun) -> IsofibrationReport:
    """Isomorphism lifting property of a functor.

    Accepts a functor of finite plain categories (exact answer), a functor of
    linear categories (inspects the degree 0 part), or a componentwise functor
    (inspects the induced degree 0 cohomology functor)."""
    if isinstance(fun, RelativeFunctor):
        return _finite_isofibration(fun)
    if isinstance(fun, LinearFunctor):
        return _linear_isofibration(fun)
    if isinstance(fun, AInfFunctor):
        return _linear_isofibration(h0_functor(fun))
    raise InputError("expected a functor between finite categories or linear categories")


def h0_functor(fun: AInfFunctor) -> LinearFunctor:
    """Degree 0 part of the induced cohomology functor."""
    full = h_functor(fun)
    h0s = full.source.restrict_degree_zero()
    h0s.cohomologies = full.source.cohomologies
    h0t = full.target.restrict_degree_zero()
    h0t.cohomologies = full.target.cohomologies
    maps = {}
    for pair, gm in full.hom_maps.items():
        s0 = h0s.homs[pair]
        if s0.dim(0) == 0:
            continue
        t0 = h0t.homs[(fun.object_map[pair[0]], fun.object_map[pair[1]])]
        maps[pair] = GradedLinearMap(s0, t0, 0, {0: gm.block(0)})
    return LinearFunctor(h0s, h0t, dict(fun.object_map), maps)


def is_fibration(fun: AInfFunctor) -> FibrationVerdict:
    """Degreewise surjectivity of the linear part plus isomorphism lifting
    for the induced degree 0 functor. Functors that fail their defining
    relations are rejected outright."""
    n_max = min(fun.source.arity_bound, fun.target.arity_bound)
    rep = check_functor_relations(fun, n_max)
    if rep.failures:
        bad = rep.failures[0]
        raise InputError(
            "functor relations fail at arity %d on chain %s; rejected" % (bad.arity, (bad.chain,))
        )
    surj = []
    for x in fun.source.objects:
        for y in fun.source.objects:
            tspace = fun.target.hom(fun.object_map[x], fun.object_map[y]).space
            glm = fun.hom_linear_map(x, y)
            for d in sorted(tspace.degrees()):
                need = tspace.dim(d)
                if need and glm.block(d).rank() < need:
                    surj.append(((x, y), d))
    iso = _linear_isofibration(h0_functor(fun))
    if surj or iso.status == "false":
        verdict: Optional[bool] = False
    elif iso.status == "inconclusive":
        verdict = None
    else:
        verdict = True
    return FibrationVerdict(tuple(surj), iso.failures, verdict, iso.inconclusive)


def is_acyclic_fibration(fun: AInfFunctor) -> bool:
    """True exactly when both certificates land: a True fibration verdict and
    a True quasi-equivalence verdict. A truncated search on either side yields
    False, never a guess."""
    fib = is_fibration(fun)
    if fib.verdict is not True:
        return False
    return is_quasi_equivalence(fun).is_true
