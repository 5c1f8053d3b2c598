from __future__ import annotations

import random

import pytest

from rectify_kit.ainf import (
    AInfCategory,
    AInfFunctor,
    LinearFunctor,
    category_from_tables,
    check_functor_relations,
    h0_category,
)
from rectify_kit.errors import InputError
from rectify_kit.exactlin import GF, QQ, Matrix
from rectify_kit.fibcheck import (
    FibrationVerdict,
    h0_functor,
    is_acyclic_fibration,
    is_fibration,
    is_isofibration,
)
from rectify_kit.graded import CochainComplex, GradedLinearMap
from rectify_kit.relcat import FiniteCategory, FiniteRelativeCategory, RelativeFunctor
from rectify_kit.samples import (
    a2_quiver_category,
    contractible_extension,
    m3_example,
    point_category,
    random_dg_category,
    retract_category,
)

FIELDS = [QQ, GF(2), GF(5)]


def key_of(cat, pair, label):
    for key in cat.hom_basis(*pair):
        if cat.basis_label(pair, key) == label:
            return key
    raise AssertionError(label)


def line_target(field):
    """One object, hom = unit line plus a degree 1 line, zero differential."""
    return category_from_tables(
        field,
        ["*"],
        {("*", "*"): {0: ["e"], 1: ["y"]}},
        {},
        [],
        {"*": "e"},
    )


def dual_numbers(field):
    return category_from_tables(
        field,
        ["*"],
        {("*", "*"): {0: ["e", "t"]}},
        {},
        [(2, ("*", "*", "*"), ["t", "t"], [])],
        {"*": "e"},
    )


def wide_square_zero(field):
    """Three degree 0 lines, all non-unit products zero."""
    return category_from_tables(
        field,
        ["*"],
        {("*", "*"): {0: ["e", "t", "u"]}},
        {},
        [],
        {"*": "e"},
    )


def collapse_onto_point(cat, field):
    """Send every object to the point and every non-unit generator to the
    unit; only valid when that assignment is multiplicative."""
    pt = point_category(field)
    ekey = key_of(pt, ("*", "*"), "e")
    comps = {}
    for x in cat.objects:
        for y in cat.objects:
            entries = {}
            for key in cat.hom_basis(x, y):
                if key[0] == 0 and not cat.is_unit((x, y), key):
                    entries[(key,)] = {ekey: 1}
            if entries:
                comps[(1, (x, y))] = entries
    return AInfFunctor(cat, pt, {x: "*" for x in cat.objects}, comps)


def diagonal_transport(cat: AInfCategory, rng: random.Random) -> AInfFunctor:
    """Rescale every non-unit basis vector and transport the whole structure,
    giving an isomorphism onto the transported category."""
    f = cat.field
    scal = {}
    for pair, cx in cat.homs.items():
        sp = cx.space
        for d in sp.degrees():
            for i in range(sp.dim(d)):
                key = (d, i)
                if pair[0] == pair[1] and key == cat.units[pair[0]]:
                    scal[(pair, key)] = f.one()
                elif f.is_rational:
                    scal[(pair, key)] = f.coerce(rng.choice([1, -1, 2, 3]))
                else:
                    scal[(pair, key)] = f.coerce(rng.randrange(1, f.characteristic))
    homs2 = {}
    for pair, cx in cat.homs.items():
        sp = cx.space
        blocks = {}
        for d in sp.degrees():
            blk = cx.d.block(d)
            ent = {}
            for i in range(blk.rows):
                for j in range(blk.cols):
                    v = blk.entry(i, j)
                    if v != 0:
                        ent[(i, j)] = f.mul(
                            v,
                            f.mul(scal[(pair, (d + 1, i))], f.inv(scal[(pair, (d, j))])),
                        )
            if ent:
                blocks[d] = Matrix(f, blk.rows, blk.cols, ent)
        homs2[pair] = CochainComplex(sp, GradedLinearMap(sp, sp, 1, blocks), cx.window)
    ops2 = {}
    for (n, chain), table in cat.ops.items():
        t2 = {}
        for btuple, el in table.items():
            denom = f.one()
            for j, key in enumerate(btuple):
                pair = (chain[n - j - 1], chain[n - j])
                denom = f.mul(denom, scal[(pair, key)])
            out_pair = (chain[0], chain[n])
            t2[btuple] = {
                key: f.mul(v, f.mul(scal[(out_pair, key)], f.inv(denom)))
                for key, v in el.items()
            }
        ops2[(n, chain)] = t2
    units = {x: cat.basis_label((x, x), cat.units[x]) for x in cat.objects}
    cat2 = AInfCategory(
        f, cat.objects, homs2, ops2, units, arity_bound=cat.arity_bound, window=cat.window
    )
    comps = {}
    for x in cat.objects:
        for y in cat.objects:
            entries = {}
            for key in cat.hom_basis(x, y):
                if not cat.is_unit((x, y), key):
                    entries[(key,)] = {key: scal[((x, y), key)]}
            if entries:
                comps[(1, (x, y))] = entries
    return AInfFunctor(cat, cat2, {x: x for x in cat.objects}, comps)


def walking_iso_relative():
    cat = FiniteCategory(
        ["a", "b"],
        {"ida": ("a", "a"), "idb": ("b", "b"), "f": ("a", "b"), "g": ("b", "a")},
        {"a": "ida", "b": "idb"},
        {
            ("ida", "ida"): "ida",
            ("idb", "idb"): "idb",
            ("f", "ida"): "f",
            ("idb", "f"): "f",
            ("g", "idb"): "g",
            ("ida", "g"): "g",
            ("g", "f"): "ida",
            ("f", "g"): "idb",
        },
    )
    return FiniteRelativeCategory(cat, {"ida", "idb"})


def terminal_finite():
    cat = FiniteCategory(["*"], {"id*": ("*", "*")}, {"*": "id*"}, {("id*", "id*"): "id*"})
    return FiniteRelativeCategory(cat, {"id*"})


def assert_consistent(v: FibrationVerdict):
    if v.verdict is True:
        assert not v.surjectivity_failures
        assert not v.isofibration_failures
        assert not v.inconclusive
    elif v.verdict is False:
        assert v.surjectivity_failures or v.isofibration_failures
    else:
        assert not v.surjectivity_failures
        assert not v.isofibration_failures
        assert v.inconclusive


# ---------------------------------------------------------------------------
# identity functors


@pytest.mark.parametrize("field", FIELDS)
@pytest.mark.parametrize(
    "make",
    [point_category, a2_quiver_category, contractible_extension, retract_category, m3_example],
)
def test_identity_is_fibration(field, make):
    v = is_fibration(AInfFunctor.identity(make(field)))
    assert v.verdict is True
    assert v.surjectivity_failures == ()
    assert v.isofibration_failures == ()
    assert v.inconclusive == ()


def test_identity_is_fibration_on_random_categories():
    rng = random.Random(61550)
    for field in (QQ, GF(3)):
        for _ in range(4):
            cat = random_dg_category(field, rng)
            v = is_fibration(AInfFunctor.identity(cat))
            assert v.verdict is True
            assert_consistent(v)


def test_identity_is_acyclic_fibration():
    for field in (QQ, GF(5)):
        assert is_acyclic_fibration(AInfFunctor.identity(retract_category(field)))


# ---------------------------------------------------------------------------
# surjectivity of the linear part


@pytest.mark.parametrize("field", FIELDS)
def test_point_into_line_fails_surjectivity_in_degree_one(field):
    inc = AInfFunctor(point_category(field), line_target(field), {"*": "*"}, {})
    v = is_fibration(inc)
    assert v.verdict is False
    assert v.surjectivity_failures == ((("*", "*"), 1),)
    assert v.isofibration_failures == ()
    assert not is_acyclic_fibration(inc)


@pytest.mark.parametrize("field", FIELDS)
def test_a2_collapse_misses_the_reverse_hom(field):
    # hom(1, 0) is zero upstairs but one-dimensional downstairs
    q = collapse_onto_point(a2_quiver_category(field), field)
    v = is_fibration(q)
    assert v.verdict is False
    assert v.surjectivity_failures == ((("1", "0"), 0),)


# ---------------------------------------------------------------------------
# fibrations that are / are not acyclic


@pytest.mark.parametrize("field", FIELDS)
def test_contractible_quotient_is_acyclic_fibration(field):
    q = AInfFunctor(contractible_extension(field), point_category(field), {"*": "*"}, {})
    v = is_fibration(q)
    assert v.verdict is True
    assert_consistent(v)
    assert is_acyclic_fibration(q)


@pytest.mark.parametrize("field", FIELDS)
def test_retract_collapse_is_fibration_but_not_acyclic(field):
    q = collapse_onto_point(retract_category(field), field)
    v = is_fibration(q)
    assert v.verdict is True
    assert_consistent(v)
    # hom(Y, Y) drops from two dimensions to one, so no quasi-equivalence
    assert not is_acyclic_fibration(q)


# ---------------------------------------------------------------------------
# isomorphism lifting, linear flavor


def test_dual_numbers_inclusion_rejects_unliftable_isos_exact():
    inc = AInfFunctor(point_category(GF(5)), dual_numbers(GF(5)), {"*": "*"}, {})
    rep = is_isofibration(inc)
    assert rep.status == "false"
    assert rep.inconclusive == ()
    got = {desc for (_, desc, _) in rep.failures}
    assert got == {"[e] + [t]", "[e] + 2*[t]", "[e] + 3*[t]", "[e] + 4*[t]"}


def test_dual_numbers_inclusion_rejects_unliftable_isos_rational():
    inc = AInfFunctor(point_category(QQ), dual_numbers(QQ), {"*": "*"}, {})
    rep = is_isofibration(inc)
    # the lattice walk cannot be complete in dimension 2 over the rationals,
    # but any witnessed unliftable isomorphism already decides the answer
    assert rep.status == "false"
    got = {desc for (_, desc, _) in rep.failures}
    assert got == {"[e] + [t]", "[e] - [t]"}
    v = is_fibration(inc)
    assert v.verdict is False
    assert v.surjectivity_failures == ((("*", "*"), 0),)


def test_wide_quotient_is_inconclusive_over_the_rationals():
    wd = wide_square_zero(QQ)
    dn = dual_numbers(QQ)
    tkey = key_of(dn, ("*", "*"), "t")
    comps = {
        (1, ("*", "*")): {
            (key_of(wd, ("*", "*"), "t"),): {tkey: 1},
            (key_of(wd, ("*", "*"), "u"),): {tkey: 1},
        }
    }
    q = AInfFunctor(wd, dn, {"*": "*"}, comps)
    rep = is_isofibration(q)
    assert rep.status == "inconclusive"
    assert rep.failures == ()
    assert rep.inconclusive == (("*", "*", "isomorphism walk truncated in dimension 2"),)
    v = is_fibration(q)
    assert v.verdict is None
    assert_consistent(v)
    assert not is_acyclic_fibration(q)


def test_wide_quotient_is_decided_over_a_prime_field():
    wd = wide_square_zero(GF(5))
    dn = dual_numbers(GF(5))
    tkey = key_of(dn, ("*", "*"), "t")
    comps = {
        (1, ("*", "*")): {
            (key_of(wd, ("*", "*"), "t"),): {tkey: 1},
            (key_of(wd, ("*", "*"), "u"),): {tkey: 1},
        }
    }
    q = AInfFunctor(wd, dn, {"*": "*"}, comps)
    rep = is_isofibration(q)
    assert rep.status == "true"
    v = is_fibration(q)
    assert v.verdict is True
    assert_consistent(v)


# ---------------------------------------------------------------------------
# isomorphism lifting, finite flavor


def test_finite_identity_is_isofibration():
    w = walking_iso_relative()
    ident = RelativeFunctor(w, w, {"a": "a", "b": "b"}, {m: m for m in w.cat.morphisms})
    rep = is_isofibration(ident)
    assert rep.status == "true"
    assert rep.failures == ()


def test_finite_inclusion_missing_iso_target_fails():
    w = walking_iso_relative()
    pick_a = RelativeFunctor(terminal_finite(), w, {"*": "a"}, {"id*": "ida"})
    rep = is_isofibration(pick_a)
    assert rep.status == "false"
    # the isomorphism onto the unreached object is reported with its target
    assert rep.failures == (("*", "f", "b"),)


def test_finite_surjective_full_collapse_is_isofibration():
    w = walking_iso_relative()
    collapse = RelativeFunctor(
        w, terminal_finite(), {"a": "*", "b": "*"}, {m: "id*" for m in w.cat.morphisms}
    )
    rep = is_isofibration(collapse)
    assert rep.status == "true"


def test_finite_isofibration_rejects_non_functors():
    def monoid(square):
        cat = FiniteCategory(
            ["*"],
            {"id*": ("*", "*"), "t": ("*", "*")},
            {"*": "id*"},
            {("id*", "id*"): "id*", ("id*", "t"): "t", ("t", "id*"): "t", ("t", "t"): square},
        )
        return FiniteRelativeCategory(cat, {"id*"})

    # t has order two upstairs but is idempotent downstairs
    broken = RelativeFunctor(
        monoid("id*"), monoid("t"), {"*": "*"}, {"id*": "id*", "t": "t"}
    )
    with pytest.raises(InputError):
        is_isofibration(broken)


# ---------------------------------------------------------------------------
# input validation


@pytest.mark.parametrize("field", [QQ, GF(5)])
def test_fibration_rejects_functors_failing_their_relations(field):
    cat = m3_example(field)
    xkey = key_of(cat, ("*", "*"), "x")
    # x maps to x but y maps to zero, which breaks the arity 3 relation
    bad = AInfFunctor(cat, cat, {"*": "*"}, {(1, ("*", "*")): {(xkey,): {xkey: 1}}})
    rep = check_functor_relations(bad, 3)
    assert rep.failures
    with pytest.raises(InputError):
        is_fibration(bad)


def test_isofibration_rejects_unknown_input():
    with pytest.raises(InputError):
        is_isofibration(42)


def test_linear_isofibration_checks_the_functor_laws():
    h0 = h0_category(point_category(QQ))
    sp = h0.homs[("*", "*")]
    doubling = GradedLinearMap(sp, sp, 0, {0: Matrix(QQ, 1, 1, {(0, 0): 2})})
    fake = LinearFunctor(h0, h0, {"*": "*"}, {("*", "*"): doubling})
    with pytest.raises(InputError):
        is_isofibration(fake)


# ---------------------------------------------------------------------------
# closure and transport invariants


@pytest.mark.parametrize("field", [QQ, GF(5)])
def test_fibrations_closed_under_composition(field):
    ce = contractible_extension(field)
    iso = diagonal_transport(ce, random.Random(field.characteristic + 11))
    quot = AInfFunctor(iso.target, point_category(field), {"*": "*"}, {})
    assert is_fibration(iso).verdict is True
    assert is_fibration(quot).verdict is True
    comp = quot.compose(iso)
    v = is_fibration(comp)
    assert v.verdict is True
    assert_consistent(v)
    assert is_acyclic_fibration(comp)

    rc = retract_category(field)
    collapse = collapse_onto_point(rc, field)
    comp2 = collapse.compose(AInfFunctor.identity(rc))
    assert is_fibration(collapse).verdict is True
    assert is_fibration(comp2).verdict is True
    assert not is_acyclic_fibration(comp2)


def test_transported_structure_isomorphism_is_acyclic_fibration():
    rng = random.Random(90125)
    for field in (QQ, GF(3), GF(7)):
        for _ in range(3):
            cat = random_dg_category(field, rng)
            iso = diagonal_transport(cat, rng)
            rep = check_functor_relations(iso, min(iso.source.arity_bound, 4))
            assert rep.failures == ()
            v = is_fibration(iso)
            assert v.verdict is True
            assert_consistent(v)
            assert is_acyclic_fibration(iso)


# ---------------------------------------------------------------------------
# induced degree 0 functor


def test_h0_functor_restricts_to_degree_zero():
    q = collapse_onto_point(a2_quiver_category(QQ), QQ)
    h0f = h0_functor(q)
    for pair, sp in h0f.source.homs.items():
        assert set(sp.degrees()) <= {0}
    for pair, gm in h0f.hom_maps.items():
        assert gm.shift == 0
    el = h0f.apply("0", "1", {key_of_h0(h0f.source, ("0", "1")): 1})
    assert list(el.values()) == [1]


def key_of_h0(h0cat, pair):
    keys = h0cat.basis(*pair)
    assert len(keys) == 1
    return keys[0]


def test_verdicts_expose_tri_state_consistency():
    checks = []
    for field in (QQ, GF(5)):
        checks.append(is_fibration(AInfFunctor.identity(retract_category(field))))
        checks.append(
            is_fibration(AInfFunctor(point_category(field), line_target(field), {"*": "*"}, {}))
        )
        checks.append(
            is_fibration(
                AInfFunctor(contractible_extension(field), point_category(field), {"*": "*"}, {})
            )
        )
    for v in checks:
        assert_consistent(v)
