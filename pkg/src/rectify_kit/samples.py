"""Worked example categories and randomized corpora for tests and benchmarks.

The random DG generator produces categories that are valid by construction:
objects are linearly ordered with morphisms only pointing up, differentials
pair off basis vectors without overlap (so they square to zero), and binary
products are sampled from the exact solution space of the compatibility
condition with the differential. With at most three objects there are no
composable non-unit triples, so associativity holds vacuously. Non-unit
products never land on a unit basis vector, which the truncation machinery
relies on.
"""

from __future__ import annotations

import os
import random

from .ainf import AInfCategory, category_from_tables
from .exactlin import FieldSpec, Matrix
from .relcat import (
    AdjunctionData,
    FiniteCategory,
    FiniteRelativeCategory,
    RelativeFunctor,
)


def corpus_seed(default: int = 20260822) -> int:
    raw = os.environ.get("RECTIFY_KIT_SEED")
    return int(raw) if raw else default


def point_category(field: FieldSpec) -> AInfCategory:
    """One object, endomorphisms spanned by the unit."""
    return category_from_tables(
        field,
        ["*"],
        {("*", "*"): {0: ["e"]}},
        {},
        [],
        {"*": "e"},
    )


def a2_quiver_category(field: FieldSpec) -> AInfCategory:
    """Two objects and one degree 0 arrow between them."""
    return category_from_tables(
        field,
        ["0", "1"],
        {
            ("0", "0"): {0: ["e0"]},
            ("1", "1"): {0: ["e1"]},
            ("0", "1"): {0: ["f"]},
        },
        {},
        [],
        {"0": "e0", "1": "e1"},
    )


def m3_example(field: FieldSpec, arity_bound: int = 6) -> AInfCategory:
    """One object, hom spanned by e, x (degree 1), y (degree 2); the only
    structure is the ternary product sending (x, x, x) to y."""
    return category_from_tables(
        field,
        ["*"],
        {("*", "*"): {0: ["e"], 1: ["x"], 2: ["y"]}},
        {},
        [(3, ("*", "*", "*", "*"), ["x", "x", "x"], [("y", 1)])],
        {"*": "e"},
        arity_bound=arity_bound,
    )


def contractible_extension(field: FieldSpec) -> AInfCategory:
    """One object whose endomorphism complex is the unit line plus an exact
    two-term piece p -> q; all non-unit products vanish."""
    return category_from_tables(
        field,
        ["*"],
        {("*", "*"): {0: ["e", "p"], 1: ["q"]}},
        {("*", "*"): [("p", "q", 1)]},
        [],
        {"*": "e"},
    )


def retract_category(field: FieldSpec) -> AInfCategory:
    """Two objects with a retraction r∘s = e; the other composite is a
    non-unit idempotent t. Products of non-units hit the unit basis vector,
    so this category is deliberately non-augmented."""
    ops = [
        (2, ("X", "Y", "X"), ["r", "s"], [("eX", 1)]),
        (2, ("Y", "X", "Y"), ["s", "r"], [("t", 1)]),
        (2, ("Y", "Y", "Y"), ["t", "t"], [("t", 1)]),
        (2, ("Y", "Y", "X"), ["r", "t"], [("r", 1)]),
        (2, ("X", "Y", "Y"), ["t", "s"], [("s", 1)]),
    ]
    return category_from_tables(
        field,
        ["X", "Y"],
        {
            ("X", "X"): {0: ["eX"]},
            ("Y", "Y"): {0: ["eY", "t"]},
            ("X", "Y"): {0: ["s"]},
            ("Y", "X"): {0: ["r"]},
        },
        {},
        ops,
        {"X": "eX", "Y": "eY"},
    )


def disjoint_pair_category(field: FieldSpec) -> AInfCategory:
    """Two objects with no nonzero maps between them in either direction."""
    return category_from_tables(
        field,
        ["X", "Y"],
        {("X", "X"): {0: ["eX"]}, ("Y", "Y"): {0: ["eY"]}},
        {},
        [],
        {"X": "eX", "Y": "eY"},
    )


def random_dg_category(
    field: FieldSpec,
    rng: random.Random,
    max_objects: int = 3,
    max_dim_per_hom: int = 2,
    degree_range=(-1, 2),
) -> AInfCategory:
    """Draw a valid DG category; see the module docstring for why the
    construction cannot fail its own axioms."""
    n_obj = rng.randint(1, max_objects)
    objects = ["O%d" % i for i in range(n_obj)]
    lo, hi = degree_range
    hom_labels = {}
    for i, x in enumerate(objects):
        hom_labels[(x, x)] = {0: ["e%d" % i]}
        for j in range(i + 1, n_obj):
            y = objects[j]
            total = rng.randint(0, max_dim_per_hom)
            if not total:
                continue
            by_deg: dict = {}
            for k in range(total):
                d = rng.randint(lo, hi)
                by_deg.setdefault(d, []).append("f%d%d_%d" % (i, j, k))
            hom_labels[(x, y)] = by_deg

    # differential: pair off distinct basis vectors (degree d -> d+1) so that
    # no vector is both a source and a target; then d squares to zero
    differentials = {}
    for pair, by_deg in hom_labels.items():
        if pair[0] == pair[1]:
            continue
        used = set()
        entries = []
        flat = [(d, name) for d, names in sorted(by_deg.items()) for name in names]
        for (d, name) in flat:
            if name in used:
                continue
            targets = [
                t
                for (dt, t) in flat
                if dt == d + 1 and t not in used and t != name
            ]
            if targets and rng.random() < 0.6:
                t = rng.choice(targets)
                coeff = rng.randint(1, 3) if not field.is_rational else rng.choice([1, -1, 2])
                if not field.is_rational:
                    coeff = coeff % field.characteristic or 1
                entries.append((name, t, coeff))
                used.add(name)
                used.add(t)
        if entries:
            differentials[pair] = entries

    base = category_from_tables(
        field, objects, hom_labels, differentials, [], {o: "e%d" % i for i, o in enumerate(objects)}
    )

    # binary products on non-unit pairs: solve the compatibility condition
    # with the differential and pick a random kernel combination
    operations = []
    for i in range(n_obj):
        for j in range(i + 1, n_obj):
            for k in range(j + 1, n_obj):
                x, y, z = objects[i], objects[j], objects[k]
                ops_entries = _sample_compatible_product(field, rng, base, x, y, z)
                operations.extend(ops_entries)
    if not operations:
        return base
    return category_from_tables(
        field,
        objects,
        hom_labels,
        differentials,
        operations,
        {o: "e%d" % i for i, o in enumerate(objects)},
    )


def walking_arrow(f_weak: bool = True) -> FiniteRelativeCategory:
    """Two objects a, b and one non-identity arrow f between them."""
    cat = FiniteCategory(
        ["a", "b"],
        {"ida": ("a", "a"), "idb": ("b", "b"), "f": ("a", "b")},
        {"a": "ida", "b": "idb"},
        {
            ("ida", "ida"): "ida",
            ("idb", "idb"): "idb",
            ("f", "ida"): "f",
            ("idb", "f"): "f",
        },
    )
    weq = {"ida", "idb"} | ({"f"} if f_weak else set())
    return FiniteRelativeCategory(cat, weq)


def terminal_relative() -> FiniteRelativeCategory:
    cat = FiniteCategory(["*"], {"id*": ("*", "*")}, {"*": "id*"}, {("id*", "id*"): "id*"})
    return FiniteRelativeCategory(cat, {"id*"})


def parallel_pair() -> FiniteRelativeCategory:
    """Two objects with parallel arrows f, g from a to b; only f is weak."""
    cat = FiniteCategory(
        ["a", "b"],
        {"ida": ("a", "a"), "idb": ("b", "b"), "f": ("a", "b"), "g": ("a", "b")},
        {"a": "ida", "b": "idb"},
        {
            ("ida", "ida"): "ida",
            ("idb", "idb"): "idb",
            ("f", "ida"): "f",
            ("idb", "f"): "f",
            ("g", "ida"): "g",
            ("idb", "g"): "g",
        },
    )
    return FiniteRelativeCategory(cat, {"ida", "idb", "f"})


def collapse_to_terminal_adjunction(f_weak: bool = True) -> AdjunctionData:
    """Left functor collapses the walking arrow onto the terminal category;
    the right one picks out b. The unit component at a is the arrow itself."""
    arrow = walking_arrow(f_weak)
    term = terminal_relative()
    left = RelativeFunctor(
        arrow, term, {"a": "*", "b": "*"}, {"ida": "id*", "idb": "id*", "f": "id*"}
    )
    right = RelativeFunctor(term, arrow, {"*": "b"}, {"id*": "idb"})
    return AdjunctionData(left, right, {"a": "f", "b": "idb"}, {"*": "id*"})


def collapse_parallel_pair_functor() -> RelativeFunctor:
    """Sends the parallel pair to a one-object monoid, the weak arrow to the
    identity and the other one to an idempotent."""
    src = parallel_pair()
    cat = FiniteCategory(
        ["*"],
        {"id*": ("*", "*"), "t": ("*", "*")},
        {"*": "id*"},
        {("id*", "id*"): "id*", ("id*", "t"): "t", ("t", "id*"): "t", ("t", "t"): "t"},
    )
    tgt = FiniteRelativeCategory(cat, {"id*"})
    return RelativeFunctor(
        src, tgt, {"a": "*", "b": "*"}, {"ida": "id*", "idb": "id*", "f": "id*", "g": "t"}
    )


def fork_relative() -> FiniteRelativeCategory:
    """Arrows u, v from a to b equalized by a weak h: b -> c, so u and v
    become equal in the localization but only through words longer than
    either; useful for exercising stabilization flags."""
    cat = FiniteCategory(
        ["a", "b", "c"],
        {
            "ida": ("a", "a"),
            "idb": ("b", "b"),
            "idc": ("c", "c"),
            "u": ("a", "b"),
            "v": ("a", "b"),
            "h": ("b", "c"),
            "k": ("a", "c"),
        },
        {"a": "ida", "b": "idb", "c": "idc"},
        {
            ("ida", "ida"): "ida",
            ("idb", "idb"): "idb",
            ("idc", "idc"): "idc",
            ("u", "ida"): "u",
            ("idb", "u"): "u",
            ("v", "ida"): "v",
            ("idb", "v"): "v",
            ("h", "idb"): "h",
            ("idc", "h"): "h",
            ("k", "ida"): "k",
            ("idc", "k"): "k",
            ("h", "u"): "k",
            ("h", "v"): "k",
        },
    )
    return FiniteRelativeCategory(cat, {"ida", "idb", "idc", "h"})


def chain_relative(n: int, weq: str = "all") -> FiniteRelativeCategory:
    """The poset 0 < 1 < ... < n-1 as a category; weq picks all morphisms
    or just the isomorphisms (here: identities)."""
    objects = ["p%d" % i for i in range(n)]
    morphisms = {
        "le_%d_%d" % (i, j): ("p%d" % i, "p%d" % j)
        for i in range(n)
        for j in range(i, n)
    }
    identities = {"p%d" % i: "le_%d_%d" % (i, i) for i in range(n)}
    table = {}
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                table[("le_%d_%d" % (j, k), "le_%d_%d" % (i, j))] = "le_%d_%d" % (i, k)
    cat = FiniteCategory(objects, morphisms, identities, table)
    members = set(morphisms) if weq == "all" else set(identities.values())
    return FiniteRelativeCategory(cat, members)


def chain_galois_adjunction(rng: random.Random, weq: str = "all", max_len: int = 4) -> AdjunctionData:
    """A random Galois connection between two chains: a monotone right map
    fixing the top, with its forced left adjoint. Triangle identities hold
    because hom sets are at most singletons."""
    n = rng.randint(1, max_len)
    m = rng.randint(1, max_len)
    source = chain_relative(n, weq)
    target = chain_relative(m, weq)
    g = sorted(rng.randint(0, n - 1) for _ in range(m))
    g[-1] = n - 1
    f = [min(q for q in range(m) if p <= g[q]) for p in range(n)]
    left = RelativeFunctor(
        source,
        target,
        {"p%d" % p: "p%d" % f[p] for p in range(n)},
        {
            "le_%d_%d" % (i, j): "le_%d_%d" % (f[i], f[j])
            for i in range(n)
            for j in range(i, n)
        },
    )
    right = RelativeFunctor(
        target,
        source,
        {"p%d" % q: "p%d" % g[q] for q in range(m)},
        {
            "le_%d_%d" % (i, j): "le_%d_%d" % (g[i], g[j])
            for i in range(m)
            for j in range(i, m)
        },
    )
    unit = {"p%d" % p: "le_%d_%d" % (p, g[f[p]]) for p in range(n)}
    counit = {"p%d" % q: "le_%d_%d" % (f[g[q]], q) for q in range(m)}
    return AdjunctionData(left, right, unit, counit)


def random_poset_relative(
    rng: random.Random, max_objects: int = 4, weq_density: float = 0.3
) -> FiniteRelativeCategory:
    """A random finite poset with a random composition-closed class of
    weak equivalences containing the identities."""
    n = rng.randint(1, max_objects)
    rel = {(i, i) for i in range(n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                rel.add((i, j))
    changed = True
    while changed:
        changed = False
        for (i, j) in sorted(rel):
            for (j2, k) in sorted(rel):
                if j2 == j and (i, k) not in rel:
                    rel.add((i, k))
                    changed = True
    objects = ["p%d" % i for i in range(n)]
    morphisms = {"le_%d_%d" % (i, j): ("p%d" % i, "p%d" % j) for (i, j) in rel}
    identities = {"p%d" % i: "le_%d_%d" % (i, i) for i in range(n)}
    table = {}
    for (i, j) in rel:
        for (j2, k) in rel:
            if j2 == j:
                table[("le_%d_%d" % (j, k), "le_%d_%d" % (i, j))] = "le_%d_%d" % (i, k)
    cat = FiniteCategory(objects, morphisms, identities, table)
    w = {(i, i) for i in range(n)}
    for (i, j) in sorted(rel):
        if i != j and rng.random() < weq_density:
            w.add((i, j))
    changed = True
    while changed:
        changed = False
        for (i, j) in sorted(w):
            for (j2, k) in sorted(w):
                if j2 == j and (i, k) not in w:
                    w.add((i, k))
                    changed = True
    return FiniteRelativeCategory(cat, {"le_%d_%d" % (i, j) for (i, j) in w})


def _sample_compatible_product(field, rng, base: AInfCategory, x, y, z):
    """Entries for a product hom(y,z) x hom(x,y) -> hom(x,z) commuting with
    the differentials, sampled from the exact solution space."""
    gb = [k for k in base.hom_basis(y, z) if not base.is_unit((y, z), k)]
    fb = [k for k in base.hom_basis(x, y) if not base.is_unit((x, y), k)]
    out_space = base.hom(x, z).space
    if not gb or not fb or not out_space.total_dim():
        return []
    # unknowns: coefficient of each output basis vector for each input pair,
    # subject to the degree rule
    unknowns = []
    for g in gb:
        for f_ in fb:
            want = g[0] + f_[0]
            for i in range(out_space.dim(want)):
                unknowns.append((g, f_, (want, i)))
    if not unknowns:
        return []
    # constraint rows: for each input pair and each output coordinate of
    #   d(m(g,f)) - m(dg, f) - (-1)^{|g|} m(g, df) = 0
    # where m(dg, f) expands through the differential entries
    rows = {}

    def add(row_key, col, coeff):
        row = rows.setdefault(row_key, {})
        row[col] = field.add(row.get(col, field.zero()), coeff)

    gb_set = set(gb)
    fb_set = set(fb)
    col_index = {u: n for n, u in enumerate(unknowns)}
    d_xz = base.hom(x, z).d
    d_yz = base.hom(y, z).d
    d_xy = base.hom(x, y).d

    for g in gb:
        for f_ in fb:
            want = g[0] + f_[0]
            # d applied to the product
            blk = d_xz.block(want)
            for (r, c), v in blk.entries.items():
                add((g, f_, (want + 1, r)), col_index[(g, f_, (want, c))], v)
            # product with dg
            for (r, c), v in d_yz.block(g[0]).entries.items():
                if c != g[1]:
                    continue
                gg = (g[0] + 1, r)
                if gg in gb_set:
                    for i in range(out_space.dim(want + 1)):
                        key = (gg, f_, (want + 1, i))
                        if key in col_index:
                            add((g, f_, (want + 1, i)), col_index[key], field.neg(v))
            # product with df, Koszul sign from the first argument
            sign = field.coerce(-1 if g[0] % 2 else 1)
            for (r, c), v in d_xy.block(f_[0]).entries.items():
                if c != f_[1]:
                    continue
                ff = (f_[0] + 1, r)
                if ff in fb_set:
                    for i in range(out_space.dim(want + 1)):
                        key = (g, ff, (want + 1, i))
                        if key in col_index:
                            add(
                                (g, f_, (want + 1, i)),
                                col_index[key],
                                field.neg(field.mul(sign, v)),
                            )

    row_keys = sorted(rows, key=repr)
    mat = Matrix(
        field,
        len(row_keys),
        len(unknowns),
        {
            (ri, ci): v
            for ri, rk in enumerate(row_keys)
            for ci, v in rows[rk].items()
        },
    )
    kern = mat.kernel_basis() if row_keys else [
        tuple(field.one() if i == j else field.zero() for i in range(len(unknowns)))
        for j in range(len(unknowns))
    ]
    if not kern:
        return []
    # random combination of kernel vectors
    combo = [field.zero()] * len(unknowns)
    for vec in kern:
        c = rng.randint(-2, 2)
        if not field.is_rational:
            c = c % field.characteristic
        if c == 0:
            continue
        for i, v in enumerate(vec):
            combo[i] = field.add(combo[i], field.mul(field.coerce(c), v))
    out = {}
    for idx, coeff in enumerate(combo):
        if coeff == 0:
            continue
        g, f_, okey = unknowns[idx]
        out.setdefault((g, f_), []).append((okey, coeff))
    operations = []
    chain = (x, y, z)
    for (g, f_), terms in sorted(out.items()):
        g_label = base.basis_label((y, z), g)
        f_label = base.basis_label((x, y), f_)
        named = [(out_space.basis_label(d, i), coeff) for ((d, i), coeff) in terms]
        operations.append((2, chain, [g_label, f_label], named))
    return operations
