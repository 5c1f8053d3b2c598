"""Normalized tensor-word coalgebra, its generator-word algebra, and the
round trip that straightens a higher-operation category into a DG stage.

Truncation is by TOTAL TENSOR LENGTH: the number of base-morphism letters
summed over all word letters. Both pieces of every differential here preserve
or decrease that quantity, so each stage is an honest subcomplex and the full
object is the increasing union of stages; stage cohomology therefore computes
the colimit degreewise. Products that would exceed the bound are flagged out
of stage and verifications that would need them report partial coverage
rather than silently truncating.

Degrees are stored already shifted: a word letter [a_1|...|a_n] has degree
sum(deg a_i) - n, and a generator word adds +1 per letter. Words never
contain unit letters.

The normalized differential is only a differential when products of
non-units never hit a unit basis vector; inputs violating that are rejected
up front with a concrete witness (see ``bar``). All sign choices live in the
signs module.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Optional

from .ainf import (
    AInfCategory,
    AInfFunctor,
    check_ainf_relations,
    check_functor_relations,
)
from .errors import ConsistencyError, InputError
from .exactlin import Matrix
from .graded import (
    ChainMap,
    CochainComplex,
    GradedLinearMap,
    GradedVectorSpace,
    cohomology,
    induced_map_on_cohomology,
    is_quasi_iso,
)
from .signs import shifted_prefix_sign, suspension_sign

# a bar word is (chain, keys): chain = (X_0, ..., X_n) objects, keys the
# letters outermost first, keys[j] a basis key of hom(chain[n-j-1], chain[n-j])


def _word_degree(word) -> int:
    _, keys = word
    return sum(k[0] - 1 for k in keys)


def _render_bar_word(base: AInfCategory, word) -> str:
    chain, keys = word
    n = len(keys)
    labels = [
        base.basis_label((chain[n - j - 1], chain[n - j]), k) for j, k in enumerate(keys)
    ]
    return "[%s]" % "|".join(labels)


@dataclass(frozen=True)
class StageCertificate:
    kind: str
    length_bound: int
    word_counts: tuple
    squared_zero: bool
    notes: tuple


class TruncatedBarCocategory:
    """Length-bounded stage of the normalized word coalgebra."""

    __slots__ = ("base", "length_bound", "words", "index", "spaces", "window", "b_elements", "b", "certificate")

    def __init__(self, base, length_bound, words, b_elements, certificate):
        self.base = base
        self.length_bound = length_bound
        self.words = words
        self.b_elements = b_elements
        self.certificate = certificate
        self.index = {}
        self.spaces = {}
        degs = [0]
        for pair, wlist in words.items():
            for w in wlist:
                degs.append(_word_degree(w))
        self.window = (min(degs), max(degs) + 1)  # +1 so b has a landing degree
        for pair, wlist in words.items():
            by_deg: dict = {}
            idx = {}
            for w in wlist:
                d = _word_degree(w)
                names = by_deg.setdefault(d, [])
                label = _render_bar_word(base, w)
                if label in names:
                    label = "%s#%d" % (label, sum(1 for nm in names if nm.startswith(label)) + 1)
                idx[w] = (d, len(names))
                names.append(label)
            self.index[pair] = idx
            self.spaces[pair] = GradedVectorSpace(base.field, by_deg)

    def differential_map(self, pair) -> GradedLinearMap:
        sp = self.spaces[pair]
        blocks: dict = {}
        for w, el in self.b_elements.get(pair, {}).items():
            d, i = self.index[pair][w]
            for w2, coeff in el.items():
                d2, j = self.index[pair][w2]
                assert d2 == d + 1
                blk = blocks.setdefault(d, {})
                blk[(j, i)] = coeff
        return GradedLinearMap(
            sp,
            sp,
            1,
            {
                d: Matrix(self.base.field, sp.dim(d + 1), sp.dim(d), ent)
                for d, ent in blocks.items()
            },
        )


def _enumerate_bar_words(base: AInfCategory, length_bound: int):
    """All normalized words up to the length bound, per object pair."""
    nonunit = {}
    for x in base.objects:
        for y in base.objects:
            keys = [k for k in base.hom_basis(x, y) if not base.is_unit((x, y), k)]
            if keys:
                nonunit[(x, y)] = keys
    words: dict = {}
    chains = [(x,) for x in base.objects]
    for _ in range(length_bound):
        nxt = []
        for ch in chains:
            for y in base.objects:
                if (ch[-1], y) in nonunit:
                    nxt.append(ch + (y,))
        chains = nxt
        for ch in chains:
            n = len(ch) - 1
            slots = [nonunit[(ch[n - j - 1], ch[n - j])] for j in range(n)]
            pair = (ch[0], ch[-1])
            bucket = words.setdefault(pair, [])
            for keys in iproduct(*slots):
                bucket.append((ch, keys))
    for pair in words:
        words[pair].sort(key=lambda w: (len(w[1]), w))
    return words


def _bar_differential_of_word(base: AInfCategory, word, length_bound: int) -> dict:
    """Coderivation value on one word, as an element over words."""
    chain, keys = word
    n = len(keys)
    f = base.field
    out: dict = {}
    for r in range(n):
        for s in range(1, min(n - r, base.arity_bound) + 1):
            inner_chain = chain[n - r - s : n - r + 1]
            inner = base.suspended_op(inner_chain, [{k: f.one()} for k in keys[r : r + s]])
            if not inner:
                continue
            prefix = shifted_prefix_sign(k[0] - 1 for k in keys[:r])
            new_chain = chain[: n - r - s + 1] + chain[n - r :]
            for okey, coeff in inner.items():
                if base.is_unit((inner_chain[0], inner_chain[-1]), okey):
                    raise ConsistencyError("unit letter produced despite the augmentation check")
                new_word = (new_chain, keys[:r] + (okey,) + keys[r + s :])
                assert len(new_word[1]) <= length_bound
                c = coeff if prefix > 0 else f.neg(coeff)
                cur = f.add(out.get(new_word, f.zero()), c)
                if cur == 0:
                    out.pop(new_word, None)
                else:
                    out[new_word] = cur
    return out


def _check_augmented(base: AInfCategory, max_arity: int):
    """Products of non-units must avoid every unit basis vector, including
    through the differential; otherwise the normalized word span is not
    closed under the coderivation."""
    f = base.field
    for s in range(1, max_arity + 1):
        for chain in base.chains(s):
            slots = []
            bad = False
            n = len(chain) - 1
            for j in range(n):
                pair = (chain[n - j - 1], chain[n - j])
                keys = [k for k in base.hom_basis(*pair) if not base.is_unit(pair, k)]
                if not keys:
                    bad = True
                    break
                slots.append(keys)
            if bad:
                continue
            out_pair = (chain[0], chain[-1])
            for btuple in iproduct(*slots):
                el = base.apply_op_basis(chain, btuple)
                for okey in el:
                    if base.is_unit(out_pair, okey):
                        labels = [
                            base.basis_label((chain[n - j - 1], chain[n - j]), k)
                            for j, k in enumerate(btuple)
                        ]
                        raise InputError(
                            "normalized word differential needs unit-free products of "
                            "non-units, but (%s) hits the unit of %s"
                            % (", ".join(labels), out_pair[0])
                        )


def bar(base: AInfCategory, length_bound: int) -> TruncatedBarCocategory:
    """Stage of the normalized word coalgebra with certified square-zero
    differential. Rejects inputs whose structure relations fail and inputs
    whose non-unit products touch a unit basis vector."""
    if length_bound < 1:
        raise InputError("length bound must be at least 1")
    check_arity = min(length_bound, base.arity_bound)
    report = check_ainf_relations(base, check_arity)
    if not report.ok:
        bad = report.failures[0]
        raise InputError(
            "structure relations fail at arity %d on inputs (%s); input rejected"
            % (bad.arity, ", ".join(bad.inputs))
        )
    _check_augmented(base, check_arity)
    words = _enumerate_bar_words(base, length_bound)
    b_elements: dict = {}
    f = base.field
    for pair, wlist in words.items():
        per = {}
        for w in wlist:
            el = _bar_differential_of_word(base, w, length_bound)
            if el:
                per[w] = el
        if per:
            b_elements[pair] = per
    # certify square zero word by word
    for pair, per in b_elements.items():
        for w, el in per.items():
            acc: dict = {}
            for w2, c in el.items():
                for w3, c2 in b_elements.get(pair, {}).get(w2, {}).items():
                    cur = f.add(acc.get(w3, f.zero()), f.mul(c, c2))
                    if cur == 0:
                        acc.pop(w3, None)
                    else:
                        acc[w3] = cur
            if acc:
                raise ConsistencyError(
                    "coalgebra differential fails to square to zero on %s"
                    % _render_bar_word(base, w)
                )
    cert = StageCertificate(
        kind="bar",
        length_bound=length_bound,
        word_counts=tuple(sorted((pair, len(ws)) for pair, ws in words.items())),
        squared_zero=True,
        notes=("relations checked to arity %d" % check_arity,),
    )
    return TruncatedBarCocategory(base, length_bound, words, b_elements, cert)


# a generator word is a tuple of bar words, outermost letter first; the empty
# tuple is the unit of the diagonal hom


def _cobar_degree(word) -> int:
    return sum(_word_degree(c) + 1 for c in word)


def _total_length(word) -> int:
    return sum(len(c[1]) for c in word)


def _render_cobar_word(base, word) -> str:
    if not word:
        return "[]"
    return "".join(_render_bar_word(base, c) for c in word)


class TruncatedDGCategory:
    """Stage of the generator-word algebra over a word coalgebra stage."""

    __slots__ = (
        "bar_stage",
        "base",
        "length_bound",
        "words",
        "index",
        "spaces",
        "window",
        "d_elements",
        "certificate",
        "_ainf",
    )

    def __init__(self, bar_stage, words, d_elements, certificate):
        self.bar_stage = bar_stage
        self.base = bar_stage.base
        self.length_bound = bar_stage.length_bound
        self.words = words
        self.d_elements = d_elements
        self.certificate = certificate
        self._ainf = None
        self.index = {}
        self.spaces = {}
        degs = [0]
        for pair, wlist in words.items():
            for w in wlist:
                degs.append(_cobar_degree(w))
        self.window = (min(degs), max(degs) + 1)
        for pair, wlist in words.items():
            by_deg: dict = {}
            idx = {}
            for w in wlist:
                d = _cobar_degree(w)
                names = by_deg.setdefault(d, [])
                label = _render_cobar_word(self.base, w)
                if label in names:
                    label = "%s#%d" % (label, sum(1 for nm in names if nm.startswith(label)) + 1)
                idx[w] = (d, len(names))
                names.append(label)
            self.index[pair] = idx
            self.spaces[pair] = GradedVectorSpace(self.base.field, by_deg)

    def concat(self, w1, w2):
        """Concatenation product; returns (word, in_stage)."""
        joined = tuple(w1) + tuple(w2)
        if _total_length(joined) > self.length_bound:
            return None, False
        return joined, True

    def _words_by_length(self):
        by_len: dict = {}
        for pair, wlist in self.words.items():
            buckets = by_len.setdefault(pair, {})
            for w in wlist:
                buckets.setdefault(_total_length(w), []).append(w)
        return by_len

    def hom_complex(self, pair) -> CochainComplex:
        return self.as_ainf_category().hom(*pair)

    def as_ainf_category(self) -> AInfCategory:
        """The stage as a category with only a differential and a binary
        product (out-of-stage products are zero in the quotient)."""
        if self._ainf is not None:
            return self._ainf
        base = self.base
        f = base.field
        window = (min(self.window[0], 0), max(self.window[1], 0))
        hom_labels: dict = {}
        lookup_label: dict = {}
        for x in base.objects:
            for y in base.objects:
                pair = (x, y)
                sp = self.spaces.get(pair)
                by_deg = {d: list(sp.labels[d]) for d in sp.degrees()} if sp is not None else {}
                if x == y:
                    by_deg.setdefault(0, []).insert(0, "[]")
                if by_deg:
                    hom_labels[pair] = by_deg
        spaces = {pair: GradedVectorSpace(f, labels) for pair, labels in hom_labels.items()}
        word_key: dict = {}
        for pair, wlist in self.words.items():
            sp = spaces[pair]
            offset = 1 if pair[0] == pair[1] else 0
            for w in wlist:
                d, i = self.index[pair][w]
                word_key[(pair, w)] = (d, i + (offset if d == 0 else 0))
        homs = {}
        for pair, sp in spaces.items():
            blocks: dict = {}
            for w, el in self.d_elements.get(pair, {}).items():
                d, i = word_key[(pair, w)]
                for w2, coeff in el.items():
                    d2, j = word_key[(pair, w2)]
                    blk = blocks.setdefault(d, {})
                    blk[(j, i)] = coeff
            homs[pair] = CochainComplex(
                sp,
                GradedLinearMap(
                    sp,
                    sp,
                    1,
                    {
                        d: Matrix(f, sp.dim(d + 1), sp.dim(d), ent)
                        for d, ent in blocks.items()
                    },
                ),
                window,
            )
        by_len = self._words_by_length()
        ops: dict = {}
        for pair1, b1 in by_len.items():
            for pair2, b2 in by_len.items():
                if pair2[1] != pair1[0]:
                    continue
                chain = (pair2[0], pair1[0], pair1[1])
                table: dict = {}
                for l1, wl1 in b1.items():
                    for l2, wl2 in b2.items():
                        if l1 + l2 > self.length_bound:
                            continue
                        for w1 in wl1:
                            k1 = word_key[(pair1, w1)]
                            for w2 in wl2:
                                k2 = word_key[(pair2, w2)]
                                kout = word_key[((chain[0], chain[2]), w1 + w2)]
                                table[(k1, k2)] = {kout: f.one()}
                if table:
                    ops[(2, chain)] = table
        units = {x: "[]" for x in base.objects}
        cat = AInfCategory(
            f,
            base.objects,
            homs,
            ops,
            units,
            arity_bound=base.arity_bound,
            window=window,
        )
        self._ainf = cat
        return cat

    def word_basis_key(self, pair, word):
        """Basis key of a stage word inside the materialized category."""
        self.as_ainf_category()
        if not word:
            return (0, 0) if pair[0] == pair[1] else None
        d, i = self.index[pair][word]
        offset = 1 if (pair[0] == pair[1] and d == 0) else 0
        return (d, i + offset)


def _cobar_differential_of_word(stage: TruncatedBarCocategory, word) -> dict:
    """Derivation value on one generator word."""
    base = stage.base
    f = base.field
    out: dict = {}

    def accumulate(new_word, coeff):
        cur = f.add(out.get(new_word, f.zero()), coeff)
        if cur == 0:
            out.pop(new_word, None)
        else:
            out[new_word] = cur

    prefix_deg = 0
    for i, letter in enumerate(word):
        sign = -1 if prefix_deg % 2 else 1
        lchain, lkeys = letter
        pair = (lchain[0], lchain[-1])
        # internal part: coalgebra differential on the letter
        for nl, coeff in stage.b_elements.get(pair, {}).get(letter, {}).items():
            c = coeff if sign > 0 else f.neg(coeff)
            accumulate(word[:i] + (nl,) + word[i + 1 :], c)
        # splitting part: cut the letter in two
        n = len(lkeys)
        for m in range(1, n):
            first = (lchain[n - m :], lkeys[:m])
            second = (lchain[: n - m + 1], lkeys[m:])
            split_sign = -1 if (_word_degree(first) + 1) % 2 else 1
            total = sign * split_sign
            accumulate(
                word[:i] + (first, second) + word[i + 1 :],
                f.one() if total > 0 else f.coerce(-1),
            )
        prefix_deg += _word_degree(letter) + 1
    return out


def _enumerate_cobar_words(stage: TruncatedBarCocategory):
    """Letter sequences, outermost first, composable along objects, total
    length within the stage bound; grouped by (source, target)."""
    L = stage.length_bound
    words: dict = {}

    def extend(prefix, src, remaining):
        for pair, wlist in stage.words.items():
            if pair[1] != src:
                continue
            for letter in wlist:
                ln = len(letter[1])
                if ln > remaining:
                    continue
                w = prefix + (letter,)
                words.setdefault((pair[0], w[0][0][-1]), []).append(w)
                extend(w, pair[0], remaining - ln)

    for y in stage.base.objects:
        extend((), y, L)
    for bucket in words.values():
        bucket.sort(key=lambda w: (_total_length(w), w))
    return words


def cobar(stage: TruncatedBarCocategory) -> TruncatedDGCategory:
    """Generator-word algebra stage at the same total length bound, with the
    differential certified square-zero and composition certified associative
    within the stage."""
    base = stage.base
    f = base.field
    L = stage.length_bound
    words = _enumerate_cobar_words(stage)
    d_elements: dict = {}
    for pair, wlist in words.items():
        per = {}
        for w in wlist:
            el = _cobar_differential_of_word(stage, w)
            if el:
                for w2 in el:
                    assert _total_length(w2) <= L
                per[w] = el
        if per:
            d_elements[pair] = per
    # certify square zero
    for pair, per in d_elements.items():
        for w in per:
            acc: dict = {}
            for w2, c in per[w].items():
                for w3, c2 in d_elements.get(pair, {}).get(w2, {}).items():
                    cur = f.add(acc.get(w3, f.zero()), f.mul(c, c2))
                    if cur == 0:
                        acc.pop(w3, None)
                    else:
                        acc[w3] = cur
            if acc:
                raise ConsistencyError(
                    "algebra differential fails to square to zero on %s"
                    % _render_cobar_word(base, w)
                )
    # associativity of concatenation on triples that stay within the stage
    by_len: dict = {}
    for pair, wlist in words.items():
        buckets = by_len.setdefault(pair, {})
        for w in wlist:
            buckets.setdefault(_total_length(w), []).append(w)
    checked = 0
    for p1, b1 in by_len.items():
        for p2, b2 in by_len.items():
            if p2[1] != p1[0]:
                continue
            for p3, b3 in by_len.items():
                if p3[1] != p2[0]:
                    continue
                for l1, wl1 in b1.items():
                    for l2, wl2 in b2.items():
                        if l1 + l2 > L:
                            continue
                        for l3, wl3 in b3.items():
                            if l1 + l2 + l3 > L:
                                continue
                            for w1 in wl1:
                                for w2 in wl2:
                                    for w3 in wl3:
                                        assert (w1 + w2) + w3 == w1 + (w2 + w3)
                                        checked += 1
    cert = StageCertificate(
        kind="cobar",
        length_bound=L,
        word_counts=tuple(sorted((pair, len(ws)) for pair, ws in words.items())),
        squared_zero=True,
        notes=(
            "associativity checked on %d in-stage triples" % checked,
            "products leaving the stage are flagged, checked within stage only",
        ),
    )
    return TruncatedDGCategory(stage, words, d_elements, cert)


def rectify(base: AInfCategory, length_bound: int) -> TruncatedDGCategory:
    """Straighten a category into its generator-word DG stage."""
    return cobar(bar(base, length_bound))


def unit_map(base: AInfCategory, length_bound: int, stage: Optional[TruncatedDGCategory] = None) -> AInfFunctor:
    """The componentwise comparison functor from a category into its
    straightened stage: a tuple of non-units goes to the matching
    single-letter generator word, scaled by the suspension comparison sign.

    The functor relations are checked up to the largest arity compatible
    with the stage bound; a failure here is a sign bookkeeping defect and is
    raised as an internal inconsistency, never blamed on the input. The
    check report is attached to the returned functor."""
    if stage is None:
        stage = rectify(base, length_bound)
    elif stage.length_bound != length_bound or stage.base is not base:
        raise InputError("stage does not match the requested bound or base category")
    target = stage.as_ainf_category()
    f = base.field
    n_max = min(length_bound, base.arity_bound)
    components: dict = {}
    for n in range(1, n_max + 1):
        for chain in base.chains(n):
            slots = []
            empty = False
            for j in range(n):
                pair = (chain[n - j - 1], chain[n - j])
                keys = [k for k in base.hom_basis(*pair) if not base.is_unit(pair, k)]
                if not keys:
                    empty = True
                    break
                slots.append(keys)
            if empty:
                continue
            out_pair = (chain[0], chain[-1])
            table = {}
            for btuple in iproduct(*slots):
                word = ((tuple(chain), tuple(btuple)),)
                key = stage.word_basis_key(out_pair, word)
                sign = suspension_sign([k[0] for k in btuple])
                table[btuple] = {key: f.one() if sign > 0 else f.coerce(-1)}
            if table:
                components[(n, tuple(chain))] = table
    fun = AInfFunctor(base, target, {x: x for x in base.objects}, components)
    report = check_functor_relations(fun, n_max)
    if not report.ok:
        bad = report.failures[0]
        raise ConsistencyError(
            "comparison functor relations fail at arity %d on (%s); this is an "
            "internal sign defect" % (bad.arity, ", ".join(bad.inputs))
        )
    fun.report = report
    return fun


@dataclass(frozen=True)
class CounitReport:
    checked_arity: int
    composition_pairs: int
    quasi_iso: dict
    note: str

    @property
    def ok(self) -> bool:
        return True


def _counit_functor(a: AInfCategory, stage: TruncatedDGCategory) -> AInfFunctor:
    f = a.field
    source = stage.as_ainf_category()
    components: dict = {}
    for pair, wlist in stage.words.items():
        table = {}
        for w in wlist:
            if any(len(letter[1]) > 1 for letter in w):
                continue
            el = {w[-1][1][0]: f.one()}
            src = w[-1][0][0]
            for letter in reversed(w[:-1]):
                lchain, lkeys = letter
                el = a.apply_op((src, lchain[0], lchain[-1]), [{lkeys[0]: f.one()}, el])
                if not el:
                    break
            if el:
                table[(stage.word_basis_key(pair, w),)] = el
        if table:
            components[(1, pair)] = table
    return AInfFunctor(source, a, {x: x for x in a.objects}, components)


def _verify_counit_stage(a: AInfCategory, stage: TruncatedDGCategory, fun: AInfFunctor):
    """Chain-map property on every word, composition on in-stage pairs."""
    f = a.field
    source = fun.source
    for x in a.objects:
        for y in a.objects:
            cm = ChainMap(source.hom(x, y), a.hom(x, y), fun.hom_linear_map(x, y))
            bad = cm.first_noncommuting_degree()
            if bad is not None:
                raise ConsistencyError(
                    "collapse map fails the chain property on hom(%s, %s) at degree %d"
                    % (x, y, bad)
                )
    by_len = stage._words_by_length()
    pairs_checked = 0
    for p1, b1 in by_len.items():
        for p2, b2 in by_len.items():
            if p2[1] != p1[0]:
                continue
            out_pair = (p2[0], p1[1])
            for l1, wl1 in b1.items():
                for l2, wl2 in b2.items():
                    if l1 + l2 > stage.length_bound:
                        continue
                    for w1 in wl1:
                        e1 = fun.apply_component_basis(p1, (stage.word_basis_key(p1, w1),))
                        for w2 in wl2:
                            e2 = fun.apply_component_basis(p2, (stage.word_basis_key(p2, w2),))
                            joined, ok = stage.concat(w1, w2)
                            assert ok
                            lhs = fun.apply_component_basis(
                                out_pair, (stage.word_basis_key(out_pair, joined),)
                            )
                            if e1 and e2:
                                rhs = a.apply_op((p2[0], p1[0], p1[1]), [e1, e2])
                            else:
                                rhs = {}
                            if lhs != rhs:
                                raise ConsistencyError(
                                    "collapse map fails composition on %s * %s"
                                    % (
                                        _render_cobar_word(a, w1),
                                        _render_cobar_word(a, w2),
                                    )
                                )
                            pairs_checked += 1
    return pairs_checked


def counit_map(a: AInfCategory, length_bound: int) -> AInfFunctor:
    """Collapse a straightened stage back onto a category with only a
    differential and a binary product: single-letter words of one generator
    evaluate to that generator, longer letters die, concatenation goes to
    iterated composition, with no sign corrections.

    Verified as a chain map on every stage word and as composition
    preserving on every product that stays within the stage; products that
    leave the stage are not checkable and the report says so. Each hom
    component is tested for quasi-isomorphism at this bound and the next
    one, and the report records whether the verdicts agree."""
    if not a.is_dg:
        raise InputError(
            "collapse comparison needs a category with operations of arity at most 2"
        )
    stage = rectify(a, length_bound)
    fun = _counit_functor(a, stage)
    pairs_checked = _verify_counit_stage(a, stage, fun)

    stage_next = rectify(a, length_bound + 1)
    fun_next = _counit_functor(a, stage_next)
    _verify_counit_stage(a, stage_next, fun_next)

    quasi = {}
    for x in a.objects:
        for y in a.objects:
            here = is_quasi_iso(
                ChainMap(fun.source.hom(x, y), a.hom(x, y), fun.hom_linear_map(x, y))
            )
            there = is_quasi_iso(
                ChainMap(
                    fun_next.source.hom(x, y),
                    a.hom(x, y),
                    fun_next.hom_linear_map(x, y),
                )
            )
            quasi[(x, y)] = {
                "quasi_iso": here,
                "next_stage": there,
                "stable": here == there,
            }
    fun.report = CounitReport(
        checked_arity=2,
        composition_pairs=pairs_checked,
        quasi_iso=quasi,
        note="composition checked within stage only; bounds %d and %d compared"
        % (length_bound, length_bound + 1),
    )
    return fun


def stage_inclusion(small: TruncatedDGCategory, big: TruncatedDGCategory) -> dict:
    """Per-pair chain maps embedding a stage into a deeper one.

    Words persist unchanged, so the maps are basis injections; the
    differential restricts on the nose and products agree whenever they stay
    within the smaller bound. Both facts are asserted, not assumed."""
    if small.base is not big.base and small.base != big.base:
        raise InputError("stage inclusion needs stages of one base category")
    if small.length_bound > big.length_bound:
        raise InputError("inclusion goes from the smaller bound to the larger")
    src = small.as_ainf_category()
    tgt = big.as_ainf_category()
    f = src.field
    maps = {}
    for x in src.objects:
        for y in src.objects:
            pair = (x, y)
            ssp = src.hom(x, y).space
            tsp = tgt.hom(x, y).space
            entries: dict = {}
            if x == y:
                entries.setdefault(0, {})[(0, 0)] = f.one()
            for w in small.words.get(pair, ()):  # basis injection on words
                d, i = small.word_basis_key(pair, w)
                d2, j = big.word_basis_key(pair, w)
                assert d2 == d
                entries.setdefault(d, {})[(j, i)] = f.one()
            blocks = {
                d: Matrix(f, tsp.dim(d), ssp.dim(d), ent) for d, ent in entries.items()
            }
            cm = ChainMap(src.hom(x, y), tgt.hom(x, y), GradedLinearMap(ssp, tsp, 0, blocks))
            assert cm.first_noncommuting_degree() is None
            maps[pair] = cm
    by_len = small._words_by_length()
    for p1, b1 in by_len.items():
        for p2, b2 in by_len.items():
            if p2[1] != p1[0]:
                continue
            for l1, wl1 in b1.items():
                for l2, wl2 in b2.items():
                    if l1 + l2 > small.length_bound:
                        continue
                    for w1 in wl1:
                        for w2 in wl2:
                            joined, ok = small.concat(w1, w2)
                            assert ok and big.concat(w1, w2) == (joined, True)
    return maps


@dataclass(frozen=True)
class StabilizationReport:
    length_max: int
    window: tuple
    dims: dict
    stabilized_at: dict

    def stable_through(self, pair) -> bool:
        return all(v is not None for v in self.stabilized_at[pair].values())


def stabilization_report(base: AInfCategory, length_max: int, window) -> StabilizationReport:
    """Track stage cohomology as the bound grows.

    A degree counts as settled at bound L when its dimension agrees at
    L-1, L, L+1 and both inclusion-induced maps are isomorphisms there; the
    smallest such L is recorded, or None when the horizon is too short to
    tell."""
    if length_max < 2:
        raise InputError("need a bound of at least 2 to compare stages")
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise InputError("empty degree window")
    stages = {L: rectify(base, L) for L in range(1, length_max + 1)}
    cats = {L: stages[L].as_ainf_category() for L in stages}
    pairs = [(x, y) for x in base.objects for y in base.objects]
    cohs = {L: {pair: cohomology(cats[L].hom(*pair)) for pair in pairs} for L in stages}
    induced = {}
    for L in range(1, length_max):
        incl = stage_inclusion(stages[L], stages[L + 1])
        induced[L] = {
            pair: induced_map_on_cohomology(
                incl[pair], cohs[L][pair], cohs[L + 1][pair]
            )
            for pair in pairs
        }

    def iso_at(glm, deg) -> bool:
        rows = glm.target.dim(deg)
        cols = glm.source.dim(deg)
        if rows != cols:
            return False
        if rows == 0:
            return True
        return glm.block(deg).rank() == rows

    dims = {
        pair: {
            L: {d: cohs[L][pair].space.dim(d) for d in range(lo, hi + 1)}
            for L in range(2, length_max + 1)
        }
        for pair in pairs
    }
    stabilized: dict = {}
    for pair in pairs:
        per = {}
        for d in range(lo, hi + 1):
            found = None
            for L in range(2, length_max):
                trio = {
                    cohs[LL][pair].space.dim(d) for LL in (L - 1, L, L + 1)
                }
                if len(trio) != 1:
                    continue
                if iso_at(induced[L - 1][pair], d) and iso_at(induced[L][pair], d):
                    found = L
                    break
            per[d] = found
        stabilized[pair] = per
    return StabilizationReport(
        length_max=length_max, window=(lo, hi), dims=dims, stabilized_at=stabilized
    )
