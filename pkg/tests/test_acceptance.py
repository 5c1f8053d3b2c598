"""End-to-end acceptance: nine checks, one pass/fail line each under -v.

Each check carries its own wall-clock budget; exceeding the budget fails
the check.  The randomized corpus seed honors RECTIFY_KIT_SEED.
"""

import json
import random
import re
import subprocess
import sys
import time
from pathlib import Path

import pytest

from rectify_kit.ainf import (
    AInfFunctor,
    category_from_tables,
    check_ainf_relations,
    check_functor_relations,
    h_functor,
)
from rectify_kit.barcobar import bar, counit_map, rectify, stabilization_report, unit_map
from rectify_kit.exactlin import GF, QQ
from rectify_kit.fibcheck import is_fibration, is_isofibration
from rectify_kit.graded import ChainMap, induced_map_on_cohomology
from rectify_kit.relcat import (
    check_dk_adjunction,
    check_localization_equivalence,
    hammock_pi0,
)
from rectify_kit.samples import (
    a2_quiver_category,
    chain_galois_adjunction,
    collapse_to_terminal_adjunction,
    contractible_extension,
    corpus_seed,
    disjoint_pair_category,
    m3_example,
    parallel_pair,
    point_category,
    random_dg_category,
    retract_category,
    walking_arrow,
)

F5 = GF(5)
DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def corpus():
    rng = random.Random(corpus_seed())
    return [
        random_dg_category(F5, rng, max_objects=3, max_dim_per_hom=3, degree_range=(-1, 2))
        for _ in range(50)
    ]


def test_criterion_1_dg_corpus_relations(corpus):
    t0 = time.monotonic()
    for cat in corpus:
        rep = check_ainf_relations(cat, 6)
        assert rep.failures == ()
    assert time.monotonic() - t0 < 60


def test_criterion_2_bar_cobar_square_zero(corpus):
    t0 = time.monotonic()
    for cat in corpus:
        assert bar(cat, 5).certificate.squared_zero
        assert rectify(cat, 5).certificate.squared_zero
    assert time.monotonic() - t0 < 120


def test_criterion_3_counit_quasi_iso_and_h0_equivalence():
    t0 = time.monotonic()
    for base in (point_category(QQ), a2_quiver_category(QQ)):
        # F^1 of the counit is a quasi-isomorphism wherever dims stabilized
        for length in (3, 4, 5):
            rep = counit_map(base, length).report
            for entry in rep.quasi_iso.values():
                if entry["stable"]:
                    assert entry["quasi_iso"]
        # H^0 of the stage at L = 4 is equivalent to H^0 of the base: the
        # counit is identity on objects, so bijective H^0 blocks suffice
        cu = counit_map(base, 4)
        h = h_functor(cu)
        for x in cu.source.objects:
            for y in cu.source.objects:
                sdim = h.source.homs[(x, y)].dim(0)
                tdim = h.target.homs[(cu.object_map[x], cu.object_map[y])].dim(0)
                assert sdim == tdim
                if sdim:
                    assert h.hom_maps[(x, y)].block(0).rank() == sdim
        # stabilization certified across L = 3, 4, 5
        rs = stabilization_report(base, 5, base.window)
        for pair, by_length in rs.dims.items():
            assert by_length[3].get(0, 0) == by_length[4].get(0, 0) == by_length[5].get(0, 0)
            assert rs.stabilized_at[pair].get(0) is not None
    assert time.monotonic() - t0 < 60


def test_criterion_4_unit_map_on_higher_operation():
    t0 = time.monotonic()
    a = m3_example(F5)
    eta = unit_map(a, 6)
    assert eta.report.failures == ()
    rep = check_functor_relations(eta, 4)
    assert rep.checked_arity == 4
    assert rep.failures == ()
    rs = stabilization_report(a, 6, a.window)
    for x in a.objects:
        for y in a.objects:
            pair = (x, y)
            cm = ChainMap(
                a.homs[pair],
                eta.target.homs[(eta.object_map[x], eta.object_map[y])],
                eta.hom_linear_map(x, y),
            )
            hmap = induced_map_on_cohomology(cm)
            stabilized = rs.stabilized_at.get(pair, {})
            for d in (0, 1, 2):
                if stabilized.get(d) is None:
                    continue
                sdim, tdim = hmap.source.dim(d), hmap.target.dim(d)
                assert sdim == tdim
                assert hmap.block(d).rank() == sdim
    assert time.monotonic() - t0 < 120


def test_criterion_5_hammock_matches_zigzag_localization():
    t0 = time.monotonic()
    for rel in (walking_arrow(), parallel_pair()):
        h = hammock_pi0(rel, 4)
        assert h.localization.word_bound == 4
        assert h.well_defined
        assert h.bijective
    assert time.monotonic() - t0 < 10


def test_criterion_6_dk_adjunction_calibration():
    t0 = time.monotonic()
    for i in range(20):
        adj_all = chain_galois_adjunction(random.Random(7000 + i), "all", max_len=3)
        assert check_dk_adjunction(adj_all).verdict

        adj_iso = chain_galois_adjunction(random.Random(7000 + i), "isos", max_len=3)
        verdict = check_dk_adjunction(adj_iso).verdict
        # in a poset the only isomorphisms are identities, so the adjunction
        # is an adjoint equivalence exactly when unit and counit are identities
        ids_src = set(adj_iso.left.source.cat.identities.values())
        ids_tgt = set(adj_iso.left.target.cat.identities.values())
        equivalence = set(adj_iso.unit.values()) <= ids_src and set(adj_iso.counit.values()) <= ids_tgt
        assert verdict == equivalence
    assert time.monotonic() - t0 < 10


def test_criterion_7_localization_equivalence_with_witnesses():
    t0 = time.monotonic()
    verdict = check_localization_equivalence(collapse_to_terminal_adjunction(), 3)
    assert verdict.status == "true"
    assert verdict.witnesses
    assert time.monotonic() - t0 < 5


def _unit_only_functor(source, target):
    return AInfFunctor(source, target, {"*": "*"}, {})


def test_criterion_8_fibration_predicate_calibration(corpus):
    t0 = time.monotonic()
    named = [
        point_category, a2_quiver_category, m3_example,
        contractible_extension, retract_category, disjoint_pair_category,
    ]
    everything = list(corpus) + [mk(f) for mk in named for f in (QQ, F5)]
    for cat in everything:
        assert is_fibration(AInfFunctor.identity(cat)).verdict is True

    # counterexample: F^1 misses the degree-1 line downstairs
    line = category_from_tables(
        F5, ["*"], {("*", "*"): {0: ["e"], 1: ["y"]}}, {}, [], {"*": "e"}
    )
    v1 = is_fibration(_unit_only_functor(point_category(F5), line))
    assert v1.verdict is False
    assert v1.surjectivity_failures == ((("*", "*"), 1),)

    # counterexample: an isomorphism class downstairs with no lift
    dual = category_from_tables(
        F5, ["*"], {("*", "*"): {0: ["e", "t"]}}, {},
        [(2, ("*", "*", "*"), ["t", "t"], [])], {"*": "e"},
    )
    v2 = is_fibration(_unit_only_functor(point_category(F5), dual))
    assert v2.verdict is False
    assert set(v2.isofibration_failures) == {
        ("*", "[e] + %s[t]" % (("%d*" % c) if c != 1 else ""), "*") for c in (1, 2, 3, 4)
    }
    assert time.monotonic() - t0 < 10


def _mask(text):
    return re.sub(r'"(timing_ms|total_ms)": \d+', r'"\1": 0', text)


def _cli(manifest, *flags):
    proc = subprocess.run(
        [sys.executable, "-m", "rectify_kit.cli", "run", str(manifest), *flags],
        capture_output=True, text=True,
    )
    return proc.stdout


def test_criterion_9_cli_report_determinism():
    t0 = time.monotonic()
    manifests = ["basic.json", "fork.json", "nonassoc.json", "functor.json", "adjunction.json"]
    for name in manifests:
        path = DATA / name
        first = _cli(path)
        second = _cli(path)
        parallel = _cli(path, "--jobs", "4")
        assert json.loads(first)["format"] == "rectify-kit-report/1"
        assert _mask(first) == _mask(second)
        assert _mask(first) == _mask(parallel)
    assert time.monotonic() - t0 < 30
