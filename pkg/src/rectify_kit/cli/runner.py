"""Task execution and report assembly.

Each task runs one engine entry point against one named entity and yields
a status: "pass", "fail", "indeterminate" (a bounded search ended without
a certificate either way), or "input-error".  The report is a single JSON
document; every list inside it is sorted, so two runs over the same
manifest differ at most in the timing fields.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..ainf import check_ainf_relations, cohomology_category, is_quasi_equivalence
from ..barcobar import counit_map, rectify, stabilization_report, unit_map
from ..errors import InputError
from ..fibcheck import is_fibration, is_isofibration
from ..relcat import (
    RelativeFunctor,
    check_dk_adjunction,
    check_localization_equivalence,
    hammock_pi0,
    localize,
    render_word,
)
from .manifest import Manifest, Task

PASS = "pass"
FAIL = "fail"
INDET = "indeterminate"
INERR = "input-error"

DEFAULT_ARITY_BOUND = 6
DEFAULT_LENGTH_BOUND = 4
DEFAULT_WORD_BOUND = 3

REPORT_TAG = "rectify-kit-report/1"


@dataclass
class Defaults:
    """Flag-level fallbacks applied when a task omits a bound."""

    arity_bound: Optional[int] = None
    length_bound: Optional[int] = None
    word_bound: Optional[int] = None
    window: Optional[tuple] = None


def _pairkey(pair) -> str:
    return "%s->%s" % pair


def _strkey(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, tuple) and len(k) == 2 and all(isinstance(p, str) for p in k):
        return _pairkey(k)
    return str(k)


def _jsonable(v):
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (set, frozenset)):
        return sorted(str(_jsonable(x)) for x in v)
    if isinstance(v, dict):
        return {_strkey(k): _jsonable(val) for k, val in v.items()}
    return str(v)


def _relation_failures(rep) -> list:
    return [
        {
            "arity": f.arity,
            "chain": list(f.chain),
            "inputs": list(f.inputs),
            "residual": [[lab, val] for (lab, val) in f.residual],
        }
        for f in rep.failures
    ]


def _space_dims(sp) -> dict:
    return {str(d): sp.dim(d) for d in sorted(sp.degrees()) if sp.dim(d)}


def _bound(params: dict, key: str, flag_value, fallback: int) -> int:
    v = params.get(key)
    if v is None:
        v = flag_value
    if v is None:
        v = fallback
    return v


def _t_validate(cat, params, dfl):
    bound = params.get("arity_bound", dfl.arity_bound)
    if bound is None:
        bound = min(DEFAULT_ARITY_BOUND, cat.arity_bound)
    rep = check_ainf_relations(cat, bound)
    details = {"checked_arity": rep.checked_arity, "violations": _relation_failures(rep)}
    return (FAIL if rep.failures else PASS), details


def _t_cohomology(cat, params, dfl):
    h = cohomology_category(cat)
    dims = {}
    for pair in sorted(h.homs):
        sp = h.homs[pair]
        if sp.total_dim():
            dims[_pairkey(pair)] = _space_dims(sp)
    return PASS, {"hom_dims": dims}


def _t_quasi_equiv(fun, params, dfl):
    res = is_quasi_equivalence(fun)
    status = {True: PASS, False: FAIL, None: INDET}[res.verdict]
    details = {
        "verdict": res.verdict,
        "arity_checked": res.arity_checked,
        "hom_quasi_iso": {_pairkey(p): v for p, v in sorted(res.hom_quasi_iso.items())},
        "witnesses": _jsonable(res.witnesses),
        "notes": list(res.notes),
    }
    return status, details


def _t_rectify(cat, params, dfl):
    bound = _bound(params, "length_bound", dfl.length_bound, DEFAULT_LENGTH_BOUND)
    stage = rectify(cat, bound)
    cert = stage.certificate
    dims = {}
    for pair in sorted(stage.spaces):
        sp = stage.spaces[pair]
        if sp.total_dim():
            dims[_pairkey(pair)] = _space_dims(sp)
    details = {
        "length_bound": bound,
        "certificate": {
            "kind": cert.kind,
            "length_bound": cert.length_bound,
            "squared_zero": cert.squared_zero,
            "word_counts": _jsonable(cert.word_counts),
            "notes": list(cert.notes),
        },
        "hom_dims": dims,
    }
    return (PASS if cert.squared_zero else FAIL), details


def _t_unit_check(cat, params, dfl):
    bound = _bound(params, "length_bound", dfl.length_bound, DEFAULT_LENGTH_BOUND)
    fun = unit_map(cat, bound)
    rep = fun.report
    details = {
        "length_bound": bound,
        "checked_arity": rep.checked_arity,
        "violations": _relation_failures(rep),
    }
    return (FAIL if rep.failures else PASS), details


def _t_counit_check(cat, params, dfl):
    bound = _bound(params, "length_bound", dfl.length_bound, DEFAULT_LENGTH_BOUND)
    fun = counit_map(cat, bound)
    rep = fun.report
    per = rep.quasi_iso
    all_qi = all(v["quasi_iso"] for v in per.values())
    # a failing pair whose dimensions have stabilized cannot recover at a
    # deeper stage: that is a definite failure, not a bound artifact
    hard_fail = any((not v["quasi_iso"]) and v["stable"] for v in per.values())
    status = PASS if all_qi else (FAIL if hard_fail else INDET)
    details = {
        "length_bound": bound,
        "checked_arity": rep.checked_arity,
        "pairs": {_pairkey(p): dict(v) for p, v in sorted(per.items())},
        "composition_pairs": rep.composition_pairs,
        "note": rep.note,
    }
    return status, details


def _t_stabilize(cat, params, dfl):
    bound = _bound(params, "length_bound", dfl.length_bound, DEFAULT_LENGTH_BOUND)
    window = params.get("window") or dfl.window or cat.window
    rep = stabilization_report(cat, bound, window)
    stabilized_at = {
        _pairkey(p): {str(d): v for d, v in sorted(m.items())}
        for p, m in sorted(rep.stabilized_at.items())
    }
    stable = all(v is not None for m in rep.stabilized_at.values() for v in m.values())
    details = {
        "length_max": rep.length_max,
        "window": list(rep.window),
        "dims": _jsonable(rep.dims),
        "stabilized_at": stabilized_at,
        "stable": stable,
    }
    return (PASS if stable else INDET), details


def _t_localize(rel, params, dfl):
    bound = _bound(params, "word_bound", dfl.word_bound, DEFAULT_WORD_BOUND)
    loc = localize(rel, bound)
    classes = {}
    for pair in sorted(loc.hom_classes):
        cls = loc.hom_classes[pair]
        if cls:
            classes[_pairkey(pair)] = [render_word(s, toks) for (s, toks) in cls]
    details = {
        "word_bound": bound,
        "stabilized": loc.stabilized,
        "composition_closed": loc.composition_closed,
        "open_compositions": len(loc.open_compositions),
        "class_count": {_pairkey(p): n for p, n in sorted(loc.class_count().items())},
        "classes": classes,
    }
    return (PASS if loc.stabilized else INDET), details


def _t_hammock(rel, params, dfl):
    bound = _bound(params, "word_bound", dfl.word_bound, DEFAULT_WORD_BOUND)
    h = hammock_pi0(rel, bound)
    details = {
        "width_bound": bound,
        "well_defined": h.well_defined,
        "bijective": h.bijective,
        "hammock_class_count": {_pairkey(p): n for p, n in sorted(h.category.class_count().items())},
        "zigzag_class_count": {_pairkey(p): n for p, n in sorted(h.localization.class_count().items())},
    }
    # a mismatch below the bound is indistinguishable from a bound artifact,
    # so the comparison never hard-fails
    return (PASS if (h.well_defined and h.bijective) else INDET), details


def _t_dk(adj, params, dfl):
    rep = check_dk_adjunction(adj)
    details = {"failures": _jsonable(list(rep.failures))}
    return (PASS if rep.verdict else FAIL), details


def _t_loc_equiv(adj, params, dfl):
    bound = _bound(params, "word_bound", dfl.word_bound, DEFAULT_WORD_BOUND)
    v = check_localization_equivalence(adj, bound)
    details = {
        "word_bound": bound,
        "status": v.status,
        "witnesses": _jsonable(v.witnesses),
        "notes": list(v.notes),
    }
    return (PASS if v.is_true else INDET), details


def _t_fibration(fun, params, dfl):
    if isinstance(fun, RelativeFunctor):
        rep = is_isofibration(fun)
        status = {"true": PASS, "false": FAIL, "inconclusive": INDET}[rep.status]
        details = {
            "mode": "finite",
            "status": rep.status,
            "failures": _jsonable(list(rep.failures)),
            "inconclusive": _jsonable(list(rep.inconclusive)),
        }
        return status, details
    v = is_fibration(fun)
    status = {True: PASS, False: FAIL, None: INDET}[v.verdict]
    details = {
        "mode": "linear",
        "verdict": v.verdict,
        "surjectivity_failures": _jsonable(list(v.surjectivity_failures)),
        "isofibration_failures": _jsonable(list(v.isofibration_failures)),
        "inconclusive": _jsonable(list(v.inconclusive)),
    }
    if v.verdict is True:
        details["acyclic"] = is_quasi_equivalence(fun).is_true
    return status, details


_DISPATCH = {
    "validate": _t_validate,
    "cohomology": _t_cohomology,
    "quasi-equiv": _t_quasi_equiv,
    "rectify": _t_rectify,
    "unit-check": _t_unit_check,
    "counit-check": _t_counit_check,
    "stabilize": _t_stabilize,
    "localize": _t_localize,
    "hammock-pi0": _t_hammock,
    "dk-adjunction": _t_dk,
    "loc-equiv": _t_loc_equiv,
    "fibration": _t_fibration,
}


def run_tasks(manifest: Manifest, tasks, defaults: Defaults, strict: bool = False, jobs: int = 1):
    """Execute tasks in declaration order and assemble the report.

    Returns (report dict, exit code).  Exit priority: any input error wins,
    then any failure, then any indeterminate verdict; --strict folds
    indeterminate into the failure exit without changing task statuses.
    """

    def one(task: Task) -> dict:
        _kind, obj = manifest.entities[task.entity]
        t0 = time.monotonic()
        try:
            status, details = _DISPATCH[task.op](obj, task.params, defaults)
            error = None
        except InputError as e:
            status, details, error = INERR, {}, str(e)
        entry = {
            "name": task.name,
            "op": task.op,
            "entity": task.entity,
            "status": status,
            "details": details,
            "timing_ms": int((time.monotonic() - t0) * 1000),
        }
        if error is not None:
            entry["error"] = error
        return entry

    t0 = time.monotonic()
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(one, tasks))
    else:
        entries = [one(t) for t in tasks]
    total_ms = int((time.monotonic() - t0) * 1000)

    counts = {PASS: 0, FAIL: 0, INDET: 0, INERR: 0}
    for e in entries:
        counts[e["status"]] += 1
    report = {
        "format": REPORT_TAG,
        "field": manifest.field_name,
        "manifest": os.path.basename(manifest.path),
        "entities": sorted(manifest.entities),
        "tasks": entries,
        "summary": {
            "pass": counts[PASS],
            "fail": counts[FAIL],
            "indeterminate": counts[INDET],
            "input-error": counts[INERR],
            "total": len(entries),
        },
        "timing": {"total_ms": total_ms},
    }
    if counts[INERR]:
        code = 1
    elif counts[FAIL] or (strict and counts[INDET]):
        code = 2
    elif counts[INDET]:
        code = 3
    else:
        code = 0
    return report, code


def render_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
