"""Manifest loading and entity construction.

A manifest is a single JSON document with a mandatory format tag, a
coefficient field, a list of named entities, and a list of tasks over
those entities.  Parse failures cite line and column with the offending
token; semantic failures cite the entity or task by name.  Rational
coefficients are written as integers or "p/q" strings, never floats.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from ..ainf import AInfCategory, AInfFunctor, category_from_tables
from ..errors import InputError
from ..exactlin import GF, QQ, FieldSpec
from ..relcat import (
    AdjunctionData,
    FiniteCategory,
    FiniteRelativeCategory,
    RelativeFunctor,
)

FORMAT_TAG = "rectify-kit/1"

OPS = (
    "validate",
    "cohomology",
    "quasi-equiv",
    "rectify",
    "unit-check",
    "counit-check",
    "stabilize",
    "localize",
    "hammock-pi0",
    "dk-adjunction",
    "loc-equiv",
    "fibration",
)

OP_ALIASES = {"check_ainf_relations": "validate"}

# manifest key that names the entity a task acts on, and the entity kinds
# that key may resolve to
OP_ENTITY_KEY = {
    "validate": "category",
    "cohomology": "category",
    "quasi-equiv": "functor",
    "rectify": "category",
    "unit-check": "category",
    "counit-check": "category",
    "stabilize": "category",
    "localize": "relative",
    "hammock-pi0": "relative",
    "dk-adjunction": "adjunction",
    "loc-equiv": "adjunction",
    "fibration": "functor",
}

OP_ENTITY_KINDS = {
    "validate": ("category",),
    "cohomology": ("category",),
    "quasi-equiv": ("functor",),
    "rectify": ("category",),
    "unit-check": ("category",),
    "counit-check": ("category",),
    "stabilize": ("category",),
    "localize": ("relative",),
    "hammock-pi0": ("relative",),
    "dk-adjunction": ("adjunction",),
    "loc-equiv": ("adjunction",),
    "fibration": ("functor", "relative_functor"),
}

TASK_PARAMS = ("arity_bound", "length_bound", "word_bound", "window")

ENTITY_KINDS = ("category", "relative", "functor", "relative_functor", "adjunction")


@dataclass
class Task:
    name: str
    op: str
    entity: str
    params: dict


@dataclass
class Manifest:
    path: str
    field_name: str
    field: FieldSpec
    entities: dict  # name -> (kind, object)
    tasks: list  # [Task] in declaration order


def parse_field(spec) -> FieldSpec:
    if spec == "Q":
        return QQ
    if isinstance(spec, str):
        m = re.fullmatch(r"F(\d+)", spec)
        if m:
            return GF(int(m.group(1)))
    raise InputError('unknown field %r; expected "Q" or "F<p>"' % (spec,))


def _token_at(text: str, pos: int) -> str:
    snippet = text[pos : pos + 24].split("\n", 1)[0].strip()
    if not snippet:
        snippet = text[max(0, pos - 24) : pos].split("\n")[-1].strip()
    return snippet[:24] if snippet else "<end of input>"


def _coeff(field: FieldSpec, value, where: str):
    if isinstance(value, bool) or isinstance(value, float):
        raise InputError("%s: coefficient %r is not an exact number; use an integer or a \"p/q\" string" % (where, value))
    if isinstance(value, int):
        return field.coerce(value)
    if isinstance(value, str):
        if not field.is_rational:
            raise InputError("%s: coefficient %r is a string but the field has characteristic %d" % (where, value, field.characteristic))
        try:
            return field.coerce(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise InputError("%s: cannot read %r as a rational p/q" % (where, value))
    raise InputError("%s: coefficient %r has unusable type" % (where, value))


def _need(decl: dict, key: str, typ, where: str):
    if key not in decl:
        raise InputError("%s: missing key %r" % (where, key))
    v = decl[key]
    if typ is not None and not isinstance(v, typ):
        raise InputError("%s: key %r must be %s" % (where, key, typ.__name__))
    return v


def _check_keys(decl: dict, allowed, where: str):
    for k in decl:
        if k not in allowed:
            raise InputError("%s: unknown key %r" % (where, k))


def _window(raw, where: str) -> Optional[tuple]:
    if raw is None:
        return None
    ok = isinstance(raw, (list, tuple)) and len(raw) == 2 and all(
        isinstance(v, int) and not isinstance(v, bool) for v in raw
    )
    if not ok:
        raise InputError("%s: window must be a pair of integers [lo, hi]" % where)
    return (raw[0], raw[1])


def _morphism_index(decl: dict, where: str, with_degree: bool) -> dict:
    """name -> (src, tgt[, degree]); names unique across the whole entity."""
    rows = _need(decl, "morphisms", list, where)
    width = 4 if with_degree else 3
    index: dict = {}
    for row in rows:
        if not isinstance(row, list) or len(row) != width:
            raise InputError("%s: each morphism must be a %d-element row" % (where, width))
        name = row[0]
        if not isinstance(name, str):
            raise InputError("%s: morphism name %r must be a string" % (where, name))
        if name in index:
            raise InputError("%s: morphism name %r repeats" % (where, name))
        if with_degree and (isinstance(row[3], bool) or not isinstance(row[3], int)):
            raise InputError("%s: degree of %r must be an integer" % (where, name))
        index[name] = tuple(row[1:])
    return index


def _build_category(decl: dict, field: FieldSpec, where: str) -> AInfCategory:
    _check_keys(
        decl,
        ("name", "kind", "objects", "morphisms", "differentials", "operations",
         "units", "arity_bound", "window"),
        where,
    )
    objects = _need(decl, "objects", list, where)
    morphisms = _morphism_index(decl, where, with_degree=True)

    hom_labels: dict = {}
    for name, (s, t, d) in morphisms.items():
        hom_labels.setdefault((s, t), {}).setdefault(d, []).append(name)

    differentials: dict = {}
    for row in decl.get("differentials", []):
        if not isinstance(row, list) or len(row) != 3:
            raise InputError("%s: each differential entry must be [from, to, coeff]" % where)
        src, dst, cv = row
        if src not in morphisms or dst not in morphisms:
            raise InputError("%s: differential entry uses unknown morphism %r" % (where, src if src not in morphisms else dst))
        pair = morphisms[src][:2]
        if morphisms[dst][:2] != pair:
            raise InputError("%s: differential %s -> %s crosses hom pairs" % (where, src, dst))
        differentials.setdefault(pair, []).append((src, dst, _coeff(field, cv, where)))

    operations = []
    for op in decl.get("operations", []):
        if not isinstance(op, dict):
            raise InputError("%s: each operation must be an object" % where)
        _check_keys(op, ("arity", "inputs", "output"), where)
        n = _need(op, "arity", int, where)
        inputs = _need(op, "inputs", list, where)
        if len(inputs) != n:
            raise InputError("%s: operation lists %d inputs for arity %d" % (where, len(inputs), n))
        for lab in inputs:
            if lab not in morphisms:
                raise InputError("%s: operation input %r is not a declared morphism" % (where, lab))
        # inputs are outermost first; the object chain is read off the
        # endpoints starting from the innermost input
        chain = [morphisms[inputs[-1]][0]]
        for lab in reversed(inputs):
            s, t, _ = morphisms[lab]
            if s != chain[-1]:
                raise InputError("%s: operation inputs do not chain at %r" % (where, lab))
            chain.append(t)
        out = []
        for term in _need(op, "output", list, where):
            if not isinstance(term, list) or len(term) != 2:
                raise InputError("%s: each output term must be [name, coeff]" % where)
            out.append((term[0], _coeff(field, term[1], where)))
        operations.append((n, tuple(chain), list(inputs), out))

    units = _need(decl, "units", dict, where)
    bound = decl.get("arity_bound", 6)
    if isinstance(bound, bool) or not isinstance(bound, int):
        raise InputError("%s: arity_bound must be an integer" % where)
    try:
        return category_from_tables(
            field,
            objects,
            hom_labels,
            differentials,
            operations,
            units,
            arity_bound=bound,
            window=_window(decl.get("window"), where),
        )
    except InputError as e:
        raise InputError("%s: %s" % (where, e))


def _build_relative(decl: dict, where: str) -> FiniteRelativeCategory:
    _check_keys(
        decl,
        ("name", "kind", "objects", "morphisms", "identities", "table",
         "weak_equivalences"),
        where,
    )
    objects = _need(decl, "objects", list, where)
    morphisms = _morphism_index(decl, where, with_degree=False)
    identities = _need(decl, "identities", dict, where)
    table = {}
    for row in _need(decl, "table", list, where):
        if not isinstance(row, list) or len(row) != 3:
            raise InputError("%s: each table entry must be [g, f, gf]" % where)
        g, f, gf = row
        if (g, f) in table:
            raise InputError("%s: table entry (%s, %s) repeats" % (where, g, f))
        table[(g, f)] = gf
    weq = _need(decl, "weak_equivalences", list, where)
    try:
        cat = FiniteCategory(objects, morphisms, identities, table)
        return FiniteRelativeCategory(cat, frozenset(weq))
    except InputError as e:
        raise InputError("%s: %s" % (where, e))


def _label_keys(cat: AInfCategory, where: str) -> dict:
    """label -> (pair, key) over the whole category; labels must be unique."""
    out: dict = {}
    for x in cat.objects:
        for y in cat.objects:
            for key in cat.hom_basis(x, y):
                lab = cat.basis_label((x, y), key)
                if lab in out:
                    raise InputError("%s: label %r is ambiguous in the referenced category" % (where, lab))
                out[lab] = ((x, y), key)
    return out


def _build_functor(decl: dict, field: FieldSpec, entities: dict, where: str) -> AInfFunctor:
    _check_keys(decl, ("name", "kind", "source", "target", "objects", "components"), where)
    src = _entity(entities, _need(decl, "source", str, where), ("category",), where)
    tgt = _entity(entities, _need(decl, "target", str, where), ("category",), where)
    omap = _need(decl, "objects", dict, where)
    src_idx = _label_keys(src, where)
    tgt_idx = _label_keys(tgt, where)
    components: dict = {}
    for comp in decl.get("components", []):
        if not isinstance(comp, dict):
            raise InputError("%s: each component must be an object" % where)
        _check_keys(comp, ("arity", "inputs", "output"), where)
        n = _need(comp, "arity", int, where)
        inputs = _need(comp, "inputs", list, where)
        if len(inputs) != n:
            raise InputError("%s: component lists %d inputs for arity %d" % (where, len(inputs), n))
        keys = []
        for lab in inputs:
            if lab not in src_idx:
                raise InputError("%s: component input %r is not a source morphism" % (where, lab))
            keys.append(src_idx[lab])
        chain = [keys[-1][0][0]]
        for (pair, _k) in reversed(keys):
            if pair[0] != chain[-1]:
                raise InputError("%s: component inputs do not chain at hom(%s, %s)" % (where, *pair))
            chain.append(pair[1])
        out_el: dict = {}
        for term in _need(comp, "output", list, where):
            if not isinstance(term, list) or len(term) != 2:
                raise InputError("%s: each output term must be [name, coeff]" % where)
            lab, cv = term
            if lab not in tgt_idx:
                raise InputError("%s: component output %r is not a target morphism" % (where, lab))
            key = tgt_idx[lab][1]
            c = _coeff(field, cv, where)
            out_el[key] = field.add(out_el.get(key, field.zero()), c)
        btuple = tuple(k for (_p, k) in keys)
        components.setdefault((n, tuple(chain)), {})[btuple] = out_el
    try:
        return AInfFunctor(src, tgt, omap, components)
    except InputError as e:
        raise InputError("%s: %s" % (where, e))


def _build_relative_functor(decl: dict, entities: dict, where: str) -> RelativeFunctor:
    _check_keys(decl, ("name", "kind", "source", "target", "objects", "morphisms"), where)
    src = _entity(entities, _need(decl, "source", str, where), ("relative",), where)
    tgt = _entity(entities, _need(decl, "target", str, where), ("relative",), where)
    omap = _need(decl, "objects", dict, where)
    mmap = _need(decl, "morphisms", dict, where)
    try:
        return RelativeFunctor(src, tgt, omap, mmap)
    except InputError as e:
        raise InputError("%s: %s" % (where, e))


def _build_adjunction(decl: dict, entities: dict, where: str) -> AdjunctionData:
    _check_keys(decl, ("name", "kind", "left", "right", "unit", "counit"), where)
    left = _entity(entities, _need(decl, "left", str, where), ("relative_functor",), where)
    right = _entity(entities, _need(decl, "right", str, where), ("relative_functor",), where)
    unit = _need(decl, "unit", dict, where)
    counit = _need(decl, "counit", dict, where)
    try:
        return AdjunctionData(left, right, unit, counit)
    except InputError as e:
        raise InputError("%s: %s" % (where, e))


def _entity(entities: dict, name: str, kinds, where: str):
    if name not in entities:
        raise InputError("%s: references undeclared entity %r" % (where, name))
    kind, obj = entities[name]
    if kind not in kinds:
        raise InputError(
            "%s: entity %r has kind %r; expected %s" % (where, name, kind, " or ".join(kinds))
        )
    return obj


def loads(text: str, path: str = "<manifest>", field_override: Optional[str] = None) -> Manifest:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(
            "%s: parse error at line %d column %d near %r: %s"
            % (path, e.lineno, e.colno, _token_at(text, e.pos), e.msg)
        )
    if not isinstance(doc, dict):
        raise InputError("%s: manifest root must be an object" % path)
    _check_keys(doc, ("format", "field", "entities", "tasks"), path)
    tag = doc.get("format")
    if tag != FORMAT_TAG:
        raise InputError('%s: manifest format must be %r, found %r' % (path, FORMAT_TAG, tag))
    field_name = field_override if field_override is not None else doc.get("field")
    if field_name is None:
        raise InputError("%s: missing key 'field'" % path)
    field = parse_field(field_name)

    decls = doc.get("entities", [])
    if not isinstance(decls, list):
        raise InputError("%s: 'entities' must be a list" % path)
    by_name: dict = {}
    for decl in decls:
        if not isinstance(decl, dict):
            raise InputError("%s: each entity must be an object" % path)
        name = decl.get("name")
        if not isinstance(name, str):
            raise InputError("%s: entity missing a string 'name'" % path)
        if name in by_name:
            raise InputError("%s: entity name %r repeats" % (path, name))
        kind = decl.get("kind")
        if kind not in ENTITY_KINDS:
            raise InputError("entity %r: unknown kind %r" % (name, kind))
        by_name[name] = decl

    # two passes: base objects first, then entities that reference them
    entities: dict = {}
    for phase in (("category", "relative"), ("functor", "relative_functor"), ("adjunction",)):
        for name, decl in by_name.items():
            kind = decl["kind"]
            if kind not in phase:
                continue
            where = "entity %r" % name
            if kind == "category":
                obj = _build_category(decl, field, where)
            elif kind == "relative":
                obj = _build_relative(decl, where)
            elif kind == "functor":
                obj = _build_functor(decl, field, entities, where)
            elif kind == "relative_functor":
                obj = _build_relative_functor(decl, entities, where)
            else:
                obj = _build_adjunction(decl, entities, where)
            entities[name] = (kind, obj)

    raw_tasks = doc.get("tasks", [])
    if not isinstance(raw_tasks, list):
        raise InputError("%s: 'tasks' must be a list" % path)
    tasks = []
    seen_tasks = set()
    for raw in raw_tasks:
        if not isinstance(raw, dict):
            raise InputError("%s: each task must be an object" % path)
        tname = raw.get("name")
        if not isinstance(tname, str):
            raise InputError("%s: task missing a string 'name'" % path)
        if tname in seen_tasks:
            raise InputError("task %r: name repeats" % tname)
        seen_tasks.add(tname)
        tasks.append(_parse_task(raw, tname, entities))
    return Manifest(path=path, field_name=field_name, field=field, entities=entities, tasks=tasks)


def _parse_task(raw: dict, tname: str, entities: dict) -> Task:
    where = "task %r" % tname
    op = raw.get("op")
    op = OP_ALIASES.get(op, op)
    if op not in OPS:
        raise InputError("%s: unknown op %r" % (where, raw.get("op")))
    ekey = OP_ENTITY_KEY[op]
    _check_keys(raw, ("name", "op", ekey) + TASK_PARAMS, where)
    ename = raw.get(ekey)
    if not isinstance(ename, str):
        raise InputError("%s: missing entity key %r" % (where, ekey))
    _entity(entities, ename, OP_ENTITY_KINDS[op], where)
    params = {}
    for k in TASK_PARAMS:
        if k in raw:
            v = raw[k]
            if k == "window":
                params[k] = _window(v, where)
            else:
                if isinstance(v, bool) or not isinstance(v, int):
                    raise InputError("%s: %s must be an integer" % (where, k))
                params[k] = v
    return Task(name=tname, op=op, entity=ename, params=params)


def load(path, field_override: Optional[str] = None) -> Manifest:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise InputError("cannot read manifest %s: %s" % (path, e))
    return loads(text, path=str(path), field_override=field_override)
