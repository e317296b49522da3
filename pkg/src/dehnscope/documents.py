"""The JSON input document: strict parsing, canonical serialization, conversion to algebras."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import (FieldNotSplit, InvalidAlgebra, NonCommutingAction,
                     NotADerivation, ParseError, StructureError, ValidationError)
from .exactla import RationalMatrix
from .liecore import FieldTag, GradedLieAlgebra, validate
from .weightmod import DerivationAction, UngradedAlgebra, weights_from_derivations

SCHEMA = "dehnscope/v1"
_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


@dataclass(frozen=True)
class Generator:
    label: str
    weight: tuple | None
    field: FieldTag


@dataclass(frozen=True)
class BracketEntry:
    a: str
    b: str
    value: tuple  # ((label, Fraction), ...)


@dataclass(frozen=True)
class InputDocument:
    name: str
    acting_rank: int
    mode: str
    generators: tuple
    brackets: tuple = ()
    derivations: tuple | None = None  # tuple of matrices, each a tuple of rows
    schema: str = SCHEMA


def parse_rational(s, locus: str) -> Fraction:
    if not isinstance(s, str) or not _RATIONAL.match(s):
        raise ParseError(f"expected a rational string like \"-3/4\", got {json.dumps(s)}", locus)
    if "/" in s:
        p, q = s.split("/")
        if int(q) == 0:
            raise ParseError("zero denominator", locus)
        return Fraction(int(p), int(q))
    return Fraction(int(s))


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _expect(obj, kind, locus):
    if not isinstance(obj, kind) or (kind is int and isinstance(obj, bool)):
        name = {dict: "an object", list: "a list", str: "a string", int: "an integer"}[kind]
        raise ParseError(f"expected {name}", locus)
    return obj


def _keys(obj: dict, required: set, optional: set, locus: str):
    unknown = set(obj) - required - optional
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", locus)
    missing = required - set(obj)
    if missing:
        raise ParseError(f"missing field(s) {sorted(missing)}", locus)


def _parse_field(obj, locus) -> FieldTag:
    _expect(obj, dict, locus)
    _keys(obj, {"kind", "characteristic"}, {"residue_cardinality"}, locus)
    kind = _expect(obj["kind"], str, locus + ".kind")
    char = _expect(obj["characteristic"], int, locus + ".characteristic")
    res = obj.get("residue_cardinality")
    if res is not None:
        _expect(res, int, locus + ".residue_cardinality")
    try:
        return FieldTag(kind, char, res)
    except StructureError as e:
        raise ParseError(str(e), locus) from None


def field_to_json(f: FieldTag) -> dict:
    out = {"kind": f.kind, "characteristic": f.characteristic}
    if f.residue_cardinality is not None:
        out["residue_cardinality"] = f.residue_cardinality
    return out


def parse_document(text: str) -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, f"line {e.lineno}, column {e.colno}") from None
    return document_from_json(raw)


def document_from_json(raw) -> InputDocument:
    _expect(raw, dict, "document")
    mode = raw.get("mode")
    if mode not in ("diagram", "derivations"):
        raise ParseError("mode must be \"diagram\" or \"derivations\"", "mode")
    required = {"schema", "name", "acting_rank", "mode", "generators", "brackets"}
    if mode == "derivations":
        required = required | {"derivations"}
    _keys(raw, required, set(), "document")
    if raw["schema"] != SCHEMA:
        raise ParseError(f"unsupported schema {raw['schema']!r}, expected {SCHEMA!r}", "schema")
    name = _expect(raw["name"], str, "name")
    rank = _expect(raw["acting_rank"], int, "acting_rank")
    if rank < 1:
        raise ParseError("acting_rank must be at least 1", "acting_rank")

    gens = []
    seen = set()
    for i, g in enumerate(_expect(raw["generators"], list, "generators")):
        loc = f"generators[{i}]"
        _expect(g, dict, loc)
        if mode == "diagram":
            _keys(g, {"label", "weight", "field"}, set(), loc)
        else:
            _keys(g, {"label", "field"}, set(), loc)
        label = _expect(g["label"], str, loc + ".label")
        if not label:
            raise ParseError("empty label", loc + ".label")
        if label in seen:
            raise ParseError(f"duplicate label {label!r}", loc + ".label")
        seen.add(label)
        weight = None
        if mode == "diagram":
            w = _expect(g["weight"], list, loc + ".weight")
            if len(w) != rank:
                raise ParseError(f"weight has length {len(w)}, acting_rank is {rank}", loc + ".weight")
            weight = tuple(parse_rational(x, f"{loc}.weight[{k}]") for k, x in enumerate(w))
        gens.append(Generator(label, weight, _parse_field(g["field"], loc + ".field")))

    brackets = []
    pairs = set()
    for i, b in enumerate(_expect(raw["brackets"], list, "brackets")):
        loc = f"brackets[{i}]"
        _expect(b, dict, loc)
        _keys(b, {"a", "b", "value"}, set(), loc)
        a = _expect(b["a"], str, loc + ".a")
        c = _expect(b["b"], str, loc + ".b")
        for lab, sub in ((a, ".a"), (c, ".b")):
            if lab not in seen:
                raise ParseError(f"unknown label {lab!r}", loc + sub)
        if a == c:
            raise ParseError("bracket of a generator with itself", loc)
        key = frozenset((a, c))
        if key in pairs:
            raise ParseError(f"bracket [{a}, {c}] given twice", loc)
        pairs.add(key)
        terms = []
        for k, t in enumerate(_expect(b["value"], list, loc + ".value")):
            tl = f"{loc}.value[{k}]"
            if not isinstance(t, list) or len(t) != 2:
                raise ParseError("expected [label, coefficient]", tl)
            lab = _expect(t[0], str, tl)
            if lab not in seen:
                raise ParseError(f"unknown label {lab!r}", tl)
            terms.append((lab, parse_rational(t[1], tl + "[1]")))
        brackets.append(BracketEntry(a, c, tuple(terms)))

    derivations = None
    if mode == "derivations":
        n = len(gens)
        mats = []
        for i, m in enumerate(_expect(raw["derivations"], list, "derivations")):
            loc = f"derivations[{i}]"
            _expect(m, list, loc)
            if len(m) != n:
                raise ParseError(f"expected {n} rows", loc)
            rows = []
            for r, row in enumerate(m):
                _expect(row, list, f"{loc}[{r}]")
                if len(row) != n:
                    raise ParseError(f"expected {n} entries", f"{loc}[{r}]")
                rows.append(tuple(parse_rational(x, f"{loc}[{r}][{c}]") for c, x in enumerate(row)))
            mats.append(tuple(rows))
        if len(mats) != rank:
            raise ParseError(f"{len(mats)} derivations given, acting_rank is {rank}", "derivations")
        derivations = tuple(mats)
    return InputDocument(name, rank, mode, tuple(gens), tuple(brackets), derivations)


def document_to_json(doc: InputDocument) -> dict:
    gens = []
    for g in doc.generators:
        item = {"label": g.label}
        if doc.mode == "diagram":
            item["weight"] = [format_rational(x) for x in g.weight]
        item["field"] = field_to_json(g.field)
        gens.append(item)
    out = {
        "schema": doc.schema,
        "name": doc.name,
        "acting_rank": doc.acting_rank,
        "mode": doc.mode,
        "generators": gens,
        "brackets": [{"a": b.a, "b": b.b,
                      "value": [[lab, format_rational(c)] for lab, c in b.value]}
                     for b in doc.brackets],
    }
    if doc.mode == "derivations":
        out["derivations"] = [[[format_rational(x) for x in row] for row in m]
                              for m in doc.derivations]
    return out


def serialize_document(doc: InputDocument) -> str:
    return json.dumps(document_to_json(doc), indent=2, ensure_ascii=False) + "\n"


def _bracket_map(doc: InputDocument) -> dict:
    return {(b.a, b.b): dict(b.value) for b in doc.brackets}


def to_algebra(doc: InputDocument) -> GradedLieAlgebra:
    """Build and validate the graded algebra; raises ValidationError on failure."""
    try:
        if doc.mode == "diagram":
            g = GradedLieAlgebra.build(
                doc.acting_rank, [(x.label, x.weight, x.field) for x in doc.generators],
                _bracket_map(doc))
        else:
            u = UngradedAlgebra.build([(x.label, x.field) for x in doc.generators],
                                      _bracket_map(doc))
            mats = tuple(RationalMatrix.from_rows(m, len(doc.generators))
                         for m in doc.derivations)
            g, _ = weights_from_derivations(u, DerivationAction(mats))
    except InvalidAlgebra as e:
        raise ValidationError(e.violations) from None
    except (NotADerivation, NonCommutingAction, FieldNotSplit, StructureError) as e:
        raise ValidationError([f"{type(e).__name__}: {e}"]) from None
    problems = validate(g)
    if problems:
        raise ValidationError(problems)
    return g


def from_algebra(g: GradedLieAlgebra, name: str) -> InputDocument:
    gens = tuple(Generator(lab, tuple(w), f) for lab, w, f in zip(g.labels, g.weights, g.fields))
    brackets = []
    for (i, j) in sorted(g.brackets):
        val = tuple((g.labels[k], c) for k, c in sorted(g.brackets[(i, j)].items()) if c)
        if val:
            brackets.append(BracketEntry(g.labels[i], g.labels[j], val))
    return InputDocument(name, g.acting_rank, "diagram", gens, tuple(brackets))


def read_document(path: str) -> InputDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError(f"cannot read file: {e.strerror}", path) from None
    except UnicodeDecodeError:
        raise ParseError("file is not valid UTF-8", path) from None
    return parse_document(text)

