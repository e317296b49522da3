"""Command line front end: ``dehnscope analyze | family | selftest``."""
from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import families as fam
from .classify import DehnClass
from .documents import from_algebra, read_document, serialize_document, to_algebra
from .errors import (InvalidParameter, ParseError, StarConditionViolated, StructureError,
                     UnknownFamily, ValidationError)
from .liecore import FieldTag
from .report import build_report, render_json, render_text

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


def _use_color(stream) -> bool:
    return "NO_COLOR" not in os.environ and hasattr(stream, "isatty") and stream.isatty()


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(rep: dict, args) -> str:
    if args.format == "json":
        return render_json(rep)
    color = args.out is None and _use_color(sys.stdout)
    return render_text(rep, citations=args.citations, color=color)


def cmd_analyze(args) -> int:
    try:
        doc = read_document(args.file)
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        g = to_algebra(doc)
    except ValidationError as e:
        print(str(e), file=sys.stderr)
        return EXIT_INVALID
    rep = build_report(g, doc.name, homology=not args.no_homology, jobs=args.jobs,
                       td_volume_factor=args.td_volume_factor,
                       arch_log_base=args.arch_log_base,
                       facts=fam.recognized_facts(g))
    _emit(_render(rep, args), args.out)
    return EXIT_OK


def _vector(text: str) -> tuple:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())
    except ValueError:
        raise InvalidParameter(f"cannot read {text!r} as a comma-separated rational vector") from None


def _field_from_args(args) -> FieldTag:
    if args.field == "arch":
        if args.residue is not None or args.characteristic:
            raise InvalidParameter("--residue and --characteristic need --field nonarch")
        return FieldTag.arch()
    try:
        return FieldTag.nonarch(args.residue, args.characteristic)
    except StructureError as e:
        raise InvalidParameter(str(e)) from None


def model_from_args(args) -> fam.FamilyModel:
    name = args.name
    if name not in fam.FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(fam.FAMILIES)}")
    params = {}
    if name in ("abels", "sol", "hall_a3"):
        params["field"] = _field_from_args(args)
    if name == "abels":
        params["d"] = 4 if args.d is None else args.d
    if name == "gdv":
        params["d"] = 2 if args.d is None else args.d
        params["V"] = [_vector(v) for v in args.v]
    if name == "heintze":
        params["weights"] = _vector(args.weights) if args.weights else (1, 1)
    if name == "baumslag_host":
        params["p"] = 2 if args.p is None else args.p
    return fam.build(name, **params)


def cmd_family(args) -> int:
    try:
        model = model_from_args(args)
    except (UnknownFamily, InvalidParameter, StarConditionViolated) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    text = serialize_document(from_algebra(model.algebra, model.name))
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def observed_values(model: fam.FamilyModel) -> dict:
    """Flatten the pipeline output for a model into the keys used by ``known``."""
    rep = build_report(model.algebra, model.name, facts=fam.recognized_facts(model.algebra))
    t, h, d = rep["tameness"], rep["homology"], rep["dehn"]
    return {
        "tame": t["tame"],
        "strongly_2tame": t["strongly_2tame"],
        "two_tame": t["two_tame"],
        "h2_zero": h["h2_zero"],
        "cp": d["cp"],
        "dehn_lower": d["lower"],
        "dehn_upper": d["upper"],
        "dehn_exact": d["exact"],
        "cone_dimension": rep["cone_dimension"],
        "hyperbolic": rep["hyperbolic"],
        "p0": None if rep["p0"] is None else rep["p0"]["exact"],
        "rules": " ".join(r["rule"] for r in d["rules_fired"]),
    }


def selftest(models=None, stream=None) -> int:
    """Check every known entry of every fixture; returns the number of mismatches."""
    stream = stream or sys.stdout
    models = fam.fixtures() if models is None else models
    failures = checks = 0
    for m in models:
        seen = observed_values(m)
        for key, known in sorted(m.known.items()):
            checks += 1
            got = seen.get(key)
            ok = (known.value in got.split()) if key == "rules" else got == known.value
            status = "PASS" if ok else "FAIL"
            failures += not ok
            line = f"{status} {m.name} {key}: expected {known.value!r}, got {got!r}"
            print(line, file=stream)
    print(f"{checks - failures}/{checks} checks passed", file=stream)
    return failures


def cmd_selftest(args) -> int:
    return EXIT_OK if selftest() == 0 else EXIT_INVALID


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dehnscope",
                                description="Dehn function and tameness analysis of "
                                            "standard solvable groups given by graded "
                                            "nilpotent Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze an input document")
    a.add_argument("file")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--out", help="write the report to this path")
    a.add_argument("--no-homology", action="store_true",
                   help="skip Chevalley-Eilenberg computations")
    a.add_argument("--citations", action="store_true",
                   help="print the statement behind each fired rule")
    a.add_argument("--jobs", type=int, default=1,
                   help="threads for per-weight homology components")
    a.add_argument("--td-volume-factor", type=int, default=1,
                   help="volume factor of the totally disconnected part (for p0)")
    a.add_argument("--arch-log-base", type=int, default=None,
                   help="read archimedean weights in units of log(BASE) for varpi_G")
    a.set_defaults(func=cmd_analyze)

    f = sub.add_parser("family", help="emit a document for a named family")
    f.add_argument("name")
    f.add_argument("--d", type=int)
    f.add_argument("--field", choices=("arch", "nonarch"), default="arch")
    f.add_argument("--residue", type=int)
    f.add_argument("--characteristic", type=int, default=0)
    f.add_argument("--v", action="append", default=[], metavar="VECTOR",
                   help="basis vector of V, e.g. \"1,1,-1\" (repeatable)")
    f.add_argument("--weights", help="comma-separated positive weights (heintze)")
    f.add_argument("--p", type=int, help="prime (baumslag_host)")
    f.add_argument("--emit", help="write the document to this path")
    f.set_defaults(func=cmd_family)

    s = sub.add_parser("selftest", help="check all fixtures against their known values")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return EXIT_PARSE
    if getattr(args, "td_volume_factor", 1) < 1:
        print("error: --td-volume-factor must be at least 1", file=sys.stderr)
        return EXIT_PARSE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
