"""Assemble every verdict for one algebra into a report, and render it as text or JSON."""
from __future__ import annotations

import json
import warnings

from . import classify as cl
from .errors import MissingResidueCardinality, NotMixedType
from .homology import homology_detail, homology_dim, homology_profile, h2_zero_nonarch
from .liecore import GradedLieAlgebra
from .tameness import PAIR_READING, tameness_report
from .weightmod import diagram, exponential_radical, is_standard


def _w(w) -> list:
    return [str(x) for x in w]


def _pairs(pairs) -> list:
    return [[_w(a), _w(b)] for a, b in pairs]


def _certificate(c) -> dict:
    if c.inside:
        return {"verdict": "inside", "coefficients": _w(c.coefficients)}
    return {"verdict": "outside", "separator": _w(c.separator)}


def build_report(g: GradedLieAlgebra, name: str, *, homology: bool = True, jobs: int = 1,
                 td_volume_factor: int = 1, arch_log_base: int | None = None,
                 facts: dict | None = None) -> dict:
    """All verdicts for g.  ``facts`` maps keys to family metadata with a ``value`` and
    ``source``; they are listed in the notes and never feed a verdict."""
    diag = diagram(g)
    standard = is_standard(g)
    tam = tameness_report(diag)
    notes = []
    rep = {
        "name": name,
        "basis": list(g.labels),
        "acting_rank": g.acting_rank,
        "standard": standard,
        "weights": [{"weight": _w(e.weight), "field": e.field.short(),
                     "principal": e.principal, "multiplicity": e.multiplicity}
                    for e in diag.entries],
        "principal_weights": [_w(w) for w in diag.principal_weights()],
        "tameness": {
            "tame": tam.tame,
            "strongly_2tame": tam.strongly_2tame,
            "two_tame": tam.two_tame,
            "strong_witnesses": _pairs(tam.strong_witnesses),
            "principal_witnesses": _pairs(tam.principal_witnesses),
            "hull_certificate": _certificate(tam.hull_certificate),
            "interpretation": PAIR_READING,
        },
        "homology": None,
        "exponential_radical_dim": exponential_radical(g).dim,
        "cone_dimension": None,
        "hyperbolic": None,
        "dehn": None,
        "p0": None,
        "tac": None,
        "notes": notes,
    }
    if homology:
        det = homology_detail(g, 2, g.zero_weight())
        profile = homology_profile(g, 2, jobs)
        rep["homology"] = {
            "h2_zero": det.dim,
            "h2_zero_nonarch": h2_zero_nonarch(g),
            "h1_zero": homology_dim(g, 1),
            "h2_zero_kernel_dim": det.kernel_dim,
            "h2_zero_boundary_rank": det.image_rank,
            "h2_nonzero_weights": [[_w(gm), d] for gm, d in profile.items() if d],
        }
    for key, fact in sorted((facts or {}).items()):
        notes.append(f"family fact, not derived by the rules: {key} = {fact.value} ({fact.source})")
    if not standard:
        notes.append("zero is a principal weight, so the group is not standard solvable; "
                     "classification fields are omitted")
        return rep

    if all(f.archimedean for f in g.fields):
        rep["cone_dimension"] = cl.cone_dimension(g)
    else:
        notes.append("cone dimension is only computed when every field is archimedean")
    hyp = cl.hyperbolicity(g)
    rep["hyperbolic"] = str(hyp)
    if homology:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            verdict = cl.dehn_classify(g)
        rep["dehn"] = verdict.as_dict()
        notes.extend(verdict.notes)
    else:
        notes.append("homology skipped; Dehn classification needs it and is omitted")

    if hyp.hyperbolic:
        orientation = tam.hull_certificate.separator
        if hyp.kind == "totally_discontinuous":
            rep["p0"] = cl.p0(cl.CompactionData()).as_dict()
        else:
            data = cl.CompactionData.from_diagram(diag, orientation, td_volume_factor)
            rep["p0"] = cl.p0(data).as_dict()
            if hyp.kind == "mixed" and td_volume_factor == 1:
                notes.append("p0 uses a totally disconnected volume factor of 1; "
                             "pass --td-volume-factor to change it")
        if hyp.kind == "mixed":
            try:
                rep["tac"] = cl.tac_invariants(diag, orientation, arch_log_base).as_dict()
            except (NotMixedType, MissingResidueCardinality) as e:
                notes.append(f"TAC invariants unavailable: {e}")
    return rep


def render_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, ensure_ascii=False) + "\n"


class _Style:
    def __init__(self, color: bool):
        self.color = color

    def _wrap(self, code, s):
        return f"\033[{code}m{s}\033[0m" if self.color else s

    def head(self, s):
        return self._wrap("1", s)

    def flag(self, value):
        if isinstance(value, bool):
            return self._wrap("32" if value else "31", "yes" if value else "no")
        return "-" if value is None else str(value)


def _fmt_w(w) -> str:
    return "(" + ", ".join(w) + ")"


def render_text(rep: dict, citations: bool = False, color: bool = False) -> str:
    st = _Style(color)
    out = [st.head(f"== {rep['name']} =="),
           f"basis: {' '.join(rep['basis'])}",
           f"acting rank: {rep['acting_rank']}",
           f"standard: {st.flag(rep['standard'])}",
           "",
           st.head("weights")]
    for e in rep["weights"]:
        kind = "principal" if e["principal"] else "derived"
        out.append(f"  {_fmt_w(e['weight'])}  mult {e['multiplicity']}  {e['field']}  {kind}")
    t = rep["tameness"]
    out += ["", st.head("tameness"),
            f"  tame: {st.flag(t['tame'])}",
            f"  strongly 2-tame: {st.flag(t['strongly_2tame'])}",
            f"  2-tame: {st.flag(t['two_tame'])}"]
    cert = t["hull_certificate"]
    if cert["verdict"] == "inside":
        out.append(f"  0 in hull, coefficients {_fmt_w(cert['coefficients'])}")
    else:
        out.append(f"  0 outside hull, separator {_fmt_w(cert['separator'])}")
    for a, b in t["principal_witnesses"]:
        out.append(f"  principal pair {_fmt_w(a)} / {_fmt_w(b)} has 0 on its segment")
    h = rep["homology"]
    out += ["", st.head("homology")]
    if h is None:
        out.append("  skipped")
    else:
        out += [f"  H2 at weight 0: {h['h2_zero']} "
                f"(cycles {h['h2_zero_kernel_dim']}, boundaries {h['h2_zero_boundary_rank']})",
                f"  H2 at weight 0, nonarchimedean factor: {h['h2_zero_nonarch']}",
                f"  H1 at weight 0: {h['h1_zero']}"]
    out += ["", st.head("structure"),
            f"  exponential radical dimension: {rep['exponential_radical_dim']}",
            f"  cone dimension: {st.flag(rep['cone_dimension'])}",
            f"  hyperbolicity: {st.flag(rep['hyperbolic'])}"]
    if rep["p0"] is not None:
        out.append(f"  p0: {rep['p0']['exact']}  (~{rep['p0']['float']})")
    if rep["tac"] is not None:
        tac = rep["tac"]
        out.append(f"  s_G: {tac['s_G']}  q_G: {tac['q_G']}  "
                   f"varpi_G: {tac['varpi']['exact']}  (~{tac['varpi']['float']})")
    d = rep["dehn"]
    if d is not None:
        out += ["", st.head("Dehn function"),
                f"  compactly presented: {st.flag(d['cp'])}",
                f"  lower bound: {d['lower']}",
                f"  upper bound: {d['upper']}",
                f"  exact: {st.flag(d['exact'])}",
                "  rules: " + " ".join(r["rule"] for r in d["rules_fired"])]
        if citations:
            for r in d["rules_fired"]:
                out.append(f"    {r['rule']}: {r['citation']}")
                if r["witness"] is not None:
                    out.append(f"        witness: {json.dumps(r['witness'], ensure_ascii=False)}")
    if rep["notes"]:
        out += ["", st.head("notes")]
        out += [f"  - {n}" for n in rep["notes"]]
    return "\n".join(out) + "\n"
