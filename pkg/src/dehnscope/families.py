"""Named example groups as graded algebras with their known invariants attached."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exactla as la
from .classify import _check_star, gdv_cone_type, orthogonal_complement
from .errors import InvalidParameter, UnknownFamily
from .exactla import RationalMatrix
from .liecore import FieldTag, GradedLieAlgebra, _is_prime, validate
from .weightmod import DerivationAction, UngradedAlgebra, is_standard


@dataclass(frozen=True)
class Known:
    value: object
    source: str


@dataclass(frozen=True)
class FamilyModel:
    """An algebra plus expected pipeline outputs.

    ``known`` entries are checked by the self-test; ``facts`` are true statements
    about the group that the rule set cannot derive and travel as metadata.
    """

    name: str
    algebra: GradedLieAlgebra
    known: dict = field(default_factory=dict)
    facts: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        problems = validate(self.algebra)
        if problems:
            raise AssertionError(f"family {self.name} built an invalid algebra: {problems}")


def _field(f) -> FieldTag:
    if isinstance(f, FieldTag):
        return f
    if f in ("arch", "archimedean", None):
        return FieldTag.arch()
    if f in ("nonarch", "nonarchimedean"):
        return FieldTag.nonarch()
    raise InvalidParameter(f"unknown field {f!r}")


def _abels_label(d: int, i: int, j: int) -> str:
    return f"e{i}_{j}" if d >= 10 else f"e{i}{j}"


def _abels_weight(d: int, i: int, j: int) -> tuple:
    """t_i - t_j on the coordinates t_2..t_{d-1} (t_1 = t_d = 0)."""
    w = [0] * (d - 2)
    if 2 <= i <= d - 1:
        w[i - 2] += 1
    if 2 <= j <= d - 1:
        w[j - 2] -= 1
    return tuple(w)


def abels(d: int, field_tag=None) -> FamilyModel:
    """Upper unitriangular Lie algebra of size d graded by the interior diagonal."""
    if not isinstance(d, int) or d < 3:
        raise InvalidParameter("the Abels family needs d >= 3")
    f = _field(field_tag)
    basis, brackets = [], {}
    for i in range(1, d + 1):
        for j in range(i + 1, d + 1):
            basis.append((_abels_label(d, i, j), _abels_weight(d, i, j), f))
            for k in range(j + 1, d + 1):
                brackets[(_abels_label(d, i, j), _abels_label(d, j, k))] = {
                    _abels_label(d, i, k): 1}
    g = GradedLieAlgebra.build(d - 2, basis, brackets)
    known = {"tame": Known(False, "A_d over a local field is not tame for d >= 3")}
    facts = {}
    if d >= 4:
        known["two_tame"] = Known(True, "A_d is 2-tame for d >= 4")
        known["strongly_2tame"] = Known(False, "A_d is not strongly 2-tame for d >= 4")
        facts["dehn_exact"] = Known("quadratic", "A_d(K) has quadratic Dehn function for d >= 4")
    if f.archimedean:
        known["cone_dimension"] = Known(d - 2, "derived: the exponential radical is the whole algebra")
    else:
        known["cp"] = Known(d >= 4, "A_d(Z[1/p]) is finitely presented iff d >= 4")
    if d == 4:
        known["h2_zero"] = Known(0, "derived: ker d2 and im d3 at weight 0 are both one-dimensional")
        if f.archimedean:
            known["dehn_upper"] = Known("cubic", "derived: 2-tame with vanishing weight-zero H2")
    name = f"abels{d}" + ("" if f.archimedean else "_nonarch")
    return FamilyModel(name, g, known, facts, {"d": d, "field": f})


def abels_ungraded(d: int) -> tuple[UngradedAlgebra, DerivationAction]:
    """The Abels algebra without grading, plus the diagonal derivations producing it."""
    model = abels(d)
    g = model.algebra
    u = UngradedAlgebra(g.labels, g.fields, dict(g.brackets))
    mats = []
    for k in range(d - 2):
        rows = [[Fraction(0)] * g.dim for _ in range(g.dim)]
        for i, w in enumerate(g.weights):
            rows[i][i] = w[k]
        mats.append(RationalMatrix.from_rows(rows, g.dim))
    return u, DerivationAction(tuple(mats))


def gdv(d: int, v_basis: Sequence = ()) -> FamilyModel:
    """Abelian algebra Q^d with the coordinate functionals restricted to V-perp."""
    if d < 1:
        raise InvalidParameter("d must be positive")
    perp = orthogonal_complement(d, v_basis)
    _check_star(d, perp)
    v = len(perp)
    f = FieldTag.arch()
    basis = [(f"x{i + 1}", tuple(b[i] for b in perp), f) for i in range(d)]
    g = GradedLieAlgebra.build(v, basis)
    known = {"cone_dimension": Known(v, "cone dimension of G^d_V is dim V-perp")}
    tag = "_".join(",".join(str(la.rat(c)) for c in x) for x in v_basis)
    return FamilyModel(f"gdv{d}" + (f"[{tag}]" if tag else ""), g, known,
                       {"cone_type": Known(str(gdv_cone_type(d, v_basis)),
                                           "sign pattern of V-perp")},
                       {"d": d, "V": [list(map(Fraction, x)) for x in v_basis]})


def sol(field_tag=None) -> FamilyModel:
    f = _field(field_tag)
    g = GradedLieAlgebra.build(1, [("x", (1,), f), ("y", (-1,), f)])
    if f.archimedean:
        known = {
            "tame": Known(False, "SOL is not tame"),
            "strongly_2tame": Known(False, "the weights 1 and -1 are opposite"),
            "two_tame": Known(False, "the weights 1 and -1 are opposite"),
            "h2_zero": Known(1, "derived: x^y spans the weight-zero exterior square"),
            "cp": Known(True, "real SOL is compactly presented"),
            "dehn_exact": Known("exponential", "SOL has exponential Dehn function"),
            "cone_dimension": Known(1, "the cone of SOL is one-dimensional"),
        }
        name = "sol"
    else:
        known = {
            "cp": Known(False, "two opposite nonarchimedean weights obstruct compact presentation"),
            "dehn_exact": Known("infinite", "not compactly presented"),
        }
        name = "sol_nonarch"
    return FamilyModel(name, g, known, {}, {"field": f})


def heintze(weights: Sequence) -> FamilyModel:
    ws = [la.rat(w) for w in weights]
    if not ws or any(w <= 0 for w in ws):
        raise InvalidParameter("Heintze weights must be positive and nonempty")
    f = FieldTag.arch()
    g = GradedLieAlgebra.build(1, [(f"x{i + 1}", (w,), f) for i, w in enumerate(ws)])
    p0_value = sum(ws) / min(ws)
    known = {
        "hyperbolic": Known("hyperbolic(connected)", "Heintze groups are hyperbolic"),
        "dehn_exact": Known("linear", "hyperbolic groups have linear Dehn function"),
        "cone_dimension": Known(1, "the cone of a Heintze group is a real tree"),
        "p0": Known(str(p0_value), "p0 = log(volume growth) / log(smallest modulus)"),
    }
    tag = ",".join(str(w) for w in ws)
    return FamilyModel(f"heintze[{tag}]", g, known, {}, {"weights": ws})


def hall_a3(field_tag=None) -> FamilyModel:
    base = abels(3, field_tag)
    known = dict(base.known)
    if not _field(field_tag).archimedean:
        known["dehn_exact"] = Known("infinite", "A_3 over a nonarchimedean field is not compactly presented")
    return FamilyModel("hall_a3" + ("" if _field(field_tag).archimedean else "_nonarch"),
                       base.algebra, known, base.facts, base.params)


def baumslag_host(p: int) -> FamilyModel:
    """Three nonarchimedean lines over F_p((t)) with weights summing to zero.

    The weights are the valuations of (t, t - 1) at the three places 0, 1 and
    infinity of F_p(t).
    """
    f = FieldTag.nonarch(p, p)
    g = GradedLieAlgebra.build(2, [("y1", (1, 0), f), ("y2", (0, 1), f), ("y3", (-1, -1), f)])
    known = {
        "tame": Known(False, "the three weights sum to zero"),
        "strongly_2tame": Known(True, "no two weights are opposite"),
        "two_tame": Known(True, "no two weights are opposite"),
        "cp": Known(True, "strongly 2-tame"),
        "dehn_exact": Known("quadratic", "strongly 2-tame, abelian, acting rank 2"),
        "rules": Known("R7", "quadratic bound for strongly 2-tame diagrams"),
    }
    return FamilyModel(f"baumslag_host_p{p}", g, known, {"weights": Known(
        "reconstructed", "chosen so that the strongly 2-tame criterion applies in rank 2")}, {"p": p})


FAMILIES = ("abels", "gdv", "sol", "heintze", "hall_a3", "baumslag_host")


def build(name: str, **params) -> FamilyModel:
    if name == "sol":
        return sol(params.get("field"))
    if name == "heintze":
        return heintze(params.get("weights", (1, 1)))
    if name == "hall_a3":
        return hall_a3(params.get("field"))
    if name == "baumslag_host":
        p = params.get("p", 2)
        if not isinstance(p, int) or not _is_prime(p):
            raise InvalidParameter(f"{p} is not a prime")
        return baumslag_host(p)
    if name == "abels":
        return abels(params.get("d", 4), params.get("field"))
    if name == "gdv":
        return gdv(params.get("d", 2), params.get("V", ()))
    raise UnknownFamily(f"unknown family {name!r}; known: {', '.join(FAMILIES)}")


def recognized_facts(g: GradedLieAlgebra) -> dict:
    """Facts of every fixture or Abels model whose algebra is literally g (same basis
    order).  Several families can share one algebra, so their facts are merged."""
    out: dict = {}
    models = list(fixtures())
    if g.dim and len(set(g.fields)) == 1:
        d = g.acting_rank + 2
        if d * (d - 1) // 2 == g.dim:
            models.append(abels(d, g.fields[0]))
    for m in models:
        if m.algebra == g:
            out.update(m.facts)
    return out


def fixtures() -> list[FamilyModel]:
    """The models exercised by the self-test."""
    nonarch2 = FieldTag.nonarch(2, 0)
    out = [
        sol(), sol(nonarch2),
        abels(3, nonarch2), abels(4), abels(4, nonarch2),
        hall_a3(nonarch2),
        baumslag_host(2), baumslag_host(3),
        heintze((1, 1)), heintze((1, 1, 2)),
        gdv(1), gdv(2), gdv(2, [(1, 1)]), gdv(2, [(1, -1)]),
        gdv(3, [(1, 1, 1)]), gdv(3, [(1, 1, -1)]),
    ]
    for m in out:
        assert is_standard(m.algebra)
    return out
