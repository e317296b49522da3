"""Decision procedures: Dehn function bounds, compact presentability, hyperbolicity,
cone dimension, the L^p exponent p0, invariants of mixed focal groups and the
cone types of the diagonal groups G^d_V."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import reduce
from itertools import permutations
from typing import Sequence

from . import exactla as la
from .errors import (DimensionMismatch, InvalidAlgebra, InvalidParameter,
                     MissingResidueCardinality, NonArchimedeanUnsupported, NotMixedType,
                     NotStandardSolvable, StarConditionViolated)
from .exactla import RationalMatrix
from .homology import cycle_representatives, homology_dim
from .liecore import ARCHIMEDEAN, NONARCHIMEDEAN, GradedLieAlgebra, field_factor, validate
from .tameness import opposed_pairs, tameness_report
from .weightmod import WeightDiagram, diagram, exponential_radical, is_standard, spans_full_rank


class DehnClass(IntEnum):
    LINEAR = 1
    QUADRATIC = 2
    CUBIC = 3
    EXPONENTIAL = 4
    INFINITE = 5

    def __str__(self):
        return self.name.lower()


CITATIONS = {
    "R1": "Compact presentability fails when the principal weights of the "
          "totally disconnected factor are not 2-tame.",
    "R2": "Compact presentability fails when the nonarchimedean factor has "
          "nonzero H2 in weight zero.",
    "R3": "If the totally disconnected factor is 2-tame and its weight-zero H2 "
          "vanishes, the group is compactly presented with at most exponential "
          "Dehn function.",
    "R4": "If the principal weights are not 2-tame, the Dehn function is at "
          "least exponential.",
    "R5": "Nonzero H2 of the whole algebra in weight zero forces an at least "
          "exponential Dehn function.",
    "R6": "2-tame weights together with vanishing weight-zero H2 bound the Dehn "
          "function by a cubic.",
    "R7": "Strongly 2-tame weights (abelian algebra, or every field of "
          "characteristic zero) give a linear Dehn function when the acting "
          "rank is 1 and a quadratic one when it is at least 2.",
    "R8": "Tame weights with acting rank 1 make the group hyperbolic, hence "
          "with linear Dehn function.",
}


@dataclass(frozen=True)
class RuleFiring:
    rule: str
    citation: str
    witness: object = None

    def as_dict(self) -> dict:
        return {"rule": self.rule, "citation": self.citation, "witness": self.witness}


@dataclass(frozen=True)
class DehnVerdict:
    compactly_presented: bool
    lower: DehnClass
    upper: DehnClass
    exact: DehnClass | None
    rules_fired: tuple
    notes: tuple = ()

    def __post_init__(self):
        if self.lower > self.upper:
            raise AssertionError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        if self.exact is not None and not (self.lower == self.upper == self.exact):
            raise AssertionError("exact class must equal both bounds")
        if (not self.compactly_presented) != (self.upper == DehnClass.INFINITE):
            raise AssertionError("compact presentability must match a finite upper bound")

    def rules(self) -> list[str]:
        return [r.rule for r in self.rules_fired]

    def as_dict(self) -> dict:
        return {
            "cp": self.compactly_presented,
            "lower": str(self.lower),
            "upper": str(self.upper),
            "exact": None if self.exact is None else str(self.exact),
            "rules_fired": [r.as_dict() for r in self.rules_fired],
        }


def _fmt_weight(w) -> list:
    return [str(x) for x in w]


def _fmt_pairs(pairs) -> list:
    return [[_fmt_weight(a), _fmt_weight(b)] for a, b in pairs]


def _require_valid(g: GradedLieAlgebra):
    problems = validate(g)
    if problems:
        raise InvalidAlgebra(problems)
    if not is_standard(g):
        raise NotStandardSolvable("zero is a principal weight")


def dehn_classify(g: GradedLieAlgebra) -> DehnVerdict:
    """Apply the rule chain and return the resulting interval of Dehn classes."""
    _require_valid(g)
    notes = []
    if not spans_full_rank(g):
        msg = (f"weights span a proper subspace of the rank-{g.acting_rank} "
               "acting group; the input rank is used as given")
        warnings.warn(msg)
        notes.append(msg)

    diag = diagram(g)
    tam = tameness_report(diag)
    nonarch = field_factor(g, NONARCHIMEDEAN)
    fired = []

    # compact presentability
    cp = True
    td_pairs = opposed_pairs(diagram(nonarch).principal_weights()) if nonarch.dim else []
    if td_pairs:
        fired.append(RuleFiring("R1", CITATIONS["R1"], {"pairs": _fmt_pairs(td_pairs)}))
        cp = False
    h2_td = homology_dim(nonarch, 2) if nonarch.dim else 0
    if h2_td:
        fired.append(RuleFiring("R2", CITATIONS["R2"],
                                {"classes": cycle_representatives(nonarch)}))
        cp = False
    if not cp:
        inf = DehnClass.INFINITE
        return DehnVerdict(False, inf, inf, inf, tuple(fired), tuple(notes))

    # upper bounds, tightest wins; lower bounds default to linear
    d = g.acting_rank
    h2 = homology_dim(g, 2)
    upper = DehnClass.EXPONENTIAL
    lower = DehnClass.LINEAR
    if tam.tame and d == 1:
        fired.append(RuleFiring("R8", CITATIONS["R8"],
                                {"separator": _fmt_weight(tam.hull_certificate.separator)}))
        upper = min(upper, DehnClass.LINEAR)
    if tam.strongly_2tame:
        char_zero = all(f.characteristic == 0 for f in g.fields)
        if g.is_abelian() or char_zero:
            target = DehnClass.LINEAR if d == 1 else DehnClass.QUADRATIC
            # no two weights cancel, so the weight-zero part of the exterior square is 0
            assert h2 == 0
            fired.append(RuleFiring("R7", CITATIONS["R7"], {"acting_rank": d}))
            upper = min(upper, target)
            lower = max(lower, target)
            if d >= 3 and not g.is_abelian():
                notes.append("quadratic bound for acting rank >= 3 with a nonabelian "
                             "algebra: one formulation of the theorem states it only "
                             "for rank 2")
        else:
            notes.append("strongly 2-tame, but the algebra is nonabelian with a "
                         "positive-characteristic factor; the quadratic bound is "
                         "expected but not covered, so it is not applied")
    if tam.two_tame and h2 == 0:
        fired.append(RuleFiring("R6", CITATIONS["R6"], None))
        upper = min(upper, DehnClass.CUBIC)
    fired.append(RuleFiring("R3", CITATIONS["R3"], None))

    if not tam.two_tame:
        fired.append(RuleFiring("R4", CITATIONS["R4"],
                                {"pairs": _fmt_pairs(tam.principal_witnesses)}))
        lower = max(lower, DehnClass.EXPONENTIAL)
    if h2:
        fired.append(RuleFiring("R5", CITATIONS["R5"], {"classes": cycle_representatives(g)}))
        lower = max(lower, DehnClass.EXPONENTIAL)
    if lower > upper:
        raise AssertionError(f"rules contradict each other: lower {lower}, upper {upper}")
    if lower < upper and upper == DehnClass.CUBIC:
        notes.append("the cubic upper bound is not known to be sharp")
    exact = lower if lower == upper else None
    return DehnVerdict(True, lower, upper, exact, tuple(fired), tuple(notes))


# ---------------------------------------------------------------------------
# hyperbolicity and cones


@dataclass(frozen=True)
class Hyperbolicity:
    hyperbolic: bool
    kind: str | None = None  # connected | totally_discontinuous | mixed
    reason: str | None = None

    def __str__(self):
        return f"hyperbolic({self.kind})" if self.hyperbolic else f"not_hyperbolic({self.reason})"


def hyperbolicity(g: GradedLieAlgebra) -> Hyperbolicity:
    if not is_standard(g):
        raise NotStandardSolvable("zero is a principal weight")
    if g.dim == 0:
        return Hyperbolicity(False, reason="elementary")
    if g.acting_rank >= 2:
        return Hyperbolicity(False, reason="acting rank at least 2")
    tam = tameness_report(diagram(g))
    if not tam.tame:
        return Hyperbolicity(False, reason="opposite weights")
    kinds = {f.kind for f in g.fields}
    if kinds == {ARCHIMEDEAN}:
        kind = "connected"
    elif kinds == {NONARCHIMEDEAN}:
        kind = "totally_discontinuous"
    else:
        kind = "mixed"
    return Hyperbolicity(True, kind=kind)


def cone_dimension(g: GradedLieAlgebra) -> int:
    """Acting rank plus the codimension of the exponential radical."""
    if any(not f.archimedean for f in g.fields):
        raise NonArchimedeanUnsupported("cone dimension is computed for real algebras only")
    if not is_standard(g):
        raise NotStandardSolvable("zero is a principal weight")
    return g.acting_rank + g.dim - exponential_radical(g).dim


# ---------------------------------------------------------------------------
# symbolic values c + sum a_p log p


def _factor(n: int) -> dict:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class SymbolicLogValue:
    """rational_part + sum(coeff * log(base)) with prime bases and nonzero coefficients."""

    rational_part: Fraction
    log_terms: tuple = ()  # ((prime, coefficient), ...) sorted by prime

    @classmethod
    def make(cls, rational_part=0, logs: Sequence = ()) -> SymbolicLogValue:
        acc: dict = {}
        for base, coef in logs:
            if base < 1:
                raise InvalidParameter(f"log of {base}")
            for p, e in _factor(int(base)).items():
                acc[p] = acc.get(p, 0) + Fraction(coef) * e
        terms = tuple(sorted((p, c) for p, c in acc.items() if c))
        return cls(Fraction(rational_part), terms)

    @property
    def is_rational(self) -> bool:
        return not self.log_terms

    @property
    def float_rendering(self) -> float:
        return float(self.rational_part) + sum(float(c) * math.log(p) for p, c in self.log_terms)

    def __add__(self, other: SymbolicLogValue) -> SymbolicLogValue:
        return SymbolicLogValue.make(self.rational_part + other.rational_part,
                                     self.log_terms + other.log_terms)

    def scaled(self, c) -> SymbolicLogValue:
        c = Fraction(c)
        return SymbolicLogValue.make(self.rational_part * c,
                                     [(p, a * c) for p, a in self.log_terms])

    def coordinates(self) -> dict:
        out = {1: self.rational_part} if self.rational_part else {}
        out.update(dict(self.log_terms))
        return out

    def __str__(self):
        parts = []
        if self.rational_part or not self.log_terms:
            parts.append(str(self.rational_part))
        for p, c in self.log_terms:
            mag = abs(c)
            t = f"log {p}" if mag == 1 else f"{mag}*log {p}"
            if parts:
                parts.append(("- " if c < 0 else "+ ") + t)
            else:
                parts.append(("-" if c < 0 else "") + t)
        return " ".join(parts)

    def as_dict(self) -> dict:
        return {"exact": str(self), "rational_part": str(self.rational_part),
                "log_terms": [[p, str(c)] for p, c in self.log_terms],
                "float": round(self.float_rendering, 6)}


@dataclass(frozen=True)
class SymbolicRatio:
    numerator: SymbolicLogValue
    denominator: SymbolicLogValue

    def exact(self) -> Fraction | None:
        """The ratio as a rational when numerator and denominator are proportional."""
        a, b = self.numerator.coordinates(), self.denominator.coordinates()
        if not b:
            raise ZeroDivisionError("denominator is zero")
        if not a:
            return Fraction(0)
        if set(a) != set(b):
            return None
        ratios = {a[k] / b[k] for k in a}
        return ratios.pop() if len(ratios) == 1 else None

    @property
    def float_rendering(self) -> float:
        return self.numerator.float_rendering / self.denominator.float_rendering

    def __str__(self):
        e = self.exact()
        if e is not None:
            return str(e)
        num = str(self.numerator)
        den = str(self.denominator)
        if " + " in num or " - " in num:
            num = f"({num})"
        if " " in den:
            den = f"({den})"
        return f"{num}/{den}"

    def as_dict(self) -> dict:
        e = self.exact()
        return {"exact": str(self), "rational": None if e is None else str(e),
                "float": round(self.float_rendering, 6)}


@dataclass(frozen=True)
class CompactionData:
    archimedean_log_moduli: tuple = ()  # ((ell, multiplicity), ...)
    td_volume_factor: int = 1

    def __post_init__(self):
        if self.td_volume_factor < 1:
            raise InvalidParameter("the totally disconnected volume factor must be >= 1")
        for ell, m in self.archimedean_log_moduli:
            if Fraction(ell) <= 0 or m < 1:
                raise InvalidParameter("log moduli must be positive with positive multiplicity")

    @classmethod
    def from_diagram(cls, d: WeightDiagram, orientation: Sequence = (1,),
                     td_volume_factor: int = 1) -> CompactionData:
        """Archimedean log moduli of a contracting rank-one diagram (sign fixed by orientation)."""
        acc: dict = {}
        for e in d.entries:
            if e.field.archimedean:
                ell = abs(la.dot(la.vec(orientation), e.weight))
                acc[ell] = acc.get(ell, 0) + e.multiplicity
        return cls(tuple(sorted(acc.items())), td_volume_factor)


def p0(c: CompactionData) -> SymbolicLogValue:
    """(sum of m*ell + log delta_td) / min ell; 0 without an archimedean part."""
    if not c.archimedean_log_moduli:
        return SymbolicLogValue.make(0)
    lam = min(Fraction(ell) for ell, _ in c.archimedean_log_moduli)
    total = sum((Fraction(ell) * m for ell, m in c.archimedean_log_moduli), Fraction(0))
    val = SymbolicLogValue.make(total, [(c.td_volume_factor, 1)] if c.td_volume_factor > 1 else [])
    out = val.scaled(1 / lam)
    assert out.float_rendering >= 1 - 1e-12 and out.rational_part >= 1
    return out


@dataclass(frozen=True)
class TacInvariants:
    s_G: Fraction
    q_G: int
    varpi: SymbolicRatio

    def as_dict(self) -> dict:
        return {"s_G": str(self.s_G), "q_G": self.q_G, "varpi": self.varpi.as_dict()}


def tac_invariants(d: WeightDiagram, orientation: Sequence = (1,),
                   arch_log_base: int | None = None) -> TacInvariants:
    """s_G, q_G and varpi_G of a mixed-type diagram.

    Archimedean weights are read as log-moduli in natural units, or in units of
    ``log(arch_log_base)`` when that base is given.
    """
    t = la.vec(orientation)
    if len(t) != d.acting_rank:
        raise DimensionMismatch("orientation length differs from acting rank")
    arch = [e for e in d.entries if e.field.archimedean and la.dot(t, e.weight)]
    td = [e for e in d.entries if not e.field.archimedean and la.dot(t, e.weight)]
    if not arch or not td:
        raise NotMixedType("both archimedean and nonarchimedean nonzero weights are required")
    exps: dict = {}
    den_logs = []
    for e in td:
        q = e.field.residue_cardinality
        if q is None:
            raise MissingResidueCardinality(f"no residue cardinality on weight {list(map(str, e.weight))}")
        a = la.dot(t, e.weight) * e.multiplicity
        den_logs.append((q, a))
        for p, k in _factor(q).items():
            exps[p] = exps.get(p, 0) + a * k
    if any(x.denominator != 1 for x in exps.values()):
        raise InvalidParameter("modular scale is not rational for this orientation")
    exps = {p: int(x) for p, x in exps.items() if x}
    if not exps:
        raise NotMixedType("the totally disconnected modular function is trivial")
    s = Fraction(1)
    for p, x in exps.items():
        s *= Fraction(p) ** x
    if s < 1:
        s = 1 / s
        exps = {p: -x for p, x in exps.items()}
    g = reduce(math.gcd, (abs(x) for x in exps.values()))
    q = 1
    for p, x in exps.items():
        q *= p ** (abs(x) // g)
    if q < 2:
        raise NotMixedType("modular scale has no integer root >= 2")
    arch_sum = sum((la.dot(t, e.weight) * e.multiplicity for e in arch), Fraction(0))
    if arch_log_base is None:
        num = SymbolicLogValue.make(arch_sum)
    else:
        num = SymbolicLogValue.make(0, [(arch_log_base, arch_sum)])
    den = SymbolicLogValue.make(0, den_logs)
    return TacInvariants(s, q, SymbolicRatio(num, den))


# ---------------------------------------------------------------------------
# the groups G^d_V


@dataclass(frozen=True)
class ConeType:
    kind: str
    params: tuple = ()

    def __str__(self):
        if self.params:
            return f"{self.kind}({','.join(map(str, self.params))})"
        return self.kind


def _orth(d: int, v_basis: Sequence) -> list:
    rows = [la.vec(v) for v in v_basis]
    for r in rows:
        if len(r) != d:
            raise DimensionMismatch(f"vector of length {len(r)} in a subspace of Q^{d}")
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    return la.kernel_basis(RationalMatrix.from_rows(rows, d))


def orthogonal_complement(d: int, v_basis: Sequence) -> list:
    return _orth(d, v_basis)


def _check_star(d: int, perp: list):
    for i in range(d):
        if all(w[i] == 0 for w in perp):
            raise StarConditionViolated(f"the orthogonal of V lies in the hyperplane x{i + 1} = 0")


def positive_vector(d: int, v_basis: Sequence) -> tuple | None:
    """A vector of V-perp with all coordinates >= 1, or None."""
    perp = _orth(d, v_basis)
    _check_star(d, perp)
    k = len(perp)
    # x = sum (c+ - c-) b, x_i - s_i = 1
    rows = []
    for i in range(d):
        row = [w[i] for w in perp] + [-w[i] for w in perp]
        row += [Fraction(-1 if j == i else 0) for j in range(d)]
        rows.append(row)
    res = la.nonnegative_solution(RationalMatrix.from_rows(rows, 2 * k + d), [1] * d)
    if not res.feasible:
        return None
    c = [res.point[j] - res.point[k + j] for j in range(k)]
    x = la.zero_vector(d)
    for cj, w in zip(c, perp):
        x = la.add(x, la.scale(cj, w))
    assert all(xi >= 1 for xi in x)
    return x


def gdv_npc(d: int, v_basis: Sequence) -> bool:
    """Whether V-perp contains a vector with all coordinates strictly positive."""
    return positive_vector(d, v_basis) is not None


def gdv_cone_type(d: int, v_basis: Sequence) -> ConeType:
    perp = _orth(d, v_basis)
    _check_star(d, perp)
    v = len(perp)
    if v == 1:
        return ConeType("real_tree") if gdv_npc(d, v_basis) else ConeType("sol_like")
    if v == d:
        return ConeType("product_of_trees")
    if v == d - 1:
        line = la.row_space_basis([la.vec(x) for x in v_basis], d)[0]
        if all(x != 0 for x in line):
            pos = sum(1 for x in line if x > 0)
            neg = d - pos
            if pos == 0 or neg == 0:
                return ConeType("T_Dd")
            return ConeType("T_Dkl", (max(pos, neg), min(pos, neg)))
    return ConeType("general", (v,))


def _canon(d: int, vectors) -> tuple:
    rows, _ = la.rref([la.vec(v) for v in vectors], d)
    return tuple(tuple(r) for r in rows)


def gdv_equivalent(d: int, v1: Sequence, v2: Sequence, mode: str = "isomorphism") -> bool:
    """Isomorphism: V' is a coordinate permutation of V.  Cone: additionally allow
    a positive diagonal rescaling."""
    for v in list(v1) + list(v2):
        if len(v) != d:
            raise DimensionMismatch(f"vector of length {len(v)} in a subspace of Q^{d}")
    _check_star(d, _orth(d, v1))
    _check_star(d, _orth(d, v2))
    if mode not in ("isomorphism", "cone"):
        raise InvalidParameter(f"unknown mode {mode!r}")
    b1 = la.row_space_basis([la.vec(x) for x in v1], d) if v1 else []
    b2 = la.row_space_basis([la.vec(x) for x in v2], d) if v2 else []
    if len(b1) != len(b2):
        return False
    target = _canon(d, b2)
    perp2 = _orth(d, b2)
    for perm in permutations(range(d)):
        moved = [tuple(v[perm[i]] for i in range(d)) for v in b1]
        if mode == "isomorphism":
            if _canon(d, moved) == target:
                return True
        elif diagonal_scaling(d, moved, perp2) is not None:
            return True
    return False


def diagonal_scaling(d: int, basis: Sequence, target_perp: Sequence) -> tuple | None:
    """x >= 1 with diag(x) mapping span(basis) into the subspace orthogonal to target_perp."""
    rows = []
    for w in target_perp:
        for v in basis:
            rows.append([w[i] * v[i] for i in range(d)] + [Fraction(0)] * d)
    for i in range(d):
        rows.append([Fraction(int(i == j)) for j in range(d)]
                    + [Fraction(-1 if j == i else 0) for j in range(d)])
    rhs = [0] * (len(rows) - d) + [1] * d
    res = la.nonnegative_solution(RationalMatrix.from_rows(rows, 2 * d), rhs)
    if not res.feasible:
        return None
    return tuple(res.point[:d])
