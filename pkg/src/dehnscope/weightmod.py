"""Weight diagrams, derivation-mode grading and the exponential radical."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import exactla as la
from .errors import (FieldNotSplit, InvalidAlgebra, NonCommutingAction, NotADerivation,
                     StructureError)
from .exactla import RationalMatrix
from .liecore import FieldTag, GradedLieAlgebra, Subspace, derived_subalgebra, ideal_generated, validate


@dataclass(frozen=True, order=True)
class WeightEntry:
    weight: tuple
    field: FieldTag
    principal: bool
    multiplicity: int


@dataclass(frozen=True)
class WeightDiagram:
    """Weights with multiplicities.

    A weight occurring both in ``u/[u,u]`` and in ``[u,u]`` appears as two
    entries, one flagged principal, so multiplicities stay exact on both sides.
    """

    acting_rank: int
    entries: tuple

    def __post_init__(self):
        for e in self.entries:
            if e.multiplicity < 1:
                raise StructureError("weight multiplicities must be positive")
            if len(e.weight) != self.acting_rank:
                raise StructureError("weight length differs from acting rank")

    @classmethod
    def abelian(cls, acting_rank: int, weights: Sequence, field: FieldTag | None = None
                ) -> WeightDiagram:
        """Diagram of an abelian u: every listed weight is principal."""
        field = field or FieldTag.arch()
        counts: dict = {}
        for w in weights:
            key = la.vec(w)
            counts[key] = counts.get(key, 0) + 1
        return cls(acting_rank, tuple(sorted(
            WeightEntry(w, field, True, m) for w, m in counts.items())))

    @property
    def principal_entries(self) -> tuple:
        return tuple(e for e in self.entries if e.principal)

    def weights(self) -> list:
        """Distinct weight vectors, sorted."""
        return sorted({e.weight for e in self.entries})

    def principal_weights(self) -> list:
        return sorted({e.weight for e in self.entries if e.principal})

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def restrict_principal(self) -> WeightDiagram:
        return WeightDiagram(self.acting_rank, self.principal_entries)

    def kinds(self) -> set:
        return {e.field.kind for e in self.entries}


def diagram(g: GradedLieAlgebra) -> WeightDiagram:
    """Weight diagram of g with the principal part read off g/[g,g]."""
    der = derived_subalgebra(g)
    in_der: dict = {}
    for v in der.basis:
        key = (g.weight_of(v), g.fields[_first(v)])
        in_der[key] = in_der.get(key, 0) + 1
    total: dict = {}
    for w, f in zip(g.weights, g.fields):
        total[(w, f)] = total.get((w, f), 0) + 1
    entries = []
    for (w, f), m in total.items():
        d = in_der.get((w, f), 0)
        if m - d:
            entries.append(WeightEntry(w, f, True, m - d))
        if d:
            entries.append(WeightEntry(w, f, False, d))
    return WeightDiagram(g.acting_rank, tuple(sorted(entries)))


def _first(v) -> int:
    return next(i for i, c in enumerate(v) if c)


def principal_weights(g: GradedLieAlgebra) -> WeightDiagram:
    return diagram(g).restrict_principal()


def exponential_radical(g: GradedLieAlgebra) -> Subspace:
    """Ideal generated by all nonzero-weight basis elements."""
    zero = g.zero_weight()
    seeds = [g.basis_vector(i) for i, w in enumerate(g.weights) if w != zero]
    return ideal_generated(g, Subspace.span(g, seeds))


def is_standard(g: GradedLieAlgebra) -> bool:
    zero = g.zero_weight()
    return all(e.weight != zero for e in diagram(g).principal_entries)


def spans_full_rank(g: GradedLieAlgebra) -> bool:
    """Whether the weights span the whole dual of the acting group."""
    return la.span_rank(list(g.weights), g.acting_rank) == g.acting_rank if g.dim else False


# ---------------------------------------------------------------------------
# derivation mode


@dataclass(frozen=True)
class UngradedAlgebra:
    """Structure constants without a grading; input to :func:`weights_from_derivations`."""

    labels: tuple
    fields: tuple
    brackets: dict  # {(i, j), i < j: {k: Fraction}}

    @classmethod
    def build(cls, basis: Sequence, brackets=None) -> UngradedAlgebra:
        """``basis`` is ``[(label, field), ...]``; brackets keyed by label pairs."""
        g = GradedLieAlgebra.build(
            1, [(lab, (0,), f) for lab, f in basis], brackets)
        return cls(g.labels, g.fields, dict(g.brackets))

    @property
    def dim(self) -> int:
        return len(self.labels)

    def as_trivially_graded(self) -> GradedLieAlgebra:
        return GradedLieAlgebra(1, self.labels, ((Fraction(0),),) * self.dim,
                                self.fields, self.brackets)


@dataclass(frozen=True)
class DerivationAction:
    matrices: tuple  # RationalMatrix per generator of A; column j is the image of e_j


def _charpoly(m: RationalMatrix) -> list[Fraction]:
    """Coefficients c_0..c_n of det(x I - m) by Faddeev-LeVerrier."""
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = RationalMatrix.identity(n)
    mk = RationalMatrix.zeros(n, n)
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        prod = m @ mk
        c = coeffs[n - k + 1]
        mk = RationalMatrix(n, n, tuple(a + c * b for a, b in zip(prod.entries, ident.entries)))
        amk = m @ mk
        trace = sum((amk[i, i] for i in range(n)), Fraction(0))
        coeffs[n - k] = -trace / k
    return coeffs


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _horner(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs, r):
    """Divide by (x - r); coeffs low-to-high."""
    n = len(coeffs) - 1
    out = [Fraction(0)] * n
    acc = Fraction(0)
    for k in range(n, 0, -1):
        acc = acc * r + coeffs[k]
        out[k - 1] = acc
    return out


def rational_roots(coeffs: list[Fraction]) -> dict:
    """Rational roots with multiplicity of a polynomial given low-to-high."""
    roots: dict = {}
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[0] == 0:
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
        coeffs = coeffs[1:]
    if len(coeffs) <= 1:
        return roots
    den = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    cands = set()
    for p in _divisors(ints[0]):
        for q in _divisors(ints[-1]):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    for r in sorted(cands):
        while len(coeffs) > 1 and _horner(coeffs, r) == 0:
            roots[r] = roots.get(r, 0) + 1
            coeffs = _deflate(coeffs, r)
    return roots


def _power(m: RationalMatrix, k: int) -> RationalMatrix:
    out = RationalMatrix.identity(m.rows)
    for _ in range(k):
        out = out @ m
    return out


def _check_action(u: UngradedAlgebra, mats: Sequence[RationalMatrix]):
    n = u.dim
    g = u.as_trivially_graded()
    for a, d in enumerate(mats):
        if (d.rows, d.cols) != (n, n):
            raise NotADerivation(f"derivation {a} is {d.rows}x{d.cols}, algebra has dimension {n}")
        cols = [d.column(j) for j in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                lhs = d.apply(g.bracket(g.basis_vector(i), g.basis_vector(j)))
                rhs = la.add(g.bracket(cols[i], g.basis_vector(j)),
                             g.bracket(g.basis_vector(i), cols[j]))
                if lhs != rhs:
                    raise NotADerivation(
                        f"matrix {a} fails the Leibniz rule on ({u.labels[i]}, {u.labels[j]})")
        for i in range(n):
            for k in range(n):
                if d[k, i] != 0 and u.fields[k] != u.fields[i]:
                    raise NotADerivation(
                        f"matrix {a} maps {u.labels[i]} into a different field factor")
    for a in range(len(mats)):
        for b in range(a + 1, len(mats)):
            if not (mats[a] @ mats[b] - mats[b] @ mats[a]).is_zero():
                raise NonCommutingAction(f"derivations {a} and {b} do not commute")


def weights_from_derivations(u: UngradedAlgebra, act: DerivationAction
                             ) -> tuple[GradedLieAlgebra, WeightDiagram]:
    """Grade ``u`` by the simultaneous generalized eigenspaces of a commuting family of derivations.

    The weight of a block is its vector of (rational) eigenvalues, one per
    derivation.  Basis vectors that are standard basis vectors keep their labels.
    """
    mats = tuple(act.matrices)
    if not mats:
        raise StructureError("at least one derivation is required")
    _check_action(u, mats)
    n = u.dim
    eig = []
    for a, d in enumerate(mats):
        roots = rational_roots(_charpoly(d))
        if sum(roots.values()) != n:
            raise FieldNotSplit(
                f"characteristic polynomial of derivation {a} does not split over Q")
        eig.append({r: la.kernel_basis(_power(d - _scalar(n, r), n)) for r in roots})

    # start from the field blocks, refine by each derivation in turn
    blocks = []
    for f in sorted(set(u.fields)):
        idx = [i for i in range(n) if u.fields[i] == f]
        basis = [tuple(Fraction(int(k == i)) for k in range(n)) for i in idx]
        blocks.append(((), basis))
    for spaces in eig:
        refined = []
        for w, basis in blocks:
            for r, ker in spaces.items():
                part = la.intersect(basis, ker, n)
                if part:
                    refined.append((w + (r,), part))
        blocks = refined

    items = []  # (pivot, order, vector, weight)
    for order, (w, basis) in enumerate(blocks):
        for v in la.row_space_basis(basis, n):
            items.append((_first(v), order, v, w))
    items.sort(key=lambda t: (t[0], t[1]))
    vectors = [t[2] for t in items]
    weights = tuple(t[3] for t in items)
    change = RationalMatrix.from_rows([[v[i] for v in vectors] for i in range(n)], n)
    inv = la.inverse(change)
    trivial = u.as_trivially_graded()

    used = set()
    labels = []
    for k, v in enumerate(vectors):
        nz = [i for i, c in enumerate(v) if c]
        if len(nz) == 1 and v[nz[0]] == 1:
            lab = u.labels[nz[0]]
        else:
            lab = "b" + str(k + 1)
            while lab in used or lab in u.labels:
                lab += "'"
        used.add(lab)
        labels.append(lab)
    fields = tuple(u.fields[_first(v)] for v in vectors)

    table = {}
    for i in range(n):
        for j in range(i + 1, n):
            val = inv.apply(trivial.bracket(vectors[i], vectors[j]))
            val = {k: c for k, c in enumerate(val) if c}
            if val:
                table[(i, j)] = val
    g = GradedLieAlgebra(len(mats), tuple(labels), weights, fields, table)
    problems = validate(g)
    if problems:
        raise InvalidAlgebra(problems)
    return g, diagram(g)


def _scalar(n: int, r: Fraction) -> RationalMatrix:
    return RationalMatrix.from_rows([[r if i == j else 0 for j in range(n)] for i in range(n)], n)
