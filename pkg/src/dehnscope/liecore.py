"""Weight-graded nilpotent Lie algebras given by structure constants."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from . import exactla as la
from .errors import NotAnIdeal, NotGraded, NotNilpotent, StructureError

ARCHIMEDEAN = "archimedean"
NONARCHIMEDEAN = "nonarchimedean"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power_base(q: int) -> int | None:
    """The prime p with q = p^k (k >= 1), or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q  # q itself is prime
    while q % p == 0:
        q //= p
    return p if q == 1 else None


@dataclass(frozen=True, order=True)
class FieldTag:
    kind: str = ARCHIMEDEAN
    characteristic: int = 0
    residue_cardinality: int | None = None

    def __post_init__(self):
        if self.kind not in (ARCHIMEDEAN, NONARCHIMEDEAN):
            raise StructureError(f"unknown field kind {self.kind!r}")
        if self.characteristic != 0 and not _is_prime(self.characteristic):
            raise StructureError(f"characteristic {self.characteristic} is neither 0 nor prime")
        if self.kind == ARCHIMEDEAN:
            if self.characteristic != 0:
                raise StructureError("archimedean fields have characteristic 0")
            if self.residue_cardinality is not None:
                raise StructureError("archimedean fields have no residue field")
        elif self.residue_cardinality is not None:
            p = prime_power_base(self.residue_cardinality)
            if p is None:
                raise StructureError(
                    f"residue cardinality {self.residue_cardinality} is not a prime power")
            if self.characteristic and p != self.characteristic:
                raise StructureError(
                    f"residue field of size {self.residue_cardinality} cannot have "
                    f"characteristic {self.characteristic}")

    @property
    def archimedean(self) -> bool:
        return self.kind == ARCHIMEDEAN

    @classmethod
    def arch(cls) -> FieldTag:
        return cls(ARCHIMEDEAN)

    @classmethod
    def nonarch(cls, residue: int | None = None, characteristic: int = 0) -> FieldTag:
        return cls(NONARCHIMEDEAN, characteristic, residue)

    def short(self) -> str:
        if self.archimedean:
            return "arch"
        s = "nonarch"
        if self.characteristic:
            s += f",char={self.characteristic}"
        if self.residue_cardinality:
            s += f",q={self.residue_cardinality}"
        return s


Brackets = Mapping  # {(i, j) with i < j: {k: Fraction}}


@dataclass(frozen=True, eq=False)
class GradedLieAlgebra:
    """Basis-indexed structure constants with a weight vector and field tag per basis element.

    Brackets are stored for ``i < j`` only; ``bracket_basis(j, i)`` is the
    negation, so antisymmetry holds by construction.
    """

    acting_rank: int
    labels: tuple
    weights: tuple
    fields: tuple
    brackets: Mapping = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.labels)
        if self.acting_rank < 1:
            raise StructureError("acting rank must be at least 1")
        if len(self.weights) != n or len(self.fields) != n:
            raise StructureError("labels, weights and fields must have equal length")
        for lab, w in zip(self.labels, self.weights):
            if len(w) != self.acting_rank:
                raise StructureError(
                    f"weight of {lab!r} has length {len(w)}, acting rank is {self.acting_rank}")
        for (i, j), val in self.brackets.items():
            if not (0 <= i < j < n):
                raise StructureError(f"bracket key {(i, j)} must satisfy 0 <= i < j < {n}")
            for k in val:
                if not 0 <= k < n:
                    raise StructureError(f"bracket value index {k} out of range")

    @classmethod
    def build(cls, acting_rank: int, basis: Sequence, brackets: Mapping | None = None
              ) -> GradedLieAlgebra:
        """Construct from ``[(label, weight, field), ...]`` and label-keyed brackets.

        ``brackets`` maps ``(a, b)`` label pairs to ``{label: coefficient}``;
        pairs given in the opposite order are negated.
        """
        labels = tuple(b[0] for b in basis)
        weights = tuple(la.vec(b[1]) for b in basis)
        fields = tuple(b[2] if len(b) > 2 else FieldTag.arch() for b in basis)
        index: dict = {}
        for i, lab in enumerate(labels):
            index.setdefault(lab, i)
        table: dict = {}
        for (a, b), value in (brackets or {}).items():
            try:
                i, j = index[a], index[b]
            except KeyError as exc:
                raise StructureError(f"bracket references unknown label {exc.args[0]!r}") from None
            if i == j:
                raise StructureError(f"bracket [{a},{a}] must not be given")
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if (i, j) in table:
                raise StructureError(f"bracket [{a},{b}] given twice")
            out = {}
            for lab, coef in dict(value).items():
                if lab not in index:
                    raise StructureError(f"bracket value references unknown label {lab!r}")
                k = index[lab]
                out[k] = out.get(k, Fraction(0)) + sign * la.rat(coef)
            out = {k: c for k, c in out.items() if c != 0}
            if out:
                table[(i, j)] = out
        return cls(acting_rank, labels, weights, fields, table)

    # -- basic access --------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def basis_vector(self, i: int) -> la.Vector:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def zero_weight(self) -> la.Vector:
        return la.zero_vector(self.acting_rank)

    def bracket_basis(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return dict(self.brackets.get((i, j), {}))
        return {k: -c for k, c in self.brackets.get((j, i), {}).items()}

    def bracket(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> la.Vector:
        out = [Fraction(0)] * self.dim
        xs = [(i, c) for i, c in enumerate(x) if c]
        ys = [(j, c) for j, c in enumerate(y) if c]
        for i, a in xs:
            for j, b in ys:
                if i == j:
                    continue
                for k, c in self.bracket_basis(i, j).items():
                    out[k] += a * b * c
        return tuple(out)

    def is_abelian(self) -> bool:
        return not self.brackets

    def weight_of(self, v: Sequence[Fraction]) -> la.Vector | None:
        """Weight of a homogeneous vector (None for 0 or mixed-weight vectors)."""
        ws = {self.weights[i] for i, c in enumerate(v) if c}
        return ws.pop() if len(ws) == 1 else None

    def weight_blocks(self) -> dict:
        blocks: dict = {}
        for i, w in enumerate(self.weights):
            blocks.setdefault(w, []).append(i)
        return blocks

    def permuted(self, order: Sequence[int]) -> GradedLieAlgebra:
        """The same algebra with basis listed as ``[self.labels[i] for i in order]``."""
        pos = {old: new for new, old in enumerate(order)}
        table: dict = {}
        for (i, j), val in self.brackets.items():
            a, b = pos[i], pos[j]
            sign = 1
            if a > b:
                a, b, sign = b, a, -1
            table[(a, b)] = {pos[k]: sign * c for k, c in val.items()}
        return GradedLieAlgebra(
            self.acting_rank,
            tuple(self.labels[i] for i in order),
            tuple(self.weights[i] for i in order),
            tuple(self.fields[i] for i in order),
            table)

    def __eq__(self, other):
        if not isinstance(other, GradedLieAlgebra):
            return NotImplemented
        return (self.acting_rank, self.labels, self.weights, self.fields) == (
            other.acting_rank, other.labels, other.weights, other.fields) and {
            k: dict(v) for k, v in self.brackets.items()} == {
            k: dict(v) for k, v in other.brackets.items()}

    def __hash__(self):
        return hash((self.acting_rank, self.labels, self.weights, self.fields))

    def __repr__(self):
        return f"GradedLieAlgebra(dim={self.dim}, acting_rank={self.acting_rank}, labels={self.labels})"


# ---------------------------------------------------------------------------
# graded subspaces


@dataclass(frozen=True, eq=False)
class Subspace:
    ambient: GradedLieAlgebra
    basis: tuple  # reduced, weight-homogeneous vectors

    @classmethod
    def span(cls, g: GradedLieAlgebra, vectors) -> Subspace:
        """Graded span of ``vectors``; raises NotGraded if the span is not graded."""
        vectors = [la.vec(v) for v in vectors]
        n = g.dim
        base = la.row_space_basis(vectors, n)
        # split each basis vector into weight components
        comps = []
        for v in base:
            for w, idx in g.weight_blocks().items():
                part = tuple(v[k] if k in idx else Fraction(0) for k in range(n))
                if not la.is_zero(part):
                    comps.append(part)
        graded = la.row_space_basis(comps, n)
        if len(graded) != len(base):
            raise NotGraded(f"span of {len(base)} vectors is not spanned by homogeneous vectors")
        return cls(g, tuple(graded))

    @classmethod
    def of_labels(cls, g: GradedLieAlgebra, labels) -> Subspace:
        return cls.span(g, [g.basis_vector(g.index(lab)) for lab in labels])

    @classmethod
    def zero(cls, g: GradedLieAlgebra) -> Subspace:
        return cls(g, ())

    @classmethod
    def whole(cls, g: GradedLieAlgebra) -> Subspace:
        return cls(g, tuple(g.basis_vector(i) for i in range(g.dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v) -> bool:
        return la.in_span(la.vec(v), list(self.basis), self.ambient.dim)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        n = self.ambient.dim
        return (self.dim == other.dim
                and la.span_rank(list(self.basis) + list(other.basis), n) == self.dim)

    def __hash__(self):
        return hash(self.dim)

    def weight_dims(self) -> dict:
        out: dict = {}
        for v in self.basis:
            w = self.ambient.weight_of(v)
            out[w] = out.get(w, 0) + 1
        return out

    def __repr__(self):
        return f"Subspace(dim={self.dim} of {self.ambient.dim})"


def _bracket_span(g: GradedLieAlgebra, vectors) -> list:
    """Reduced basis of [g, span(vectors)]."""
    out = []
    for i in range(g.dim):
        e = g.basis_vector(i)
        for v in vectors:
            w = g.bracket(e, v)
            if not la.is_zero(w):
                out.append(w)
    return la.row_space_basis(out, g.dim)


def _lcs_raw(g: GradedLieAlgebra, limit: int | None = None) -> list[list]:
    """Bases of the lower central series terms; stops at 0 or when it stabilizes."""
    n = g.dim
    terms = [[g.basis_vector(i) for i in range(n)]]
    limit = n + 1 if limit is None else limit
    while terms[-1] and len(terms) <= limit:
        nxt = _bracket_span(g, terms[-1])
        if len(nxt) == len(terms[-1]):
            break  # stabilized above 0
        terms.append(nxt)
    return terms


def lower_central_series(g: GradedLieAlgebra) -> list[Subspace]:
    """g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ... ⊇ 0. Raises NotNilpotent if it stalls above 0."""
    terms = _lcs_raw(g)
    if terms[-1]:
        raise NotNilpotent(
            f"lower central series stabilizes at dimension {len(terms[-1])}")
    return [Subspace.span(g, t) if t else Subspace.zero(g) for t in terms]


def nilpotency_class(g: GradedLieAlgebra) -> int:
    return len(lower_central_series(g)) - 1


def derived_subalgebra(g: GradedLieAlgebra) -> Subspace:
    return Subspace.span(g, _bracket_span(g, [g.basis_vector(i) for i in range(g.dim)]))


def ideal_generated(g: GradedLieAlgebra, s: Subspace) -> Subspace:
    """Smallest ideal containing ``s``, by saturation under brackets with the basis."""
    n = g.dim
    current = list(s.basis)
    frontier = list(s.basis)
    while frontier:
        new = []
        for v in frontier:
            for i in range(n):
                w = g.bracket(g.basis_vector(i), v)
                if la.is_zero(w) or la.in_span(w, current + new, n):
                    continue
                new.append(w)
        current = current + new
        frontier = new
    return Subspace.span(g, current)


def is_ideal(g: GradedLieAlgebra, s: Subspace) -> bool:
    return all(s.contains(g.bracket(g.basis_vector(i), v))
               for v in s.basis for i in range(g.dim))


def quotient(g: GradedLieAlgebra, ideal: Subspace) -> GradedLieAlgebra:
    """g / ideal on the complement spanned by the non-pivot basis elements."""
    if not is_ideal(g, ideal):
        raise NotAnIdeal("subspace does not absorb brackets with g")
    n = g.dim
    red, pivots = la.rref(list(ideal.basis), n)
    pivset = set(pivots)
    keep = [k for k in range(n) if k not in pivset]
    pos = {k: a for a, k in enumerate(keep)}

    def project(v):
        v = list(v)
        for row, p in zip(red, pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return {pos[k]: v[k] for k in keep if v[k]}

    table = {}
    for a, i in enumerate(keep):
        for b in range(a + 1, len(keep)):
            j = keep[b]
            val = project(g.bracket(g.basis_vector(i), g.basis_vector(j)))
            if val:
                table[(a, b)] = val
    return GradedLieAlgebra(
        g.acting_rank,
        tuple(g.labels[k] for k in keep),
        tuple(g.weights[k] for k in keep),
        tuple(g.fields[k] for k in keep),
        table)


def subalgebra_on(g: GradedLieAlgebra, indices: Sequence[int]) -> GradedLieAlgebra:
    """Restrict to a set of basis elements whose span is closed under brackets."""
    pos = {k: a for a, k in enumerate(indices)}
    table = {}
    for (i, j), val in g.brackets.items():
        if i in pos and j in pos:
            if any(k not in pos for k in val):
                raise StructureError("basis subset is not closed under brackets")
            a, b = pos[i], pos[j]
            sign = 1
            if a > b:
                a, b, sign = b, a, -1
            table[(a, b)] = {pos[k]: sign * c for k, c in val.items()}
    return GradedLieAlgebra(
        g.acting_rank,
        tuple(g.labels[k] for k in indices),
        tuple(g.weights[k] for k in indices),
        tuple(g.fields[k] for k in indices),
        table)


def field_factor(g: GradedLieAlgebra, kind: str) -> GradedLieAlgebra:
    """Direct factor spanned by the basis elements of one field kind (possibly of dimension 0)."""
    return subalgebra_on(g, [i for i, f in enumerate(g.fields) if f.kind == kind])


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str  # labels | grading | field_separation | jacobi | nilpotency
    basis: tuple
    detail: str

    def __str__(self):
        where = ",".join(self.basis)
        return f"{self.kind} ({where}): {self.detail}"

    def as_dict(self):
        return {"kind": self.kind, "basis": list(self.basis), "detail": self.detail}


def validate(g: GradedLieAlgebra) -> list[Violation]:
    """All violations of the algebra invariants; empty means valid."""
    out: list[Violation] = []
    lab = g.labels
    seen: dict = {}
    for i, name in enumerate(lab):
        if name in seen:
            out.append(Violation("labels", (name,), f"label repeated at positions {seen[name]} and {i}"))
        else:
            seen[name] = i

    for (i, j), val in sorted(g.brackets.items()):
        target = la.add(g.weights[i], g.weights[j])
        for k in sorted(val):
            if g.weights[k] != target:
                out.append(Violation(
                    "grading", (lab[i], lab[j]),
                    f"[{lab[i]},{lab[j]}] has a component on {lab[k]} of weight "
                    f"{_fmt(g.weights[k])}, expected {_fmt(target)}"))
        if g.fields[i] != g.fields[j]:
            out.append(Violation(
                "field_separation", (lab[i], lab[j]),
                f"nonzero bracket between {g.fields[i].short()} and {g.fields[j].short()} elements"))
        else:
            for k in sorted(val):
                if g.fields[k] != g.fields[i]:
                    out.append(Violation(
                        "field_separation", (lab[i], lab[j]),
                        f"bracket lands on {lab[k]} of field {g.fields[k].short()}"))

    n = g.dim
    for i, j, k in combinations(range(n), 3):
        total: dict = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, coef in g.bracket_basis(a, b).items():
                for r, v in g.bracket_basis(m, c).items():
                    total[r] = total.get(r, 0) + coef * v
        if any(total.values()):
            out.append(Violation("jacobi", (lab[i], lab[j], lab[k]), "Jacobi sum is nonzero"))

    terms = _lcs_raw(g)
    if terms[-1]:
        out.append(Violation(
            "nilpotency", (),
            f"lower central series stabilizes at dimension {len(terms[-1])}"))
    return out


def _fmt(w) -> str:
    return "(" + ",".join(str(x) for x in w) + ")"
