"""Exact rational linear algebra and convex feasibility.

Everything here works over :class:`fractions.Fraction`; no floating point
value ever enters a decision.  Matrices are dense and small (a few hundred
rows at most), so plain nested tuples are used.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import DimensionMismatch

Rational = Fraction
Vector = tuple  # tuple[Fraction, ...]


def rat(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction. Floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def vec(xs: Iterable) -> Vector:
    return tuple(rat(x) for x in xs)


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def primitive_integer(v: Sequence[Fraction]) -> Vector:
    """Positive multiple of ``v`` with coprime integer entries."""
    if is_zero(v):
        return tuple(Fraction(0) for _ in v)
    den = lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = gcd(*ints)
    return tuple(Fraction(i // g) for i in ints)


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> RationalMatrix:
        rows = [vec(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatch("column count required for a matrix with no rows")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RationalMatrix:
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[Vector]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def apply(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} vs {self.cols} columns")
        return tuple(dot(self.row(i), v) for i in range(self.rows))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        return RationalMatrix.from_rows(
            [[dot(self.row(i), c) for c in cols] for i in range(self.rows)], other.cols)

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("shape mismatch")
        return RationalMatrix(self.rows, self.cols,
                              tuple(a - b for a, b in zip(self.entries, other.entries)))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.entries)


def _integer_rows(m: RationalMatrix) -> list[list[int]]:
    out = []
    for r in m.to_rows():
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def rank(m: RationalMatrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination.

    Each row is first cleared of denominators, which does not change the rank;
    the elimination itself then runs on Python integers with exact divisions.
    """
    a = _integer_rows(m)
    nrows, ncols = m.rows, m.cols
    r = 0
    prev = 1
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        prow = a[r]
        for i in range(r + 1, nrows):
            row = a[i]
            f = row[c]
            for j in range(c + 1, ncols):
                row[j] = (row[j] * p - f * prow[j]) // prev
            row[c] = 0
        prev = p
        r += 1
    return r


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    a = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def kernel_basis(m: RationalMatrix) -> list[Vector]:
    """Basis of {v : m v = 0}, one vector per free column (free entry set to 1)."""
    red, pivots = rref(m.to_rows(), m.cols)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def row_space_basis(vectors: Sequence[Sequence[Fraction]], n: int) -> list[Vector]:
    red, _ = rref(vectors, n)
    return [tuple(r) for r in red]


def span_rank(vectors: Sequence[Sequence[Fraction]], n: int) -> int:
    if not vectors:
        return 0
    return rank(RationalMatrix.from_rows(vectors, n))


def in_span(v: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]], n: int) -> bool:
    return span_rank(list(vectors) + [v], n) == span_rank(vectors, n)


def inverse(m: RationalMatrix) -> RationalMatrix:
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    n = m.rows
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m.to_rows())]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return RationalMatrix.from_rows([r[n:] for r in red[:n]], n)


def solve(m: RationalMatrix, b: Sequence[Fraction]) -> Vector | None:
    """Some solution of m x = b, or None when the system is inconsistent."""
    aug = [list(r) + [bi] for r, bi in zip(m.to_rows(), b)]
    red, pivots = rref(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return tuple(x)


def intersect(a: Sequence[Vector], b: Sequence[Vector], n: int) -> list[Vector]:
    """Basis of span(a) ∩ span(b) inside Q^n."""
    if not a or not b:
        return []
    # kernel of [A | -B] in the coefficients
    cols = list(a) + [scale(-1, v) for v in b]
    mat = RationalMatrix.from_rows([[c[i] for c in cols] for i in range(n)], len(cols))
    out = []
    for k in kernel_basis(mat):
        w = zero_vector(n)
        for coef, v in zip(k[:len(a)], a):
            if coef:
                w = add(w, scale(coef, v))
        out.append(w)
    return row_space_basis(out, n)


# ---------------------------------------------------------------------------
# exact LP feasibility


@dataclass(frozen=True)
class Feasibility:
    """Outcome of ``{x >= 0 : A x = b}``.

    Exactly one of ``point`` and ``farkas`` is set. A Farkas vector ``z``
    satisfies ``A^T z >= 0`` and ``b . z < 0``.
    """

    point: Vector | None
    farkas: Vector | None

    @property
    def feasible(self) -> bool:
        return self.point is not None


def nonnegative_solution(a: RationalMatrix, b: Sequence[Fraction]) -> Feasibility:
    """Phase-one simplex with Bland's rule on exact rationals."""
    m, n = a.rows, a.cols
    if len(b) != m:
        raise DimensionMismatch(f"{m} constraints but right-hand side of length {len(b)}")
    b = [rat(x) for x in b]
    signs = [(-1 if bi < 0 else 1) for bi in b]
    # tableau columns: n originals, m artificials, then the rhs
    tab = []
    for i in range(m):
        s = signs[i]
        row = [s * x for x in a.row(i)]
        row += [Fraction(int(i == k)) for k in range(m)]
        row.append(s * b[i])
        tab.append(row)
    width = n + m
    # reduced costs of the phase-one objective sum(artificials)
    cost = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(n):
            cost[j] -= tab[i][j]
        cost[width] -= tab[i][width]
    basis = [n + i for i in range(m)]

    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][width] / tab[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:  # phase one is bounded below by 0, cannot happen
            raise ArithmeticError("unbounded phase-one objective")
        _pivot(tab, cost, leave, enter)
        basis[leave] = enter

    objective = -cost[width]
    if objective == 0:
        x = [Fraction(0)] * n
        for i, var in enumerate(basis):
            if var < n:
                x[var] = tab[i][width]
        return Feasibility(tuple(x), None)
    # duals y_k = 1 - reduced cost of artificial k; z = -S y
    z = tuple(-signs[k] * (1 - cost[n + k]) for k in range(m))
    return Feasibility(None, z)


def _pivot(tab, cost, r, c):
    p = tab[r][c]
    tab[r] = [x / p for x in tab[r]]
    prow = tab[r]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [x - f * y for x, y in zip(row, prow)]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [x - f * y for x, y in zip(cost, prow)]


# ---------------------------------------------------------------------------
# zero in the convex hull


@dataclass(frozen=True)
class HullCertificate:
    verdict: str  # "inside" | "outside"
    coefficients: Vector | None = None
    separator: Vector | None = None

    @property
    def inside(self) -> bool:
        return self.verdict == "inside"

    def check(self, points: Sequence[Sequence[Fraction]]) -> bool:
        """Re-verify the certificate against ``points`` from scratch."""
        if self.verdict == "inside":
            c = self.coefficients
            if c is None or len(c) != len(points) or not points:
                return False
            if any(x < 0 for x in c) or sum(c) != 1:
                return False
            total = zero_vector(len(points[0]))
            for coef, p in zip(c, points):
                total = add(total, scale(coef, p))
            return is_zero(total)
        if self.verdict == "outside":
            s = self.separator
            if s is None:
                return False
            return all(len(p) == len(s) and dot(s, p) > 0 for p in points)
        return False


def _common_dim(points, dim):
    dims = {len(p) for p in points}
    if len(dims) > 1:
        raise DimensionMismatch(f"points of differing lengths {sorted(dims)}")
    if dims:
        d = dims.pop()
        if dim is not None and d != dim:
            raise DimensionMismatch(f"points have length {d}, expected {dim}")
        return d
    return dim or 0


def zero_in_hull(points: Sequence[Sequence], dim: int | None = None) -> HullCertificate:
    """Decide whether 0 lies in the convex hull of ``points``, with a certificate.

    Inside: convex coefficients reproducing 0.  Outside: an integer vector whose
    dot product with every point is strictly positive.
    """
    pts = [vec(p) for p in points]
    d = _common_dim(pts, dim)
    if not pts:
        return HullCertificate("outside", separator=zero_vector(d))
    rows = [[p[i] for p in pts] for i in range(d)]
    rows.append([Fraction(1)] * len(pts))
    a = RationalMatrix.from_rows(rows, len(pts))
    b = [Fraction(0)] * d + [Fraction(1)]
    res = nonnegative_solution(a, b)
    if res.feasible:
        return HullCertificate("inside", coefficients=res.point)
    z = res.farkas
    y, t = z[:d], z[d]
    # p.y + t >= 0 and t < 0, so p.y >= -t > 0
    sep = primitive_integer(y)
    cert = HullCertificate("outside", separator=sep)
    assert t < 0 and cert.check(pts), "Farkas certificate failed to verify"
    return cert
