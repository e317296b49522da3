"""Weight components of the Chevalley-Eilenberg complex in degrees up to 3.

Conventions: d2(x^y) = [x,y] and d3(x^y^z) = [x,y]^z - [x,z]^y + [y,z]^x,
d1 = 0.  Every differential preserves weight, so each weight gamma gives a
finite subcomplex.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import exactla as la
from .exactla import RationalMatrix
from .liecore import NONARCHIMEDEAN, GradedLieAlgebra, field_factor


@dataclass(frozen=True)
class GradedChainBasis:
    degree: int
    weight: tuple
    elements: tuple  # strictly increasing index tuples

    def __len__(self):
        return len(self.elements)

    def position(self) -> dict:
        return {e: i for i, e in enumerate(self.elements)}


def _weight_sum(g: GradedLieAlgebra, idx) -> tuple:
    acc = g.zero_weight()
    for i in idx:
        acc = la.add(acc, g.weights[i])
    return acc


@lru_cache(maxsize=128)
def _chains_by_weight(g: GradedLieAlgebra, k: int) -> dict:
    out: dict = {}
    for c in combinations(range(g.dim), k):
        out.setdefault(_weight_sum(g, c), []).append(c)
    return {w: tuple(v) for w, v in out.items()}


def chain_basis(g: GradedLieAlgebra, k: int, gamma: Sequence) -> GradedChainBasis:
    if k < 0:
        raise ValueError("degree must be nonnegative")
    gamma = la.vec(gamma)
    return GradedChainBasis(k, gamma, _chains_by_weight(g, k).get(gamma, ()))


def _wedge_one(i: int, rest: tuple):
    """Sort e_i ^ e_rest (rest strictly increasing) -> (sign, tuple) or None."""
    if i in rest:
        return None
    pos = sum(1 for r in rest if r < i)
    out = rest[:pos] + (i,) + rest[pos:]
    return (-1 if pos % 2 else 1), out


def _boundary_of(g: GradedLieAlgebra, elem: tuple) -> dict:
    """Image of a basis chain under the differential, as {chain tuple: coefficient}."""
    out: dict = {}

    def put(key, c):
        out[key] = out.get(key, 0) + c

    if len(elem) == 2:
        x, y = elem
        for k, c in g.bracket_basis(x, y).items():
            put((k,), c)
    elif len(elem) == 3:
        x, y, z = elem
        for (a, b, rest, s) in ((x, y, z, 1), (x, z, y, -1), (y, z, x, 1)):
            for k, c in g.bracket_basis(a, b).items():
                w = _wedge_one(k, (rest,))
                if w is not None:
                    put(w[1], s * w[0] * c)
    return {k: v for k, v in out.items() if v}


def boundary_matrix(g: GradedLieAlgebra, k: int, gamma: Sequence) -> RationalMatrix:
    """Matrix of d_k on the gamma component; rows index (k-1)-chains, columns k-chains."""
    if k not in (1, 2, 3):
        raise ValueError("boundary maps are materialized for k = 1, 2, 3 only")
    src = chain_basis(g, k, gamma)
    dst = chain_basis(g, k - 1, gamma)
    rows = [[Fraction(0)] * len(src) for _ in range(len(dst))]
    if k >= 2:
        pos = dst.position()
        for j, e in enumerate(src.elements):
            for key, c in _boundary_of(g, e).items():
                rows[pos[key]][j] += c
    return RationalMatrix.from_rows(rows, len(src))


@dataclass(frozen=True)
class HomologyDetail:
    degree: int
    weight: tuple
    chains: int
    kernel_dim: int
    image_rank: int

    @property
    def dim(self) -> int:
        return self.kernel_dim - self.image_rank


def homology_detail(g: GradedLieAlgebra, k: int, gamma: Sequence) -> HomologyDetail:
    if k not in (1, 2):
        raise ValueError("homology is computed in degrees 1 and 2 only")
    dk = boundary_matrix(g, k, gamma)
    kernel = dk.cols - la.rank(dk)
    image = la.rank(boundary_matrix(g, k + 1, gamma))
    return HomologyDetail(k, la.vec(gamma), dk.cols, kernel, image)


def homology_dim(g: GradedLieAlgebra, k: int, gamma: Sequence | None = None) -> int:
    if gamma is None:
        gamma = g.zero_weight()
    return homology_detail(g, k, gamma).dim


def candidate_weights(g: GradedLieAlgebra, k: int) -> list[tuple]:
    """Every weight carried by some k-chain."""
    return sorted(_chains_by_weight(g, k))


def homology_profile(g: GradedLieAlgebra, k: int, jobs: int = 1) -> dict:
    """{gamma: dim H_k(g)_gamma} over every weight where the chain group is nonzero."""
    gammas = candidate_weights(g, k)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            dims = list(pool.map(lambda gm: homology_dim(g, k, gm), gammas))
    else:
        dims = [homology_dim(g, k, gm) for gm in gammas]
    return dict(zip(gammas, dims))


def total_homology_dim(g: GradedLieAlgebra, k: int, jobs: int = 1) -> int:
    return sum(homology_profile(g, k, jobs).values())


def h2_zero(g: GradedLieAlgebra) -> int:
    return homology_dim(g, 2)


def h2_zero_nonarch(g: GradedLieAlgebra) -> int:
    """Degree-zero H2 of the quotient by the archimedean factor (the nonarchimedean factor)."""
    f = field_factor(g, NONARCHIMEDEAN)
    if f.dim == 0:
        return 0
    return homology_dim(f, 2)


def cycle_representatives(g: GradedLieAlgebra, gamma: Sequence | None = None) -> list[str]:
    """Readable 2-cycles at gamma that are not boundaries (one per homology dimension)."""
    if gamma is None:
        gamma = g.zero_weight()
    d2 = boundary_matrix(g, 2, gamma)
    d3 = boundary_matrix(g, 3, gamma)
    basis = chain_basis(g, 2, gamma)
    n = len(basis)
    image = [d3.column(j) for j in range(d3.cols)]
    chosen = list(la.row_space_basis(image, n)) if n else []
    reps = []
    for v in la.kernel_basis(d2):
        if not la.in_span(v, chosen, n):
            chosen.append(v)
            reps.append(format_chain(g, basis, v))
    return reps


def format_chain(g: GradedLieAlgebra, basis: GradedChainBasis, v) -> str:
    parts = []
    for c, e in zip(v, basis.elements):
        if not c:
            continue
        name = "∧".join(g.labels[i] for i in e)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coef = "" if mag == 1 else f"{mag}*"
        parts.append((sign, coef + name))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return head + "".join(f" {s} {t}" for s, t in parts[1:])
