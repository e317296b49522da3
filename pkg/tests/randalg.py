"""Seeded generators of valid graded nilpotent Lie algebras for property tests.

Building blocks are pattern subalgebras of strictly upper triangular matrices:
a set S of positions (i, j), i < j, closed under (i, j), (j, k) -> (i, k).
E_ij gets weight h_i - h_j for random rational vectors h_i.  Blocks are then
rescaled, mixed inside weight spaces, summed with abelian pieces and given
field tags.
"""
from __future__ import annotations

import random
from fractions import Fraction

from dehnscope.liecore import FieldTag, GradedLieAlgebra

FIELDS = (FieldTag.arch(), FieldTag.nonarch(2, 0), FieldTag.nonarch(3, 3), FieldTag.nonarch(4, 2))


def _closed_pattern(rng: random.Random, n: int) -> list:
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    s = {c for c in cells if rng.random() < 0.55}
    changed = True
    while changed:
        changed = False
        for (i, j) in list(s):
            for (j2, k) in list(s):
                if j2 == j and (i, k) not in s:
                    s.add((i, k))
                    changed = True
    return sorted(s)


def _vec(rng, d, lo=-2, hi=2):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(d))


def pattern_block(rng: random.Random, d: int, n: int, field: FieldTag, prefix: str):
    """(labels, weights, fields, bracket dict on local indices)."""
    cells = _closed_pattern(rng, n)
    h = [_vec(rng, d) for _ in range(n)]
    scale = [Fraction(rng.choice([1, 1, 2, -1, 3]), rng.choice([1, 1, 2])) for _ in cells]
    pos = {c: k for k, c in enumerate(cells)}
    labels = [f"{prefix}{i}{j}" for i, j in cells]
    weights = [tuple(a - b for a, b in zip(h[i], h[j])) for i, j in cells]
    br = {}
    for a, (i, j) in enumerate(cells):
        for b, (j2, k) in enumerate(cells):
            if j2 == j and (i, k) in pos:
                # f = s E: [f_a, f_b] = s_a s_b / s_c f_c
                c = pos[(i, k)]
                coef = scale[a] * scale[b] / scale[c]
                lo, hi = (a, b) if a < b else (b, a)
                sign = 1 if a < b else -1
                br[(lo, hi)] = {c: sign * coef}
    return labels, weights, [field] * len(cells), br


def direct_sum(d: int, blocks) -> GradedLieAlgebra:
    labels, weights, fields, table = [], [], [], {}
    off = 0
    for lab, w, f, br in blocks:
        for (i, j), val in br.items():
            table[(i + off, j + off)] = {k + off: c for k, c in val.items()}
        labels += lab
        weights += w
        fields += f
        off += len(lab)
    return GradedLieAlgebra(d, tuple(labels), tuple(weights), tuple(fields), table)


def mix_weight_spaces(rng: random.Random, g: GradedLieAlgebra) -> GradedLieAlgebra:
    """Random invertible change of basis inside each (weight, field) block."""
    n = g.dim
    p = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    groups = {}
    for i, key in enumerate(zip(g.weights, g.fields)):
        groups.setdefault(key, []).append(i)
    for idx in groups.values():
        for a in idx:
            for b in idx:
                if a < b and rng.random() < 0.5:
                    p[a][b] = Fraction(rng.randint(-2, 2))  # unitriangular, so invertible
    # new basis f_b = sum_k p[k][b] e_k; inverse by back substitution
    inv = _inverse_unitriangular(p)

    def to_new(v):
        return [sum(inv[r][k] * v[k] for k in range(n)) for r in range(n)]

    def br(x, y):
        return g.bracket(x, y)

    cols = [tuple(p[k][b] for k in range(n)) for b in range(n)]
    table = {}
    for a in range(n):
        for b in range(a + 1, n):
            val = to_new(br(cols[a], cols[b]))
            val = {k: c for k, c in enumerate(val) if c}
            if val:
                table[(a, b)] = val
    return GradedLieAlgebra(g.acting_rank, g.labels, g.weights, g.fields, table)


def _inverse_unitriangular(p):
    n = len(p)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        for row in range(n - 1, -1, -1):
            s = sum(p[row][k] * inv[k][col] for k in range(row + 1, n))
            inv[row][col] = Fraction(int(row == col)) - s
    return inv


def random_algebra(rng: random.Random, max_size: int = 5, max_rank: int = 3,
                   mixed_fields: bool = True) -> GradedLieAlgebra:
    d = rng.randint(1, max_rank)
    blocks = []
    nblocks = rng.randint(1, 2)
    for b in range(nblocks):
        field = rng.choice(FIELDS) if mixed_fields else FIELDS[0]
        blocks.append(pattern_block(rng, d, rng.randint(2, max_size), field, chr(ord("a") + b)))
    if rng.random() < 0.5:
        k = rng.randint(1, 2)
        field = rng.choice(FIELDS) if mixed_fields else FIELDS[0]
        blocks.append(([f"z{i}" for i in range(k)], [_vec(rng, d) for _ in range(k)],
                       [field] * k, {}))
    g = direct_sum(d, blocks)
    if g.dim == 0:
        g = direct_sum(d, [(["z0"], [_vec(rng, d, 1, 2)], [FIELDS[0]], {})])
    if rng.random() < 0.5:
        g = mix_weight_spaces(rng, g)
    return g


def random_points(rng: random.Random, dim: int, count: int, lo: int = -3, hi: int = 3):
    return [tuple(Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2, 3])) for _ in range(dim))
            for _ in range(count)]
