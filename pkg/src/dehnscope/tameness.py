"""Convex-position tests on weight diagrams: tame, strongly 2-tame, 2-tame."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

from . import exactla as la
from .errors import DimensionMismatch
from .exactla import HullCertificate
from .weightmod import WeightDiagram

PAIR_READING = ("weight pairs are unordered and may repeat a weight; a zero weight "
                "therefore defeats strong 2-tameness on its own")


def segment_contains_zero(a: Sequence, b: Sequence) -> bool:
    """Whether 0 lies on the closed segment [a, b].

    Exact test: a = 0, or b = 0, or a = -c b for some rational c > 0.
    """
    if len(a) != len(b):
        raise DimensionMismatch(f"weights of length {len(a)} and {len(b)}")
    a, b = la.vec(a), la.vec(b)
    if la.is_zero(a) or la.is_zero(b):
        return True
    k = next(i for i, x in enumerate(b) if x)
    c = -a[k] / b[k]
    if c <= 0:
        return False
    return all(x == -c * y for x, y in zip(a, b))


def opposed_pairs(weights: Sequence) -> list[tuple]:
    """Unordered pairs (with repetition) of distinct weight vectors whose segment meets 0."""
    ws = sorted({la.vec(w) for w in weights})
    return [(a, b) for a, b in combinations_with_replacement(ws, 2)
            if segment_contains_zero(a, b)]


@dataclass(frozen=True)
class TamenessReport:
    tame: bool
    strongly_2tame: bool
    two_tame: bool
    strong_witnesses: tuple  # pairs over all weights
    principal_witnesses: tuple  # pairs over principal weights
    hull_certificate: HullCertificate
    notes: tuple = field(default=(PAIR_READING,))

    @property
    def witness_pairs(self) -> tuple:
        return self.strong_witnesses

    def as_dict(self) -> dict:
        return {"tame": self.tame, "strongly_2tame": self.strongly_2tame,
                "two_tame": self.two_tame}


def tameness_report(d: WeightDiagram) -> TamenessReport:
    """Decide the three conditions; multiplicities play no role."""
    principal = d.principal_weights()
    cert = la.zero_in_hull(principal, d.acting_rank)
    strong = opposed_pairs(d.weights())
    two = opposed_pairs(principal)
    rep = TamenessReport(
        tame=not cert.inside,
        strongly_2tame=not strong,
        two_tame=not two,
        strong_witnesses=tuple(strong),
        principal_witnesses=tuple(two),
        hull_certificate=cert,
    )
    assert rep.two_tame or not rep.strongly_2tame
    assert rep.strongly_2tame or not rep.tame
    return rep
