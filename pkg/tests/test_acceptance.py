"""One test per acceptance criterion; each prints a PASS/FAIL line."""
import io
import json
import random
import warnings
from fractions import Fraction
from itertools import combinations

from dehnscope import exactla as la
from dehnscope.classify import (CompactionData, DehnClass, cone_dimension, dehn_classify,
                                gdv_cone_type, gdv_npc, hyperbolicity, orthogonal_complement, p0)
from dehnscope.cli import main, selftest
from dehnscope.documents import from_algebra, parse_document, serialize_document
from dehnscope.exactla import RationalMatrix
from dehnscope.families import abels, baumslag_host, fixtures, gdv, heintze, sol
from dehnscope.homology import (boundary_matrix, candidate_weights, homology_detail,
                                homology_dim, total_homology_dim)
from dehnscope.liecore import FieldTag, GradedLieAlgebra
from dehnscope.tameness import segment_contains_zero, tameness_report
from dehnscope.weightmod import diagram, is_standard
from randalg import random_algebra, random_points
from test_classify import _grid_positive
from test_exactla import _random_matrix, caratheodory_inside, naive_rank
from test_homology import full_ce_h2
from test_tameness import _common_positive_point

F = Fraction
SEED = 20240601
N = 1000


def report(capsys, n, checks):
    """checks: list of (description, bool)."""
    failed = [d for d, ok in checks if not ok]
    with capsys.disabled():
        status = "PASS" if not failed else "FAIL"
        detail = "; ".join(failed) if failed else f"{len(checks)} checks"
        print(f"\nCRITERION {n}: {status} ({detail})")
    assert not failed


def _flags(r):
    return (r.tame, r.strongly_2tame, r.two_tame)


def test_criterion_1_sol(capsys):
    g = sol().algebra
    v = dehn_classify(g)
    report(capsys, 1, [
        ("tameness all false", _flags(tameness_report(diagram(g))) == (False, False, False)),
        ("H2_0 = 1", homology_dim(g, 2) == 1),
        ("exact exponential", v.exact == DehnClass.EXPONENTIAL),
        ("cone dimension 1", cone_dimension(g) == 1),
    ])


def test_criterion_2_sol_nonarch(capsys):
    g = sol(FieldTag.nonarch(2, 0)).algebra
    report(capsys, 2, [("not compactly presented", not dehn_classify(g).compactly_presented)])


def test_criterion_3_abels_nonarch(capsys):
    f = FieldTag.nonarch(2, 0)
    report(capsys, 3, [
        ("A3 not CP", not dehn_classify(abels(3, f).algebra).compactly_presented),
        ("A4 CP", dehn_classify(abels(4, f).algebra).compactly_presented),
    ])


def _abels4_weights_by_commutator():
    """ad(D) E_ij for D = diag(0, a, b, 0) computed with 4x4 matrices; the
    coefficient of E_ij, read as a function of (a, b), is the weight."""
    def unit(i, j):
        return RationalMatrix.from_rows([[int((r, c) == (i, j)) for c in range(4)]
                                         for r in range(4)])
    out = {}
    for i, j in combinations(range(4), 2):
        w = []
        for d in ((0, 1, 0, 0), (0, 0, 1, 0)):
            dm = RationalMatrix.from_rows([[d[r] if r == c else 0 for c in range(4)]
                                           for r in range(4)])
            e = unit(i, j)
            comm = (dm @ e) - (e @ dm)
            w.append(comm[i, j])
        out[f"e{i + 1}{j + 1}"] = tuple(w)
    return out


def test_criterion_4_abels4(capsys):
    g = abels(4).algebra
    d = diagram(g)
    r = tameness_report(d)
    det = homology_detail(g, 2, g.zero_weight())
    ws = dict(zip(g.labels, g.weights))
    principal = {lab for lab in g.labels
                 if any(e.principal and e.weight == ws[lab] for e in d.entries)}
    report(capsys, 4, [
        ("weights match commutator oracle", ws == _abels4_weights_by_commutator()),
        ("e14 at zero", ws["e14"] == (0, 0)),
        ("principal weights are 12, 23, 34", principal == {"e12", "e23", "e34"}),
        ("tameness (false, false, true)", _flags(r) == (False, False, True)),
        ("ker d2 at 0 is 1", det.kernel_dim == 1),
        ("rank d3 at 0 is 1", det.image_rank == 1),
        ("H2_0 = 0", det.dim == 0),
        ("brute-force CE agrees", full_ce_h2(g) == total_homology_dim(g, 2)),
        ("upper cubic", dehn_classify(g).upper == DehnClass.CUBIC),
        ("cone dimension 2", cone_dimension(g) == 2),
    ])


def test_criterion_5_baumslag_host(capsys):
    checks = []
    for p in (2, 3, 5):
        g = baumslag_host(p).algebra
        v = dehn_classify(g)
        checks += [
            (f"p={p} strongly 2-tame", tameness_report(diagram(g)).strongly_2tame),
            (f"p={p} exact quadratic", v.exact == DehnClass.QUADRATIC),
            (f"p={p} R7 fired", "R7" in v.rules()),
            (f"p={p} rank 2", g.acting_rank == 2),
        ]
    report(capsys, 5, checks)


def test_criterion_6_heintze(capsys):
    g = heintze([1, 1]).algebra
    val = p0(CompactionData.from_diagram(diagram(g)))
    report(capsys, 6, [
        ("hyperbolic(connected)", str(hyperbolicity(g)) == "hyperbolic(connected)"),
        ("exact linear", dehn_classify(g).exact == DehnClass.LINEAR),
        ("cone dimension 1", cone_dimension(g) == 1),
        ("p0 = 2 rational", val.is_rational and val.rational_part == 2),
    ])


GDV_CASES = [
    (2, [(1, -1)], "real_tree"),
    (2, [(1, 1)], "sol_like"),
    (2, [], "product_of_trees"),
    (3, [(1, 1, 1)], "T_Dd"),
    (3, [(1, 1, -1)], "T_Dkl(2,1)"),
]


def test_criterion_7_gdv(capsys):
    checks = []
    for d, v, kind in GDV_CASES:
        perp = orthogonal_complement(d, v)
        g = gdv(d, v).algebra
        checks += [
            (f"{d},{v} type {kind}", str(gdv_cone_type(d, v)) == kind),
            (f"{d},{v} npc agrees with positive vector", gdv_npc(d, v) == _grid_positive(perp)),
            (f"{d},{v} cone dimension", cone_dimension(g) == len(perp)),
        ]
    report(capsys, 7, checks)


def _heisenberg():
    return GradedLieAlgebra.build(1, [("x", (1,)), ("y", (1,)), ("z", (2,))],
                                  {("x", "y"): {"z": 1}})


def test_criterion_8_properties(capsys):
    rng = random.Random(SEED)
    counts = dict.fromkeys(["d2d3", "chain", "hull", "rank_nullity", "perm", "interval"], 0)
    ok = dict.fromkeys(counts, True)
    for _ in range(N):
        g = random_algebra(rng, max_size=4)
        for gm in candidate_weights(g, 3):
            if not (boundary_matrix(g, 2, gm) @ boundary_matrix(g, 3, gm)).is_zero():
                ok["d2d3"] = False
        counts["d2d3"] += 1
        d = diagram(g)
        r = tameness_report(d)
        ok["chain"] &= (not r.tame or r.strongly_2tame) and (not r.strongly_2tame or r.two_tame)
        counts["chain"] += 1
        ok["hull"] &= r.hull_certificate.check(d.principal_weights())
        counts["hull"] += 1
        order = list(range(g.dim))
        rng.shuffle(order)
        p = g.permuted(order)
        ok["perm"] &= all(homology_dim(p, k) == homology_dim(g, k) for k in (1, 2))
        counts["perm"] += 1
    while counts["interval"] < N:
        g = random_algebra(rng, max_size=4)
        if is_standard(g):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                v = dehn_classify(g)
            ok["interval"] &= v.lower <= v.upper and bool(v.rules_fired)
            counts["interval"] += 1
    for _ in range(N):
        rows, cols = rng.randint(1, 7), rng.randint(1, 7)
        m = RationalMatrix.from_rows(_random_matrix(rng, rows, cols), cols)
        ker = la.kernel_basis(m)
        ok["rank_nullity"] &= la.rank(m) + len(ker) == cols and all(
            la.is_zero(m.apply(v)) for v in ker)
        counts["rank_nullity"] += 1
    checks = [(f"{k} over {counts[k]} cases", ok[k] and counts[k] >= N) for k in counts]
    checks.append(("Heisenberg total H2 = 2", total_homology_dim(_heisenberg(), 2) == 2
                   and full_ce_h2(_heisenberg()) == 2))
    report(capsys, 8, checks)


def test_criterion_9_oracles(capsys):
    rng = random.Random(SEED + 1)
    bareiss = hull = segment = True
    for _ in range(N):
        r, c = rng.randint(1, 12), rng.randint(1, 12)
        rows = _random_matrix(rng, r, c)
        bareiss &= la.rank(RationalMatrix.from_rows(rows, c)) == naive_rank(rows)
    for _ in range(N):
        dim = rng.randint(1, 3)
        pts = random_points(rng, dim, rng.randint(1, 7))
        hull &= la.zero_in_hull(pts).inside == caratheodory_inside(pts)
    cases = 0
    while cases < N:
        dim = rng.randint(1, 3)
        a = random_points(rng, dim, 1, -2, 2)[0]
        b = la.scale(F(-rng.randint(1, 3), rng.randint(1, 3)), a) if rng.random() < 0.3 \
            else random_points(rng, dim, 1, -2, 2)[0]
        if la.is_zero(a) or la.is_zero(b):
            continue
        cases += 1
        segment &= segment_contains_zero(a, b) == (_common_positive_point(a, b, rng) is None)
    report(capsys, 9, [
        (f"Bareiss vs naive over {N} matrices", bareiss),
        (f"hull vs Caratheodory over {N} point sets", hull),
        (f"segment vs half-space over {N} pairs", segment),
    ])


def test_criterion_10_cli(capsys, tmp_path):
    round_trip = determinism = True
    for m in fixtures():
        doc = from_algebra(m.algebra, m.name)
        text = serialize_document(doc)
        again = parse_document(text)
        round_trip &= again == doc and serialize_document(again) == text
        path = tmp_path / f"{m.name}.json"
        path.write_text(text)
        outs = []
        for _ in range(2):
            code = main(["analyze", str(path), "--format", "json"])
            outs.append((code, capsys.readouterr().out))
        determinism &= outs[0] == outs[1] and outs[0][0] == 0
    good = tmp_path / "sol.json"  # written by the loop above
    bad_parse = tmp_path / "bad.json"
    bad_parse.write_text("{")
    raw = json.loads(good.read_text())
    raw["brackets"] = [{"a": "x", "b": "y", "value": [["y", "1"]]}]
    bad_valid = tmp_path / "invalid.json"
    bad_valid.write_text(json.dumps(raw))
    codes = []
    for path in (good, bad_valid, bad_parse):
        codes.append(main(["analyze", str(path)]))
        capsys.readouterr()
    st = selftest(stream=io.StringIO())
    report(capsys, 10, [
        ("round trip bit-exact for all family documents", round_trip),
        ("reports identical across two runs", determinism),
        ("exit codes 0/1/2", codes == [0, 1, 2]),
        ("selftest clean", st == 0),
    ])
