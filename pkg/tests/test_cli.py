import io
import json
import subprocess
import sys
from dataclasses import replace

import pytest

from dehnscope.cli import main, selftest
from dehnscope.documents import (from_algebra, parse_document, serialize_document, to_algebra)
from dehnscope.errors import ParseError
from dehnscope.families import (Known, abels, abels_ungraded, fixtures, recognized_facts,
                                sol)
from dehnscope.report import build_report


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def emit(tmp_path, name, *args):
    path = tmp_path / f"{name}.json"
    assert main(["family", name, *args, "--emit", str(path)]) == 0
    return path


def test_round_trip_all_fixtures():
    for m in fixtures():
        doc = from_algebra(m.algebra, m.name)
        text = serialize_document(doc)
        again = parse_document(text)
        assert again == doc
        assert serialize_document(again) == text
        assert to_algebra(again) == m.algebra


def test_rational_strings_are_canonical():
    text = serialize_document(from_algebra(abels(4).algebra, "a"))
    raw = json.loads(text)
    assert raw["generators"][0]["weight"] == ["-1", "0"]
    doc = parse_document(text.replace('"-1"', '"-2/2"', 1))
    assert serialize_document(doc) == text


def test_family_examples(tmp_path, capsys):
    code, out, _ = run(["family", "abels", "--d", "4", "--field", "arch"], capsys)
    assert code == 0 and len(json.loads(out)["generators"]) == 6
    code, out, _ = run(["family", "sol", "--field", "nonarch", "--residue", "2"], capsys)
    gens = json.loads(out)["generators"]
    assert len(gens) == 2 and all(g["field"]["kind"] == "nonarchimedean" for g in gens)
    code, out, _ = run(["family", "gdv", "--d", "3", "--v", "1,1,-1"], capsys)
    assert json.loads(out)["acting_rank"] == 2


def test_exit_codes(tmp_path, capsys):
    good = emit(tmp_path, "sol")
    assert run(["analyze", str(good)], capsys)[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text('{"schema": "dehnscope/v1", "name": ')
    code, _, err = run(["analyze", str(bad)], capsys)
    assert code == 2 and "line 1" in err
    raw = json.loads(good.read_text())
    raw["generators"][0]["weight"] = ["1/0"]
    bad.write_text(json.dumps(raw))
    code, _, err = run(["analyze", str(bad)], capsys)
    assert code == 2 and "generators[0].weight[0]" in err
    raw = json.loads(good.read_text())
    raw["extra"] = 1
    bad.write_text(json.dumps(raw))
    assert run(["analyze", str(bad)], capsys)[0] == 2
    # valid JSON, but the grading is broken: [x, y] lands in weight 0, not in y's weight
    raw = json.loads(good.read_text())
    raw["brackets"] = [{"a": "x", "b": "y", "value": [["y", "1"]]}]
    bad.write_text(json.dumps(raw))
    code, _, err = run(["analyze", str(bad)], capsys)
    assert code == 1 and "grading" in err
    assert run(["analyze", str(tmp_path / "missing.json")], capsys)[0] == 2
    assert run(["family", "nope"], capsys)[0] == 2
    assert run(["family", "abels", "--d", "2"], capsys)[0] == 2


def test_parse_error_locus():
    with pytest.raises(ParseError) as e:
        parse_document('{"schema": "dehnscope/v1", "mode": "diagram", "name": "x", '
                       '"acting_rank": 1, "generators": [{"label": "x", "weight": [0.5], '
                       '"field": {"kind": "archimedean"}}], "brackets": []}')
    assert e.value.locus == "generators[0].weight[0]"


def test_deterministic_reports(tmp_path, capsys):
    for m in fixtures():
        path = tmp_path / f"{m.name}.json"
        path.write_text(serialize_document(from_algebra(m.algebra, m.name)))
        first = run(["analyze", str(path), "--format", "json"], capsys)
        second = run(["analyze", str(path), "--format", "json"], capsys)
        assert first == second and first[0] == 0


def test_analyze_emitted_equals_in_memory(tmp_path, capsys):
    for m in fixtures():
        path = tmp_path / f"{m.name}.json"
        path.write_text(serialize_document(from_algebra(m.algebra, m.name)))
        _, out, _ = run(["analyze", str(path), "--format", "json"], capsys)
        assert json.loads(out) == json.loads(json.dumps(
            build_report(m.algebra, m.name, facts=recognized_facts(m.algebra))))


def test_spec_report_examples(tmp_path, capsys):
    _, out, _ = run(["analyze", str(emit(tmp_path, "sol")), "--format", "json"], capsys)
    assert json.loads(out)["dehn"]["exact"] == "exponential"
    _, out, _ = run(["analyze", str(emit(tmp_path, "abels", "--d", "4")), "--format", "json"],
                    capsys)
    rep = json.loads(out)
    t = rep["tameness"]
    assert (t["tame"], t["strongly_2tame"], t["two_tame"]) == (False, False, True)
    assert rep["homology"]["h2_zero"] == 0 and rep["dehn"]["upper"] == "cubic"
    assert any("quadratic" in n for n in rep["notes"])


def test_text_and_json_agree(tmp_path, capsys):
    for m in fixtures():
        path = tmp_path / f"{m.name}.json"
        path.write_text(serialize_document(from_algebra(m.algebra, m.name)))
        _, js, _ = run(["analyze", str(path), "--format", "json"], capsys)
        _, text, _ = run(["analyze", str(path)], capsys)
        rep = json.loads(js)
        d = rep["dehn"]
        assert f"compactly presented: {'yes' if d['cp'] else 'no'}" in text
        assert f"lower bound: {d['lower']}" in text
        assert f"upper bound: {d['upper']}" in text
        assert f"exact: {d['exact'] or '-'}" in text
        assert "rules: " + " ".join(r["rule"] for r in d["rules_fired"]) in text
        assert "\x1b[" not in text


def test_generator_reordering_keeps_verdicts(tmp_path, capsys):
    for m in fixtures():
        doc = from_algebra(m.algebra, m.name)
        flipped = replace(doc, generators=tuple(reversed(doc.generators)))
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        a.write_text(serialize_document(doc))
        b.write_text(serialize_document(flipped))
        ra = json.loads(run(["analyze", str(a), "--format", "json"], capsys)[1])
        rb = json.loads(run(["analyze", str(b), "--format", "json"], capsys)[1])
        for key in ("standard", "principal_weights", "cone_dimension", "hyperbolic", "p0"):
            assert ra[key] == rb[key]
        assert ra["tameness"]["tame"] == rb["tameness"]["tame"]
        assert ra["homology"]["h2_zero"] == rb["homology"]["h2_zero"]
        for key in ("cp", "lower", "upper", "exact"):
            assert ra["dehn"][key] == rb["dehn"][key]
        assert rb["basis"] == list(reversed(ra["basis"]))


def test_derivation_mode_document(tmp_path, capsys):
    u, act = abels_ungraded(4)
    raw = json.loads(serialize_document(from_algebra(abels(4).algebra, "abels4_derivations")))
    raw["mode"] = "derivations"
    for g in raw["generators"]:
        del g["weight"]
    raw["acting_rank"] = len(act.matrices)
    raw["derivations"] = [[[str(x) for x in m.row(i)] for i in range(u.dim)]
                          for m in act.matrices]
    path = tmp_path / "der.json"
    path.write_text(json.dumps(raw))
    doc = parse_document(path.read_text())
    assert parse_document(serialize_document(doc)) == doc
    _, out, _ = run(["analyze", str(path), "--format", "json"], capsys)
    rep = json.loads(out)
    assert rep["dehn"]["upper"] == "cubic"
    assert sorted(rep["principal_weights"]) == sorted(
        json.loads(json.dumps(build_report(abels(4).algebra, "x")))["principal_weights"])


def test_no_homology_and_flags(tmp_path, capsys):
    path = emit(tmp_path, "heintze", "--weights", "1,1")
    _, out, _ = run(["analyze", str(path), "--format", "json", "--no-homology"], capsys)
    rep = json.loads(out)
    assert rep["homology"] is None and rep["dehn"] is None
    assert rep["p0"]["exact"] == "2"
    _, text, _ = run(["analyze", str(path), "--citations"], capsys)
    assert "R8" in text and "hyperbolic" in text.lower()
    out_path = tmp_path / "rep.txt"
    assert main(["analyze", str(path), "--out", str(out_path)]) == 0
    assert "linear" in out_path.read_text()
    assert run(["analyze", str(path), "--jobs", "0"], capsys)[0] == 2


def test_selftest_passes_and_is_deterministic():
    a, b = io.StringIO(), io.StringIO()
    assert selftest(stream=a) == 0
    selftest(stream=b)
    assert a.getvalue() == b.getvalue()
    assert "FAIL" not in a.getvalue()


def test_selftest_reports_corrupted_metadata():
    m = sol()
    bad = replace(m, known={**m.known, "h2_zero": Known(7, "corrupted")})
    buf = io.StringIO()
    assert selftest([bad], stream=buf) == 1
    assert "FAIL sol h2_zero: expected 7, got 1" in buf.getvalue()


def test_module_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "dehnscope", "selftest"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "checks passed" in res.stdout
