from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from involutive_hf.cli import main, run_command
from involutive_hf.documents import DocumentError, document_from_model, dump_document, parse_complex_file
from involutive_hf.invariants import correction_terms
from involutive_hf.involution import default_involution
from involutive_hf.knotcomplex import build_mirror_staircase, build_staircase, build_thin_canonical, build_unknot
from involutive_hf.knots import KnotSpecError, figure_eight, load_knot, torus_knot
from involutive_hf.reports import emit_report, terms_machine

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

BUILTINS = [
    build_unknot(),
    figure_eight(),
    torus_knot(2, 5),
    torus_knot(3, 4, mirror=True),
    build_staircase([1, 3, 4]),
    build_mirror_staircase([2]),
    build_thin_canonical(2, 3),
    build_thin_canonical(-3, 2, [1, 1]),
]


@pytest.mark.parametrize("c", BUILTINS, ids=lambda c: c.name)
def test_document_round_trip(c):
    doc = document_from_model(c, default_involution(c))
    text = dump_document(doc)
    again = parse_complex_file(text)
    assert again.same_data(doc)
    assert dump_document(again) == text


def test_figure_eight_document_matches_builtin():
    doc = parse_complex_file((SAMPLES / "figure-eight.json").read_bytes())
    c = figure_eight()
    assert len(doc.complex.generators) == 5
    assert sum(len(ts) for ts in doc.complex.differential.values()) == 4
    assert doc.same_data(document_from_model(c, default_involution(c)))


def test_missing_maslov_is_inferred():
    doc = parse_complex_file((SAMPLES / "left-trefoil-no-maslov.json").read_text())
    assert doc.inferred_maslov
    assert doc.complex.generators == torus_knot(2, 3, mirror=True).generators
    # thin input with tau metadata uses i + j - tau
    raw = json.loads(dump_document(document_from_model(figure_eight())))
    for g in raw["generators"]:
        g.pop("maslov")
    doc = parse_complex_file(json.dumps(raw))
    assert doc.complex.generators == figure_eight().generators


def test_document_errors():
    with pytest.raises(DocumentError) as info:
        parse_complex_file('{"name": "x",\n "generators": [')
    assert info.value.line == 2
    with pytest.raises(DocumentError, match="schema"):
        parse_complex_file('{"name": "x", "generators": [], "differential": {}}')
    with pytest.raises(DocumentError, match="schema"):
        parse_complex_file(
            '{"name": "x", "generators": [{"name": "a", "i": 0, "j": 0}], "differential": {"a": [["a", -1]]}}'
        )
    with pytest.raises(DocumentError, match="every generator"):
        parse_complex_file(
            '{"name": "x", "generators": [{"name": "a", "i": 0, "j": 0, "maslov": 0}, {"name": "b", "i": 0, "j": 0}],'
            ' "differential": {}}'
        )
    with pytest.raises(DocumentError, match="invalid complex"):
        parse_complex_file(
            '{"name": "x", "generators": [{"name": "a", "i": 0, "j": 0, "maslov": 0},'
            ' {"name": "b", "i": 1, "j": 0, "maslov": -1}], "differential": {"a": [["b", 0]]}}'
        )


def test_knot_specs():
    assert load_knot("torus:2,3").complex.tau == 1
    assert load_knot("mirror-torus:2,3").complex.tau == -1
    assert load_knot("thin:-2,1").complex.provenance == "thin"
    assert load_knot("torus:2,1").complex.provenance == "unknot"
    for bad in ("torus:2", "torus:a,b", "knot", "figure8:1", "file:"):
        with pytest.raises(KnotSpecError):
            load_knot(bad)


def test_machine_form_of_terms():
    c = figure_eight()
    assert terms_machine(correction_terms(c, default_involution(c))) == {"V_lower": 1, "V0": 0, "V_upper": 0}


def test_compute_figure_eight_surgery():
    res = run_command(["compute", "--knot", "figure8", "--surgery", "7", "--format", "json"])
    assert res.code == 0
    data = json.loads(emit_report(res.report, "json"))
    assert data["invariants"] == {"V0": 0, "V_lower": 1, "V_upper": 0}
    assert data["surgery"]["d_lower"] == "-1/2"
    assert data["surgery"]["d"] == "3/2" and data["surgery"]["d_upper"] == "3/2"


def test_compute_is_deterministic():
    a = run_command(["compute", "--knot", "thin:3,3", "--surgery", "3"])
    b = run_command(["compute", "--knot", "thin:3,3", "--surgery", "3"])
    assert emit_report(a.report, "text") == emit_report(b.report, "text")
    assert emit_report(a.report, "json") == emit_report(b.report, "json")


@pytest.mark.parametrize(
    "argv, code, needle",
    [
        (["compute", "--knot", "torus:2,3", "--surgery", "0"], 1, "SurgeryTooSmall"),
        (["compute", "--knot", "torus:2,4"], 1, "link"),
        (["compute", "--knot", "nonsense"], 2, "--knot"),
        (["compute", "--knot", "figure8", "--depth", "1"], 1, "depth"),
        (["compute"], 2, "--knot"),
        (["compute", "--knot", "figure8", "--format", "xml"], 2, "--format"),
        (["tables", "--sigma-range", "4:-4"], 2, "--sigma-range"),
        (["check", "--input", "/nonexistent/file.json"], 2, "--input"),
        (["verify", "everything"], 2, "suite"),
        ([], 2, "command"),
    ],
)
def test_exit_codes(argv, code, needle):
    res = run_command(argv)
    assert res.code == code
    assert needle in res.error


def test_check_command(tmp_path):
    assert run_command(["check", "--input", str(SAMPLES / "figure-eight.json")]).code == 0
    bad = json.loads((SAMPLES / "figure-eight.json").read_text())
    bad["involution"]["b"] = [["b", 0]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    res = run_command(["check", "--input", str(path)])
    assert res.code == 1
    data = json.loads(emit_report(res.report, "json"))
    assert not data["involution"]["ok"]
    garbled = tmp_path / "garbled.json"
    garbled.write_text('{"name": ')
    res = run_command(["check", "--input", str(garbled)])
    assert res.code == 1 and "line 1" in res.error


def test_compute_from_file_agrees_with_builtin():
    res = run_command(["compute", "--knot", f"file:{SAMPLES / 'figure-eight.json'}", "--format", "json"])
    assert res.code == 0
    assert json.loads(emit_report(res.report, "json"))["invariants"] == {"V0": 0, "V_lower": 1, "V_upper": 0}


def test_tables_command():
    res = run_command(["tables", "--sigma-range", "-8:8"])
    assert res.code == 0
    text = emit_report(res.report, "text").decode()
    assert "sigma <= 0" in text and "sigma > 0" in text
    assert "(1, 0, 0)" in text
    data = json.loads(emit_report(res.report, "json"))
    assert data["all_ok"] and len(data["rows"]) == 18


def test_verify_suites():
    assert run_command(["verify", "paper-examples"]).code == 0
    assert run_command(["verify", "thm-1.7"]).code == 0
    res = run_command(["verify", "properties", "--seed", "7", "--cases", "20"])
    assert res.code == 0


def test_main_writes_report(capsys):
    assert main(["compute", "--knot", "unknot", "--format", "json"]) == 0
    out = capsys.readouterr().out
    assert json.loads(out)["invariants"] == {"V0": 0, "V_lower": 0, "V_upper": 0}
    assert main(["compute", "--knot", "torus:2,3", "--surgery", "0"]) == 1
    assert "SurgeryTooSmall" in capsys.readouterr().err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "involutive_hf", "compute", "--knot", "mirror-torus:2,3", "--surgery", "1"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "V_upper" in proc.stdout
