"""Command line behavior: output contract and exit codes."""

import json

import pytest

from pgshapes.asp import export_asp
from pgshapes.cli import main
from pgshapes.fixtures import office_graph, role_pair_shapes
from pgshapes.jsonio import export_graph_json
from pgshapes.parser import parse_shapes

S1_LINE = "NODE s1 [:Employee] { >= 1 :colleagueOf . :Person };"
S2_TEXT = (
    'NODE s2 [key name = "Gareth Keenan"] { >= 2 key role . string & s1 };\n'
    "NODE s1 [] { >= 1 :colleagueOf . :Person };\n"
)
PERSON_TEXT = "NODE PersonShape [:Employee] { :Person };\n"


@pytest.fixture
def office_json(tmp_path):
    path = tmp_path / "office.json"
    path.write_bytes(export_graph_json(office_graph()))
    return str(path)


@pytest.fixture
def s2_progs(tmp_path):
    path = tmp_path / "s2.progs"
    path.write_text(S2_TEXT)
    return str(path)


@pytest.fixture
def person_progs(tmp_path):
    path = tmp_path / "person-shape.progs"
    path.write_text(PERSON_TEXT)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_validate_conforming(capsys, office_json, s2_progs):
    code, out, _ = run(capsys, "validate", office_json, s2_progs)
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "SATISFIABLE"
    assert "s2(102) = yes" in lines
    assert len(lines) == 7  # verdict + six atoms


def test_validate_failing_names_node(capsys, office_json, person_progs):
    code, out, _ = run(capsys, "validate", office_json, person_progs)
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "UNSATISFIABLE"
    assert "violated target: PersonShape(102)" in lines


def test_validate_explain(capsys, office_json, person_progs):
    code, out, _ = run(capsys, "validate", "--explain", office_json, person_progs)
    assert code == 1
    assert "violated target: PersonShape(102) = no" in out.splitlines()


def test_validate_oracle_agrees(capsys, office_json, s2_progs, person_progs):
    for shapes, expected in ((s2_progs, 0), (person_progs, 1)):
        plain = run(capsys, "validate", office_json, shapes)
        oracle = run(capsys, "validate", "--oracle", office_json, shapes)
        assert plain[0] == oracle[0] == expected
        assert plain[1].splitlines()[0] == oracle[1].splitlines()[0]


def test_validate_all(capsys, office_json, s2_progs):
    code, out, _ = run(capsys, "validate", "--all", office_json, s2_progs)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "SATISFIABLE"
    assert lines[1] == "assignment 1:"
    single = run(capsys, "validate", office_json, s2_progs)[1].splitlines()
    assert lines[2:8] == single[1:]


def test_validate_json(capsys, office_json, s2_progs):
    code, out, _ = run(capsys, "validate", "--json", office_json, s2_progs)
    assert code == 0
    report = json.loads(out)
    assert report["conforms"] is True
    assert {
        "shape": "s2",
        "element": "102",
        "kind": "node",
        "value": "yes",
    } in report["witness"]
    assert report["violated_targets"] == []
    assert report["stats"]["atoms"] == 6


def test_validate_json_failure(capsys, office_json, person_progs):
    code, out, _ = run(capsys, "validate", "--json", office_json, person_progs)
    assert code == 1
    report = json.loads(out)
    assert report["conforms"] is False
    assert report["witness"] is None
    assert {
        "shape": "PersonShape",
        "element": "102",
        "kind": "node",
        "fixed_point": "no",
    } in report["violated_targets"]


def test_validate_normalize(capsys, office_json, s2_progs, person_progs):
    assert run(capsys, "validate", "--normalize", office_json, s2_progs)[0] == 0
    assert (
        run(capsys, "validate", "--normalize", office_json, person_progs)[0] == 1
    )


def test_validate_budget_exhausted(capsys, tmp_path, office_json):
    progs = tmp_path / "loop.progs"
    progs.write_text("NODE loop [] { loop };\n")
    code, _, err = run(
        capsys, "validate", "--all", "--budget", "1", office_json, str(progs)
    )
    assert code == 3
    assert "error:" in err


def test_validate_oracle_too_large(capsys, office_json, s2_progs):
    code, _, err = run(
        capsys, "validate", "--oracle", "--max-atoms", "1", office_json, s2_progs
    )
    assert code == 2
    assert "error:" in err


def test_validate_missing_file(capsys, office_json):
    code, _, err = run(capsys, "validate", office_json, "absent.progs")
    assert code == 2
    assert "error:" in err


def test_validate_bad_graph_document(capsys, tmp_path, s2_progs):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    code, _, err = run(capsys, "validate", str(bad), s2_progs)
    assert code == 2
    assert "error:" in err


def test_check_counts(capsys, tmp_path):
    progs = tmp_path / "shapes.progs"
    progs.write_text(S1_LINE + "\n")
    assert run(capsys, "check", str(progs)) == (0, "1 shape, 0 cycles\n", "")
    progs.write_text(S2_TEXT)
    assert run(capsys, "check", str(progs))[1] == "2 shapes, 0 cycles\n"
    progs.write_text("NODE loop [] { loop };\n")
    assert run(capsys, "check", str(progs))[1] == "1 shape, 1 cycle\n"
    progs.write_text("")
    assert run(capsys, "check", str(progs)) == (0, "0 shapes, 0 cycles\n", "")


def test_check_unknown_reference(capsys, tmp_path):
    progs = tmp_path / "shapes.progs"
    progs.write_text("NODE a [] { missing };\n")
    code, _, err = run(capsys, "check", str(progs))
    assert code == 2
    assert "missing" in err


def test_check_syntax_error(capsys, tmp_path):
    progs = tmp_path / "shapes.progs"
    progs.write_text("NODE a [ { true };\n")
    code, _, err = run(capsys, "check", str(progs))
    assert code == 2
    assert "error:" in err


def test_export_asp_writes_file(capsys, tmp_path, office_json):
    progs = tmp_path / "s1.progs"
    progs.write_text(S1_LINE + "\n")
    out = tmp_path / "office.asp"
    code, _, _ = run(capsys, "export-asp", office_json, str(progs), str(out))
    assert code == 0
    expected = export_asp(office_graph(), parse_shapes(S1_LINE))
    assert out.read_text() == expected


def test_export_asp_stdout(capsys, tmp_path, office_json):
    progs = tmp_path / "s1.progs"
    progs.write_text(S1_LINE + "\n")
    code, out, _ = run(capsys, "export-asp", office_json, str(progs), "-")
    assert code == 0
    assert "nodeshape(s1," in out


def test_export_asp_unwritable(capsys, tmp_path, office_json):
    progs = tmp_path / "s1.progs"
    progs.write_text(S1_LINE + "\n")
    out = tmp_path / "nosuch" / "office.asp"
    code, _, err = run(capsys, "export-asp", office_json, str(progs), str(out))
    assert code == 2
    assert "error:" in err


def test_convert_graph(capsys, tmp_path):
    messy = tmp_path / "g.json"
    messy.write_text(
        '{"relationships": [], "nodes": [{"id": 7, "labels": ["B", "A"]}]}'
    )
    code, out, _ = run(capsys, "convert", str(messy))
    assert code == 0
    doc = json.loads(out)
    assert doc["nodes"] == [{"id": "7", "labels": ["A", "B"], "properties": {}}]


def test_convert_shapes(capsys, tmp_path):
    messy = tmp_path / "s.progs"
    messy.write_text("NODE   s1\n[:Employee]{>= 1 :colleagueOf . :Person}  ;")
    out_path = tmp_path / "canon.progs"
    code, _, _ = run(capsys, "convert", str(messy), "-o", str(out_path))
    assert code == 0
    assert out_path.read_text() == (
        "NODE s1 [:Employee] { >= 1 :colleagueOf . :Person };\n"
    )


def test_convert_kind_override(capsys, tmp_path):
    path = tmp_path / "data.txt"
    path.write_text("NODE a [] { true };")
    code, out, _ = run(capsys, "convert", "--kind", "shapes", str(path))
    assert code == 0
    assert out == "NODE a [] { true };\n"


def test_convert_unknown_extension(capsys, tmp_path):
    path = tmp_path / "data.txt"
    path.write_text("{}")
    code, _, err = run(capsys, "convert", str(path))
    assert code == 2
    assert "--kind" in err


def test_convert_parse_error(capsys, tmp_path):
    path = tmp_path / "bad.progs"
    path.write_text("NODE ; ;")
    code, _, err = run(capsys, "convert", str(path))
    assert code == 2
    assert "error:" in err


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["validate"])
    assert info.value.code == 2


def test_help_exits_zero(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--help"])
    assert info.value.code == 0
