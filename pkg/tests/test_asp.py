"""Fact-base exporter: exact fact forms, renaming rules, determinism."""

import datetime
import random

import pytest

from pgshapes.asp import export_asp
from pgshapes.errors import NameCollision
from pgshapes.fixtures import (
    employee_colleague_shape,
    office_graph,
    role_pair_shapes,
    works_since_shape,
)
from pgshapes.graph import EDGE, NODE, build_graph
from pgshapes.shapes import (
    AtMostKey,
    Cmp,
    HasLabel,
    Nothing,
    Shape,
    TargetExact,
    Top,
    link_shapes,
)
from pgshapes.values import GEQ, StrValue

from randgen import gen_instance


def fact_lines(text: str) -> list[str]:
    return [
        line
        for line in text.splitlines()
        if line and not line.startswith("%")
    ]


def test_office_s1_facts():
    text = export_asp(
        office_graph(), link_shapes([employee_colleague_shape()])
    )
    assert fact_lines(text) == [
        "edge(100, 200, 101).",
        "edge(100, 201, 102).",
        "edge(102, 202, 100).",
        "edge(102, 203, 101).",
        "label(100, employee).",
        "label(100, person).",
        "label(101, company).",
        "label(102, employee).",
        "label(200, worksFor).",
        "label(201, colleagueOf).",
        "label(202, colleagueOf).",
        "label(203, worksFor).",
        "property(100, age, integer(30)).",
        'property(100, name, string("Tim Canterbury")).',
        'property(101, name, string("Wernham Hogg")).',
        'property(102, name, string("Gareth Keenan")).',
        'property(102, role, string("sales")).',
        'property(102, role, string("team leader")).',
        "property(200, since, date(1970,1,1)).",
        "property(203, since, date(2020,8,2)).",
        "constraint(greaterEq(label(colleagueOf),label(person),1)).",
        "constraint(label(person)).",
        "path(label(colleagueOf)).",
        "nodeshape(s1, greaterEq(label(colleagueOf),label(person),1), label(employee)).",
    ]


def test_comments_use_percent():
    text = export_asp(office_graph(), link_shapes([]))
    comment_lines = [l for l in text.splitlines() if l.startswith("%")]
    assert comment_lines
    assert not any("//" in l for l in text.splitlines())


def test_empty_inputs_empty_document():
    assert export_asp(build_graph([]), link_shapes([])) == ""


def test_role_pair_shape_facts():
    text = export_asp(build_graph([]), role_pair_shapes())
    lines = fact_lines(text)
    assert "constraint(and(greaterEqKey(role,string,2),s1))." in lines
    assert "constraint(greaterEqKey(role,string,2))." in lines
    assert "constraint(s1)." in lines
    assert (
        'nodeshape(s2, and(greaterEqKey(role,string,2),s1), keyValue(string("Gareth Keenan"),name)).'
        in lines
    )
    assert "nodeshape(s1, greaterEq(label(colleagueOf),label(person),1), none)." in lines


def test_edge_shape_facts():
    text = export_asp(build_graph([]), link_shapes([works_since_shape()]))
    lines = fact_lines(text)
    assert (
        "edgeshape(s3, and(src(label(person)),greaterEqKey(since,geq(date(2020,1,1)),1)), label(worksFor))."
        in lines
    )
    assert "constraint(src(label(person)))." in lines
    assert "constraint(label(person))." in lines


def test_first_letter_lowercasing_only():
    g = build_graph(
        ["1"],
        labelings={"1": ["WorksFor"]},
    )
    text = export_asp(g, link_shapes([]))
    assert "label(1, worksFor)." in fact_lines(text)


def test_lowercase_merge_rejected():
    g = build_graph(["1", "2"], labelings={"1": ["Employee"], "2": ["employee"]})
    with pytest.raises(NameCollision):
        export_asp(g, link_shapes([]))


def test_shape_named_top_rejected():
    s = Shape("Top", NODE, Top(), Nothing())
    with pytest.raises(NameCollision):
        export_asp(build_graph([]), link_shapes([s]))


def test_odd_ids_quoted():
    g = build_graph(["A 1", "n2"], ["E;9"], endpoints={"E;9": ("A 1", "n2")})
    lines = fact_lines(export_asp(g, link_shapes([])))
    assert lines == ['edge("A 1", "E;9", n2).']


def test_sugar_accepted():
    s = Shape(
        "s", NODE, AtMostKey(0, "age", Cmp(GEQ, StrValue("x"))), Nothing()
    )
    lines = fact_lines(export_asp(build_graph([]), link_shapes([s])))
    assert 'constraint(neg(greaterEqKey(age,geq(string("x")),1))).' in lines
    assert 'constraint(greaterEqKey(age,geq(string("x")),1)).' in lines
    assert 'nodeshape(s, neg(greaterEqKey(age,geq(string("x")),1)), none).' in lines


def test_string_values_escaped():
    g = build_graph(["1"], properties={("1", "k"): ['say "hi"\\']})
    lines = fact_lines(export_asp(g, link_shapes([])))
    assert lines == ['property(1, k, string("say \\"hi\\"\\\\")).']


def top_args(term: str) -> list[str]:
    """Split f(a,b(c,d),e) into [a, b(c,d), e] by tracking parens."""
    inner = term[term.index("(") + 1 : -1]
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(inner[start:i])
            start = i + 1
    parts.append(inner[start:])
    return parts


def test_deterministic_and_closed():
    rng = random.Random(7103)
    path_heads = ("inverse(", "seq(", "alt(", "star(", "plus(", "opt(")
    for _ in range(40):
        g, shapes = gen_instance(rng, sugar=True, compound_targets=True)
        text = export_asp(g, shapes)
        assert text == export_asp(g, shapes)
        lines = fact_lines(text)
        constraints = {
            l[len("constraint(") : -len(").")]
            for l in lines
            if l.startswith("constraint(")
        }
        paths = {
            l[len("path(") : -len(").")] for l in lines if l.startswith("path(")
        }
        for l in lines:
            if not l.startswith(("nodeshape(", "edgeshape(")):
                continue
            body = l[l.index("(") + 1 : -len(").")]
            assert body.split(", ")[1] in constraints
        for term in paths:
            if term.startswith(path_heads):
                for sub in top_args(term):
                    assert sub in paths


def test_date_terms_unpadded():
    g = build_graph(["1"], properties={("1", "d"): [datetime.date(2020, 8, 2)]})
    lines = fact_lines(export_asp(g, link_shapes([])))
    assert lines == ["property(1, d, date(2020,8,2))."]


def test_target_exact_rendering():
    s = Shape("s", NODE, Top(), TargetExact("100"))
    g = build_graph(["100"])
    lines = fact_lines(export_asp(g, link_shapes([s])))
    assert "nodeshape(s, top, exact(100))." in lines
