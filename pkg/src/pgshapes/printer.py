"""Canonical single-line rendering of shapes back into .progs text.

parse(render(parse(t))) is structurally the identity: parentheses are
emitted exactly where the grammar's precedence would otherwise regroup.
Forms without concrete syntax (bottom, exists, forall) render as their
core rewriting.
"""

from __future__ import annotations

import re

from .graph import NODE
from .parser import KEYWORDS
from .shapes import (
    Alt,
    And,
    AnyValue,
    AtMostIncoming,
    AtMostKey,
    AtMostOutgoing,
    AtMostPath,
    Bottom,
    Cmp,
    Constraint,
    Dst,
    EdgeLabel,
    Exact,
    ExactlyIncoming,
    ExactlyKey,
    ExactlyOutgoing,
    ExactlyPath,
    ExistsIncoming,
    ExistsKey,
    ExistsOutgoing,
    ExistsPath,
    ForallIncoming,
    ForallKey,
    ForallOutgoing,
    ForallPath,
    HasLabel,
    Inverse,
    KeyCmp,
    Not,
    Nothing,
    Opt,
    Or,
    PathCmp,
    PathExpr,
    PathKeyCmp,
    Plus,
    PredAnd,
    PredNot,
    QualIncoming,
    QualKey,
    QualOutgoing,
    QualPath,
    Seq,
    Shape,
    ShapeRef,
    ShapeSet,
    Src,
    Star,
    Target,
    TargetAnd,
    TargetExact,
    TargetKey,
    TargetKeyValue,
    TargetLabel,
    TargetOr,
    Top,
    TypeIs,
    ValuePredicate,
)
from .sugar import desugar_constraint
from .values import EQ, GEQ, GT, LEQ, LT, NEQ, value_text

_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_ID_RE = re.compile(r"^(-?\d+|[A-Za-z_][A-Za-z0-9_]*)$")

_PRED_SYMBOL = {EQ: "=", NEQ: "!=", LT: "<", LEQ: "<=", GT: ">", GEQ: ">="}

# Constraint precedence, loosest first.
_OR, _AND, _UNARY, _PRIMARY = range(4)
# Path precedence.
_ALT, _SEQ, _PREFIX, _POSTFIX, _ATOM = range(5)


def _name(text: str, what: str) -> str:
    if not _IDENT_RE.match(text) or text in KEYWORDS:
        raise ValueError(f"{what} {text!r} has no concrete spelling")
    return text


def _element_id(text: str) -> str:
    if not _ID_RE.match(text) or text in KEYWORDS:
        raise ValueError(f"element id {text!r} has no concrete spelling")
    return text


def render_path(p: PathExpr) -> str:
    return _path(p, _ALT)


def _path(p: PathExpr, level: int) -> str:
    if isinstance(p, EdgeLabel):
        return f":{_name(p.name, 'edge label')}"
    if isinstance(p, Alt):
        text = f"{_path(p.first, _ALT)} || {_path(p.second, _SEQ)}"
        own = _ALT
    elif isinstance(p, Seq):
        text = f"{_path(p.first, _SEQ)} / {_path(p.second, _PREFIX)}"
        own = _SEQ
    elif isinstance(p, Inverse):
        text = f"^{_path(p.inner, _PREFIX)}"
        own = _PREFIX
    elif isinstance(p, Opt):
        text = f"?{_path(p.inner, _PREFIX)}"
        own = _PREFIX
    elif isinstance(p, Star):
        text = f"{_path(p.inner, _POSTFIX)}*"
        own = _POSTFIX
    elif isinstance(p, Plus):
        text = f"{_path(p.inner, _POSTFIX)}+"
        own = _POSTFIX
    else:
        raise TypeError(f"not a path: {p!r}")
    return f"({text})" if own < level else text


def render_predicate(f: ValuePredicate) -> str:
    return _pred(f, atom=False)


def _pred(f: ValuePredicate, atom: bool) -> str:
    if isinstance(f, AnyValue):
        return "any"
    if isinstance(f, TypeIs):
        return f.type_name
    if isinstance(f, Cmp):
        return f"{_PRED_SYMBOL[f.op]} {value_text(f.constant)}"
    if isinstance(f, PredNot):
        # A comparison after ! must be wrapped: "!=" would lex as one token.
        if isinstance(f.inner, Cmp):
            return f"!({_pred(f.inner, atom=False)})"
        return f"!{_pred(f.inner, atom=True)}"
    if isinstance(f, PredAnd):
        text = f"{_pred(f.first, atom=False)} & {_pred(f.second, atom=True)}"
        return f"({text})" if atom else text
    raise TypeError(f"not a value predicate: {f!r}")


def render_target(q: Target) -> str:
    if isinstance(q, Nothing):
        return ""
    if isinstance(q, TargetLabel):
        return f":{_name(q.label, 'label')}"
    if isinstance(q, TargetExact):
        return f"id {_element_id(q.element)}"
    if isinstance(q, TargetKey):
        return f"key {_name(q.key, 'key')}"
    if isinstance(q, TargetKeyValue):
        return f"key {_name(q.key, 'key')} = {value_text(q.value)}"
    if isinstance(q, (TargetAnd, TargetOr)):
        op = "&" if isinstance(q, TargetAnd) else "|"
        first, second = render_target(q.first), render_target(q.second)
        if not first or not second:
            raise ValueError("empty target has no spelling inside a combinator")
        return f"{first} {op} {second}"
    raise TypeError(f"not a target: {q!r}")


def render_constraint(c: Constraint) -> str:
    return _constraint(c, _OR)


def _counting(symbol, count, c):
    if isinstance(c, (QualIncoming, AtMostIncoming, ExactlyIncoming)):
        return f"{symbol} {count} <-[ {_constraint(c.inner, _OR)} ]"
    if isinstance(c, (QualOutgoing, AtMostOutgoing, ExactlyOutgoing)):
        return f"{symbol} {count} ->[ {_constraint(c.inner, _OR)} ]"
    if isinstance(c, (QualKey, AtMostKey, ExactlyKey)):
        return (
            f"{symbol} {count} key {_name(c.key, 'key')}"
            f" . {_pred(c.predicate, atom=True)}"
        )
    return (
        f"{symbol} {count} {_path(c.path, _ALT)}"
        f" . {_constraint(c.inner, _UNARY)}"
    )


def _constraint(c: Constraint, level: int) -> str:
    # Sugar without a concrete form renders as its core rewriting.
    if isinstance(
        c,
        (Bottom, ExistsPath, ExistsIncoming, ExistsOutgoing, ExistsKey,
         ForallPath, ForallIncoming, ForallOutgoing, ForallKey),
    ):
        return _constraint(desugar_constraint(c), level)
    if isinstance(c, Top):
        return "true"
    if isinstance(c, ShapeRef):
        return _name(c.name, "shape name")
    if isinstance(c, Exact):
        return f"id {_element_id(c.element)}"
    if isinstance(c, HasLabel):
        return f":{_name(c.label, 'label')}"
    if isinstance(c, (PathCmp, PathKeyCmp, KeyCmp)):
        if isinstance(c, KeyCmp):
            first = f"key {_name(c.first_key, 'key')}"
            second = f"key {_name(c.second_key, 'key')}"
        elif isinstance(c, PathCmp):
            first, second = _path(c.first, _ALT), _path(c.second, _ALT)
        else:
            first = f"{_path(c.first_path, _ALT)} key {_name(c.first_key, 'key')}"
            second = (
                f"{_path(c.second_path, _ALT)} key {_name(c.second_key, 'key')}"
            )
        return f"cmp({c.op}, {first}, {second})"

    if isinstance(c, Not):
        inner = _constraint(c.inner, _UNARY)
        if inner.startswith("="):
            # An exact-count form after ! must be wrapped: "!=" would lex
            # as one token.
            inner = f"({inner})"
        text, own = f"!{inner}", _UNARY
    elif isinstance(c, Src):
        text, own = f"src {_constraint(c.inner, _UNARY)}", _UNARY
    elif isinstance(c, Dst):
        text, own = f"dst {_constraint(c.inner, _UNARY)}", _UNARY
    elif isinstance(c, (QualPath, QualIncoming, QualOutgoing, QualKey)):
        text, own = _counting(">=", c.count, c), _UNARY
    elif isinstance(c, (AtMostPath, AtMostIncoming, AtMostOutgoing, AtMostKey)):
        text, own = _counting("<=", c.count, c), _UNARY
    elif isinstance(c, (ExactlyPath, ExactlyIncoming, ExactlyOutgoing, ExactlyKey)):
        text, own = _counting("=", c.count, c), _UNARY
    elif isinstance(c, And):
        text = f"{_constraint(c.first, _AND)} & {_constraint(c.second, _UNARY)}"
        own = _AND
    elif isinstance(c, Or):
        text = f"{_constraint(c.first, _OR)} | {_constraint(c.second, _AND)}"
        own = _OR
    else:
        raise TypeError(f"not a constraint: {c!r}")
    return f"({text})" if own < level else text


def render_shape(shape: Shape) -> str:
    head = "NODE" if shape.kind == NODE else "EDGE"
    target = render_target(shape.target)
    target_text = f"[{target}]" if target else "[]"
    return (
        f"{head} {_name(shape.name, 'shape name')} {target_text}"
        f" {{ {render_constraint(shape.constraint)} }};"
    )


def render_shapes(shapes: ShapeSet | tuple[Shape, ...] | list[Shape]) -> str:
    lines = [render_shape(s) for s in shapes]
    return "".join(line + "\n" for line in lines)
