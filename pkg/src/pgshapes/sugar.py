"""Rewrites from sugared forms to the core language.

Constraint sugar reduces to negation, conjunction, and at-least counting;
target combinators reduce to plain targets plus constraint surgery or
utility shapes.  Desugaring is idempotent: core input comes back unchanged
(up to reconstruction).
"""

from __future__ import annotations

from .errors import UnsupportedTarget
from .shapes import (
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
    Exact,
    Nothing,
    Not,
    Or,
    PredNot,
    QualIncoming,
    QualKey,
    QualOutgoing,
    QualPath,
    Shape,
    ShapeRef,
    ShapeSet,
    Src,
    Target,
    TargetAnd,
    TargetExact,
    TargetKey,
    TargetKeyValue,
    TargetLabel,
    TargetOr,
    Top,
    link_shapes,
)
from .values import EQ


def desugar_constraint(c: Constraint) -> Constraint:
    """Rewrite every sugared form into core connectives."""
    if isinstance(c, Bottom):
        return Not(Top())
    if isinstance(c, Or):
        return Not(
            And(Not(desugar_constraint(c.first)), Not(desugar_constraint(c.second)))
        )
    if isinstance(c, AtMostPath):
        return Not(QualPath(c.count + 1, c.path, desugar_constraint(c.inner)))
    if isinstance(c, AtMostIncoming):
        return Not(QualIncoming(c.count + 1, desugar_constraint(c.inner)))
    if isinstance(c, AtMostOutgoing):
        return Not(QualOutgoing(c.count + 1, desugar_constraint(c.inner)))
    if isinstance(c, AtMostKey):
        return Not(QualKey(c.count + 1, c.key, c.predicate))
    if isinstance(c, ExactlyPath):
        inner = desugar_constraint(c.inner)
        return And(
            QualPath(c.count, c.path, inner),
            Not(QualPath(c.count + 1, c.path, inner)),
        )
    if isinstance(c, ExactlyIncoming):
        inner = desugar_constraint(c.inner)
        return And(
            QualIncoming(c.count, inner), Not(QualIncoming(c.count + 1, inner))
        )
    if isinstance(c, ExactlyOutgoing):
        inner = desugar_constraint(c.inner)
        return And(
            QualOutgoing(c.count, inner), Not(QualOutgoing(c.count + 1, inner))
        )
    if isinstance(c, ExactlyKey):
        return And(
            QualKey(c.count, c.key, c.predicate),
            Not(QualKey(c.count + 1, c.key, c.predicate)),
        )
    if isinstance(c, ExistsPath):
        return QualPath(1, c.path, desugar_constraint(c.inner))
    if isinstance(c, ExistsIncoming):
        return QualIncoming(1, desugar_constraint(c.inner))
    if isinstance(c, ExistsOutgoing):
        return QualOutgoing(1, desugar_constraint(c.inner))
    if isinstance(c, ExistsKey):
        return QualKey(1, c.key, c.predicate)
    # Universal restriction: no witness against the body.
    if isinstance(c, ForallPath):
        return Not(QualPath(1, c.path, Not(desugar_constraint(c.inner))))
    if isinstance(c, ForallIncoming):
        return Not(QualIncoming(1, Not(desugar_constraint(c.inner))))
    if isinstance(c, ForallOutgoing):
        return Not(QualOutgoing(1, Not(desugar_constraint(c.inner))))
    if isinstance(c, ForallKey):
        return Not(QualKey(1, c.key, PredNot(c.predicate)))

    if isinstance(c, Not):
        return Not(desugar_constraint(c.inner))
    if isinstance(c, And):
        return And(desugar_constraint(c.first), desugar_constraint(c.second))
    if isinstance(c, QualPath):
        return QualPath(c.count, c.path, desugar_constraint(c.inner))
    if isinstance(c, QualIncoming):
        return QualIncoming(c.count, desugar_constraint(c.inner))
    if isinstance(c, QualOutgoing):
        return QualOutgoing(c.count, desugar_constraint(c.inner))
    if isinstance(c, Src):
        return Src(desugar_constraint(c.inner))
    if isinstance(c, Dst):
        return Dst(desugar_constraint(c.inner))
    return c


def target_constraint(q: Target) -> Constraint:
    """The constraint satisfied by exactly the elements a plain target matches."""
    if isinstance(q, Nothing):
        return Bottom()
    if isinstance(q, TargetExact):
        return Exact(q.element)
    if isinstance(q, TargetLabel):
        return HasLabel(q.label)
    if isinstance(q, TargetKey):
        return QualKey(1, q.key, AnyValue())
    if isinstance(q, TargetKeyValue):
        return QualKey(1, q.key, Cmp(EQ, q.value))
    raise UnsupportedTarget(f"no constraint form for target {type(q).__name__}")


def _plain(q: Target, owner: str) -> Target:
    if isinstance(q, (TargetAnd, TargetOr)):
        raise UnsupportedTarget(
            f"shape {owner!r}: target combinators nest only one level"
        )
    return q


def desugar_targets(shape: Shape) -> tuple[Shape, ...]:
    """Rewrite a compound target into plain-target shapes.

    Conjunction folds the second query into the constraint: the shape keeps
    target q1 and requires the original constraint only where q2 also
    matches.  Note the rewritten constraint is what shapes referencing this
    one observe from then on, so the rewrite assumes the shape is not
    referenced elsewhere.  Disjunction introduces one utility shape per arm
    (target qi, constraint a reference to the original shape) and retargets
    the original to nothing, which keeps references intact.

    The output may contain constraint sugar; run desugar_constraint next.
    """
    q = shape.target
    if isinstance(q, TargetAnd):
        q1 = _plain(q.first, shape.name)
        q2 = _plain(q.second, shape.name)
        chi = target_constraint(q2)
        rewritten = Or(And(shape.constraint, chi), Not(chi))
        return (Shape(shape.name, shape.kind, rewritten, q1),)
    if isinstance(q, TargetOr):
        arms = [_plain(q.first, shape.name), _plain(q.second, shape.name)]
        out = [Shape(shape.name, shape.kind, shape.constraint, Nothing())]
        for i, arm in enumerate(arms):
            if isinstance(arm, Nothing):
                continue
            out.append(
                Shape(
                    f"{shape.name}__t{i}",
                    shape.kind,
                    ShapeRef(shape.name),
                    arm,
                )
            )
        return tuple(out)
    return (shape,)


def desugar_shapes(shapes) -> ShapeSet:
    """Targets then constraints rewritten to core forms, relinked."""
    flat: list[Shape] = []
    for sh in shapes:
        flat.extend(desugar_targets(sh))
    return link_shapes(
        [
            Shape(
                sh.name,
                sh.kind,
                desugar_constraint(sh.constraint),
                sh.target,
                span=sh.span,
            )
            for sh in flat
        ]
    )
