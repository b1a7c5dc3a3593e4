"""Shape abstract syntax: path expressions, value predicates, targets,
constraints, shapes, and linked shape sets.

Node and edge constraints share one class hierarchy; which forms are legal
where is a linking check (see link_shapes), keyed off the owning shape's
kind.  Source spans ride along on every node but never participate in
equality, so structural comparison survives reformatting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import KindMismatch, UnknownShapeName
from .graph import EDGE, NODE
from .values import CMP_OPS, SET_COMPARATORS, VALUE_TYPES, Value


@dataclass(frozen=True)
class Span:
    """Half-open byte offsets plus the 1-based line/column of the start."""

    start: int
    end: int
    line: int
    column: int


def _span_field():
    return field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------------------
# Path expressions


@dataclass(frozen=True)
class PathExpr:
    span: Span | None = _span_field()


@dataclass(frozen=True)
class EdgeLabel(PathExpr):
    name: str


@dataclass(frozen=True)
class Inverse(PathExpr):
    inner: PathExpr


@dataclass(frozen=True)
class Seq(PathExpr):
    first: PathExpr
    second: PathExpr


@dataclass(frozen=True)
class Alt(PathExpr):
    first: PathExpr
    second: PathExpr


@dataclass(frozen=True)
class Star(PathExpr):
    inner: PathExpr


@dataclass(frozen=True)
class Plus(PathExpr):
    inner: PathExpr


@dataclass(frozen=True)
class Opt(PathExpr):
    inner: PathExpr


def iter_paths(p: PathExpr) -> Iterator[PathExpr]:
    """Pre-order walk over a path expression."""
    yield p
    if isinstance(p, (Inverse, Star, Plus, Opt)):
        yield from iter_paths(p.inner)
    elif isinstance(p, (Seq, Alt)):
        yield from iter_paths(p.first)
        yield from iter_paths(p.second)


# ---------------------------------------------------------------------------
# Value predicates


@dataclass(frozen=True)
class ValuePredicate:
    span: Span | None = _span_field()


@dataclass(frozen=True)
class AnyValue(ValuePredicate):
    pass


@dataclass(frozen=True)
class TypeIs(ValuePredicate):
    type_name: str

    def __post_init__(self):
        if self.type_name not in VALUE_TYPES:
            raise ValueError(f"bad value type: {self.type_name!r}")


@dataclass(frozen=True)
class Cmp(ValuePredicate):
    op: str
    constant: Value

    def __post_init__(self):
        if self.op not in CMP_OPS:
            raise ValueError(f"bad comparison operator: {self.op!r}")


@dataclass(frozen=True)
class PredAnd(ValuePredicate):
    first: ValuePredicate
    second: ValuePredicate


@dataclass(frozen=True)
class PredNot(ValuePredicate):
    inner: ValuePredicate


# ---------------------------------------------------------------------------
# Targets


@dataclass(frozen=True)
class Target:
    span: Span | None = _span_field()


@dataclass(frozen=True)
class Nothing(Target):
    """The empty target: the shape constrains only what references it."""


@dataclass(frozen=True)
class TargetExact(Target):
    element: str


@dataclass(frozen=True)
class TargetLabel(Target):
    label: str


@dataclass(frozen=True)
class TargetKey(Target):
    key: str


@dataclass(frozen=True)
class TargetKeyValue(Target):
    value: Value
    key: str


@dataclass(frozen=True)
class TargetAnd(Target):
    """Sugar: both sub-targets must match.  One level deep only."""

    first: Target
    second: Target


@dataclass(frozen=True)
class TargetOr(Target):
    """Sugar: either sub-target matches.  One level deep only."""

    first: Target
    second: Target


# ---------------------------------------------------------------------------
# Constraints


@dataclass(frozen=True)
class Constraint:
    span: Span | None = _span_field()


@dataclass(frozen=True)
class Top(Constraint):
    pass


@dataclass(frozen=True)
class ShapeRef(Constraint):
    name: str


@dataclass(frozen=True)
class Exact(Constraint):
    """True exactly at the element with this id."""

    element: str


@dataclass(frozen=True)
class HasLabel(Constraint):
    label: str


@dataclass(frozen=True)
class Not(Constraint):
    inner: Constraint


@dataclass(frozen=True)
class And(Constraint):
    first: Constraint
    second: Constraint


@dataclass(frozen=True)
class QualPath(Constraint):
    """At least `count` nodes reached over `path` satisfy `inner`."""

    count: int
    path: PathExpr
    inner: Constraint


@dataclass(frozen=True)
class QualIncoming(Constraint):
    """At least `count` incoming edges satisfy `inner` (edges counted)."""

    count: int
    inner: Constraint


@dataclass(frozen=True)
class QualOutgoing(Constraint):
    count: int
    inner: Constraint


@dataclass(frozen=True)
class QualKey(Constraint):
    """At least `count` values under `key` match the predicate (two-valued)."""

    count: int
    key: str
    predicate: ValuePredicate


@dataclass(frozen=True)
class PathCmp(Constraint):
    """Compare the node sets reached over two paths (two-valued)."""

    op: str
    first: PathExpr
    second: PathExpr

    def __post_init__(self):
        if self.op not in SET_COMPARATORS:
            raise ValueError(f"bad set comparator: {self.op!r}")


@dataclass(frozen=True)
class PathKeyCmp(Constraint):
    """Compare value sets gathered under a key over each path (two-valued)."""

    op: str
    first_path: PathExpr
    first_key: str
    second_path: PathExpr
    second_key: str

    def __post_init__(self):
        if self.op not in SET_COMPARATORS:
            raise ValueError(f"bad set comparator: {self.op!r}")


@dataclass(frozen=True)
class KeyCmp(Constraint):
    """Compare the element's own value sets under two keys (two-valued)."""

    op: str
    first_key: str
    second_key: str

    def __post_init__(self):
        if self.op not in SET_COMPARATORS:
            raise ValueError(f"bad set comparator: {self.op!r}")


@dataclass(frozen=True)
class Src(Constraint):
    """The edge's source node satisfies `inner`."""

    inner: Constraint


@dataclass(frozen=True)
class Dst(Constraint):
    """The edge's destination node satisfies `inner`."""

    inner: Constraint


# Sugared constraint forms.  These never reach evaluation; desugar first.


@dataclass(frozen=True)
class Bottom(Constraint):
    pass


@dataclass(frozen=True)
class Or(Constraint):
    first: Constraint
    second: Constraint


@dataclass(frozen=True)
class AtMostPath(Constraint):
    count: int
    path: PathExpr
    inner: Constraint


@dataclass(frozen=True)
class AtMostIncoming(Constraint):
    count: int
    inner: Constraint


@dataclass(frozen=True)
class AtMostOutgoing(Constraint):
    count: int
    inner: Constraint


@dataclass(frozen=True)
class AtMostKey(Constraint):
    count: int
    key: str
    predicate: ValuePredicate


@dataclass(frozen=True)
class ExactlyPath(Constraint):
    count: int
    path: PathExpr
    inner: Constraint


@dataclass(frozen=True)
class ExactlyIncoming(Constraint):
    count: int
    inner: Constraint


@dataclass(frozen=True)
class ExactlyOutgoing(Constraint):
    count: int
    inner: Constraint


@dataclass(frozen=True)
class ExactlyKey(Constraint):
    count: int
    key: str
    predicate: ValuePredicate


@dataclass(frozen=True)
class ExistsPath(Constraint):
    path: PathExpr
    inner: Constraint


@dataclass(frozen=True)
class ExistsIncoming(Constraint):
    inner: Constraint


@dataclass(frozen=True)
class ExistsOutgoing(Constraint):
    inner: Constraint


@dataclass(frozen=True)
class ExistsKey(Constraint):
    key: str
    predicate: ValuePredicate


@dataclass(frozen=True)
class ForallPath(Constraint):
    path: PathExpr
    inner: Constraint


@dataclass(frozen=True)
class ForallIncoming(Constraint):
    inner: Constraint


@dataclass(frozen=True)
class ForallOutgoing(Constraint):
    inner: Constraint


@dataclass(frozen=True)
class ForallKey(Constraint):
    key: str
    predicate: ValuePredicate


CORE_CONSTRAINTS = (
    Top,
    ShapeRef,
    Exact,
    HasLabel,
    Not,
    And,
    QualPath,
    QualIncoming,
    QualOutgoing,
    QualKey,
    PathCmp,
    PathKeyCmp,
    KeyCmp,
    Src,
    Dst,
)

# Operator forms for normalization purposes.  Everything else is a leaf.
OPERATOR_CONSTRAINTS = (Not, And, QualPath, QualIncoming, QualOutgoing, Src, Dst)


def iter_constraints(c: Constraint) -> Iterator[Constraint]:
    """Pre-order walk over a constraint tree (core forms and sugar)."""
    yield c
    for child in _children(c):
        yield from iter_constraints(child)


def _children(c: Constraint) -> tuple[Constraint, ...]:
    if isinstance(c, (Not, Src, Dst)):
        return (c.inner,)
    if isinstance(c, (And, Or)):
        return (c.first, c.second)
    if isinstance(
        c,
        (
            QualPath,
            QualIncoming,
            QualOutgoing,
            AtMostPath,
            AtMostIncoming,
            AtMostOutgoing,
            ExactlyPath,
            ExactlyIncoming,
            ExactlyOutgoing,
            ExistsPath,
            ExistsIncoming,
            ExistsOutgoing,
            ForallPath,
            ForallIncoming,
            ForallOutgoing,
        ),
    ):
        return (c.inner,)
    return ()


def constraint_paths(c: Constraint) -> Iterator[PathExpr]:
    """All path expressions syntactically inside a constraint."""
    for sub in iter_constraints(c):
        if isinstance(sub, (QualPath, AtMostPath, ExactlyPath, ExistsPath, ForallPath)):
            yield sub.path
        elif isinstance(sub, PathCmp):
            yield sub.first
            yield sub.second
        elif isinstance(sub, PathKeyCmp):
            yield sub.first_path
            yield sub.second_path


def constraint_references(c: Constraint) -> frozenset[str]:
    return frozenset(
        sub.name for sub in iter_constraints(c) if isinstance(sub, ShapeRef)
    )


def operator_count(c: Constraint) -> int:
    return sum(
        1 for sub in iter_constraints(c) if isinstance(sub, OPERATOR_CONSTRAINTS)
    )


def is_sugar_free(c: Constraint) -> bool:
    return all(isinstance(sub, CORE_CONSTRAINTS) for sub in iter_constraints(c))


# ---------------------------------------------------------------------------
# Shapes and shape sets


@dataclass(frozen=True)
class Shape:
    name: str
    kind: str  # NODE or EDGE
    constraint: Constraint
    target: Target
    span: Span | None = _span_field()

    def __post_init__(self):
        if self.kind not in (NODE, EDGE):
            raise ValueError(f"bad shape kind: {self.kind!r}")
        if not self.name:
            raise ValueError("empty shape name")


class ShapeSet:
    """An ordered collection of uniquely named shapes.

    link_shapes() returns a set with reference metadata attached; evaluation
    and solving require a linked set.
    """

    __slots__ = ("_shapes", "_by_name", "_linked", "_references", "_cycle_count")

    def __init__(self, shapes: Iterable[Shape]):
        self._shapes = tuple(shapes)
        by_name: dict[str, Shape] = {}
        for s in self._shapes:
            if s.name in by_name:
                raise UnknownShapeName(f"duplicate shape name: {s.name!r}")
            by_name[s.name] = s
        self._by_name = by_name
        self._linked = False
        self._references: dict[str, frozenset[str]] = {}
        self._cycle_count = 0

    @property
    def shapes(self) -> tuple[Shape, ...]:
        return self._shapes

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self._shapes)

    @property
    def linked(self) -> bool:
        return self._linked

    @property
    def references(self) -> dict[str, frozenset[str]]:
        """Shape name -> names its constraint references (linked sets only)."""
        return dict(self._references)

    @property
    def cycle_count(self) -> int:
        """Number of strongly connected reference components with a cycle."""
        return self._cycle_count

    def get(self, name: str) -> Shape:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownShapeName(f"no such shape: {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[Shape]:
        return iter(self._shapes)

    def __len__(self) -> int:
        return len(self._shapes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShapeSet):
            return NotImplemented
        return self._shapes == other._shapes

    def __repr__(self) -> str:
        return f"ShapeSet({', '.join(self.names)})"


def _check_kinds(shape: Shape, c: Constraint, ctx: str, by_name: dict[str, Shape]):
    node_only = (
        QualPath,
        QualIncoming,
        QualOutgoing,
        PathCmp,
        PathKeyCmp,
        AtMostPath,
        AtMostIncoming,
        AtMostOutgoing,
        ExactlyPath,
        ExactlyIncoming,
        ExactlyOutgoing,
        ExistsPath,
        ExistsIncoming,
        ExistsOutgoing,
        ForallPath,
        ForallIncoming,
        ForallOutgoing,
    )
    edge_only = (Src, Dst)
    if isinstance(c, node_only) and ctx != NODE:
        raise KindMismatch(
            f"shape {shape.name!r}: {type(c).__name__} in an edge constraint"
        )
    if isinstance(c, edge_only) and ctx != EDGE:
        raise KindMismatch(
            f"shape {shape.name!r}: {type(c).__name__} in a node constraint"
        )
    if isinstance(c, ShapeRef):
        ref = by_name.get(c.name)
        if ref is None:
            raise UnknownShapeName(
                f"shape {shape.name!r} references unknown shape {c.name!r}"
            )
        if ref.kind != ctx:
            raise KindMismatch(
                f"shape {shape.name!r} references {ref.kind} shape {c.name!r} "
                f"in a {ctx} position"
            )
    counted = (
        QualPath,
        QualIncoming,
        QualOutgoing,
        QualKey,
        AtMostPath,
        AtMostIncoming,
        AtMostOutgoing,
        AtMostKey,
        ExactlyPath,
        ExactlyIncoming,
        ExactlyOutgoing,
        ExactlyKey,
    )
    if isinstance(c, counted) and c.count < 0:
        raise ValueError(f"shape {shape.name!r}: negative count {c.count}")

    # Incoming/outgoing restrictions carry edge constraints; endpoint
    # restrictions carry node constraints; everything else keeps its context.
    if isinstance(
        c,
        (
            QualIncoming,
            QualOutgoing,
            AtMostIncoming,
            AtMostOutgoing,
            ExactlyIncoming,
            ExactlyOutgoing,
            ExistsIncoming,
            ExistsOutgoing,
            ForallIncoming,
            ForallOutgoing,
        ),
    ):
        child_ctx = EDGE
    elif isinstance(c, (Src, Dst)):
        child_ctx = NODE
    else:
        child_ctx = ctx
    for child in _children(c):
        _check_kinds(shape, child, child_ctx, by_name)


def link_shapes(shapes: Iterable[Shape] | ShapeSet) -> ShapeSet:
    """Resolve shape references, check kinds, and record the reference graph."""
    result = shapes if isinstance(shapes, ShapeSet) else ShapeSet(shapes)
    by_name = {s.name: s for s in result}
    references: dict[str, frozenset[str]] = {}
    for s in result:
        _check_kinds(s, s.constraint, s.kind, by_name)
        references[s.name] = constraint_references(s.constraint)
    linked = ShapeSet(result.shapes)
    linked._linked = True
    linked._references = references
    linked._cycle_count = _count_cyclic_components(references)
    return linked


def _count_cyclic_components(references: dict[str, frozenset[str]]) -> int:
    """Tarjan over the reference graph; count SCCs that contain a cycle."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    counter = [0]
    cycles = [0]

    def strongconnect(v: str):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in sorted(references.get(v, ())):
            if w not in references:
                continue
            if w not in index:
                strongconnect(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            component = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                component.append(w)
                if w == v:
                    break
            if len(component) > 1 or v in references.get(v, ()):
                cycles[0] += 1

    for v in sorted(references):
        if v not in index:
            strongconnect(v)
    return cycles[0]
