"""Instance rewrites that keep the conformance verdict.

Three constructions: path elimination (composite path expressions become
fresh edge labels over materialized reachability edges), operator folding
(every constraint shrinks to at most one operator by moving subformulas
into fresh untargeted shapes), and single-target reduction (one fresh root
shape targeting one fresh node stands in for every original target).

Two rules keep the rewrites honest.  Fresh names never collide with any
name already in use, per namespace.  And whenever a transform adds edges to
the graph, those edges carry a fresh marker label and every incoming or
outgoing edge-counting body in the pre-existing shapes is guarded with the
marker's negation; without the guard the added edges would inflate edge
counts and flip verdicts on shapes that bound them from above.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotNormalized, PathsPresent
from .graph import EDGE, INCOMING, NODE, OUTGOING, PropertyGraph, build_graph
from .printer import render_path
from .semantics import (
    Assignment,
    Atom,
    FaithfulnessChecker,
    FaithfulnessVerdict,
    _counted,
    _eval,
    eval_path,
    target_elements,
)
from .shapes import (
    And,
    Dst,
    EdgeLabel,
    Exact,
    HasLabel,
    KeyCmp,
    Not,
    Nothing,
    PathCmp,
    PathExpr,
    PathKeyCmp,
    QualIncoming,
    QualKey,
    QualOutgoing,
    QualPath,
    Shape,
    ShapeRef,
    ShapeSet,
    Src,
    TargetExact,
    TargetKey,
    TargetKeyValue,
    TargetLabel,
    Top,
    constraint_paths,
    is_sugar_free,
    link_shapes,
)
from .sugar import desugar_shapes

ATOMIC_CONSTRAINTS = (Top, HasLabel, Exact, ShapeRef)
PLAIN_TARGETS = (Nothing, TargetExact, TargetLabel, TargetKey, TargetKeyValue)


@dataclass(frozen=True)
class TransformTrace:
    """What a transform introduced, for diagnostics and report mapping."""

    fresh_nodes: tuple[str, ...] = ()
    fresh_edges: tuple[str, ...] = ()
    fresh_labels: tuple[str, ...] = ()
    fresh_shapes: tuple[str, ...] = ()
    # Rendered composite path -> the label now standing in for it.
    path_labels: tuple[tuple[str, str], ...] = ()
    # Fresh shape -> the shape whose subformula it carries.
    shape_sources: tuple[tuple[str, str], ...] = ()
    # (shape, target element, fresh edge, fresh label) per original target.
    target_edges: tuple[tuple[str, str, str, str], ...] = ()
    marker: str | None = None


class _Fresh:
    """Counter-suffixed names skipping everything already taken."""

    def __init__(self, taken):
        self.taken = set(taken)
        self.counters: dict[str, int] = {}

    def name(self, prefix: str) -> str:
        i = self.counters.get(prefix, 0)
        while f"{prefix}{i}" in self.taken:
            i += 1
        out = f"{prefix}{i}"
        self.counters[prefix] = i + 1
        self.taken.add(out)
        return out


def _mentioned_labels(shapes: ShapeSet) -> set[str]:
    out: set[str] = set()
    for sh in shapes:
        if isinstance(sh.target, TargetLabel):
            out.add(sh.target.label)
        stack = [sh.constraint]
        while stack:
            c = stack.pop()
            if isinstance(c, HasLabel):
                out.add(c.label)
            for p in _own_paths(c):
                out.update(
                    q.name for q in _iter_paths(p) if isinstance(q, EdgeLabel)
                )
            stack.extend(_operands(c))
    return out


def _graph_labels(g: PropertyGraph) -> set[str]:
    out: set[str] = set()
    for x in (*g.nodes, *g.edges):
        out.update(g.labels_of(x))
    return out


def _iter_paths(p: PathExpr):
    yield p
    for child in getattr(p, "__dict__", {}).values():
        if isinstance(child, PathExpr):
            yield from _iter_paths(child)


def _operands(c) -> tuple:
    """Constraint children of a core constraint."""
    if isinstance(c, (Not, Src, Dst, QualPath, QualIncoming, QualOutgoing)):
        return (c.inner,)
    if isinstance(c, And):
        return (c.first, c.second)
    return ()


def _own_paths(c) -> tuple[PathExpr, ...]:
    """Paths held directly by this constraint node."""
    if isinstance(c, QualPath):
        return (c.path,)
    if isinstance(c, PathCmp):
        return (c.first, c.second)
    if isinstance(c, PathKeyCmp):
        return (c.first_path, c.second_path)
    return ()


def _graph_parts(g: PropertyGraph):
    endpoints = {e: g.endpoints(e) for e in g.edges}
    labelings = {}
    properties = {}
    for x in (*g.nodes, *g.edges):
        labels = g.labels_of(x)
        if labels:
            labelings[x] = sorted(labels)
        for key in g.property_keys(x):
            properties[(x, key)] = sorted(
                g.property_values(x, key), key=repr
            )
    return endpoints, labelings, properties


def _extend_graph(g, new_nodes=(), new_edges=()):
    """new_edges: (edge id, src, dst, labels) rows added to a copy of g."""
    endpoints, labelings, properties = _graph_parts(g)
    for eid, src, dst, labels in new_edges:
        endpoints[eid] = (src, dst)
        labelings[eid] = list(labels)
    return build_graph(
        [*g.nodes, *new_nodes],
        [*g.edges, *(row[0] for row in new_edges)],
        endpoints=endpoints,
        labelings=labelings,
        properties=properties,
    )


def _rewrite(c, path_map, marker):
    """Swap composite paths for their labels; guard edge-counting bodies."""

    def swap(p: PathExpr) -> PathExpr:
        if isinstance(p, EdgeLabel) or p not in path_map:
            return p
        return EdgeLabel(path_map[p])

    def walk(c):
        if isinstance(c, Not):
            return Not(walk(c.inner))
        if isinstance(c, And):
            return And(walk(c.first), walk(c.second))
        if isinstance(c, Src):
            return Src(walk(c.inner))
        if isinstance(c, Dst):
            return Dst(walk(c.inner))
        if isinstance(c, QualPath):
            return QualPath(c.count, swap(c.path), walk(c.inner))
        if isinstance(c, QualIncoming):
            return QualIncoming(c.count, _guard(walk(c.inner), marker))
        if isinstance(c, QualOutgoing):
            return QualOutgoing(c.count, _guard(walk(c.inner), marker))
        if isinstance(c, PathCmp):
            return PathCmp(c.op, swap(c.first), swap(c.second))
        if isinstance(c, PathKeyCmp):
            return PathKeyCmp(
                c.op, swap(c.first_path), c.first_key,
                swap(c.second_path), c.second_key,
            )
        return c

    return walk(c)


def _guard(body, marker):
    if marker is None:
        return body
    return And(body, Not(HasLabel(marker)))


# ---------------------------------------------------------------------------
# Path elimination


def eliminate_paths(
    g: PropertyGraph, shapes: ShapeSet
) -> tuple[PropertyGraph, ShapeSet, TransformTrace]:
    """Replace every composite path by a fresh label over materialized edges.

    For each composite path p, every pair (n, m) with m reachable from n
    over p gets a fresh edge labeled with p's fresh label plus the marker.
    Plain label paths are left alone; if no composite path occurs, the
    instance comes back unchanged.
    """
    core = desugar_shapes(shapes)
    composite: list[PathExpr] = []
    for sh in core:
        for p in constraint_paths(sh.constraint):
            if not isinstance(p, EdgeLabel) and p not in composite:
                composite.append(p)
    if not composite:
        return g, core, TransformTrace()

    labels = _Fresh(_graph_labels(g) | _mentioned_labels(core))
    ids = _Fresh({*g.nodes, *g.edges})
    path_map = {p: labels.name("__p") for p in composite}
    marker = labels.name("__m")

    new_edges = []
    cache: dict = {}
    for p in composite:
        label = path_map[p]
        for n in g.nodes:
            for m in sorted(eval_path(g, n, p, cache)):
                new_edges.append((ids.name("__pe"), n, m, (label, marker)))

    rebuilt = [
        Shape(sh.name, sh.kind, _rewrite(sh.constraint, path_map, marker),
              sh.target, span=sh.span)
        for sh in core
    ]
    trace = TransformTrace(
        fresh_edges=tuple(row[0] for row in new_edges),
        fresh_labels=(*path_map.values(), marker),
        path_labels=tuple(
            (render_path(p), label) for p, label in path_map.items()
        ),
        marker=marker,
    )
    return _extend_graph(g, new_edges=new_edges), link_shapes(rebuilt), trace


# ---------------------------------------------------------------------------
# Operator folding


def _is_normal(c) -> bool:
    if isinstance(c, ATOMIC_CONSTRAINTS):
        return True
    return all(isinstance(k, ATOMIC_CONSTRAINTS) for k in _operands(c))


def fold_operators(shapes: ShapeSet) -> tuple[ShapeSet, TransformTrace]:
    """Flatten every constraint to at most one operator.

    Subformulas move into fresh shapes (target nothing) referenced where
    they stood; a shape already in normal form is kept as is.  Output size
    is bounded by the input size plus twice the total operator count.
    """
    core = desugar_shapes(shapes)
    for sh in core:
        for p in constraint_paths(sh.constraint):
            if not isinstance(p, EdgeLabel):
                raise PathsPresent(
                    f"shape {sh.name!r} still holds path {render_path(p)};"
                    " eliminate paths first"
                )
    names = _Fresh(core.names)
    fresh: list[Shape] = []
    sources: list[tuple[str, str]] = []

    def extract(c, kind: str, origin: str) -> ShapeRef:
        name = names.name("__f")
        sources.append((name, origin))
        body = c if _is_normal(c) else flatten(c, kind, origin)
        fresh.append(Shape(name, kind, body, Nothing()))
        return ShapeRef(name)

    def flatten(c, kind: str, origin: str):
        # One level of the constraint stays; operands leave, even atomic
        # ones, so the result depends only on the top operator.
        if isinstance(c, Not):
            return Not(extract(c.inner, kind, origin))
        if isinstance(c, And):
            return And(
                extract(c.first, kind, origin),
                extract(c.second, kind, origin),
            )
        if isinstance(c, QualPath):
            return QualPath(c.count, c.path, extract(c.inner, NODE, origin))
        if isinstance(c, QualIncoming):
            return QualIncoming(c.count, extract(c.inner, EDGE, origin))
        if isinstance(c, QualOutgoing):
            return QualOutgoing(c.count, extract(c.inner, EDGE, origin))
        if isinstance(c, Src):
            return Src(extract(c.inner, NODE, origin))
        if isinstance(c, Dst):
            return Dst(extract(c.inner, NODE, origin))
        raise AssertionError(f"operand-free form {type(c).__name__}")

    rebuilt = []
    for sh in core:
        c = sh.constraint
        if not _is_normal(c):
            c = flatten(c, sh.kind, sh.name)
        rebuilt.append(Shape(sh.name, sh.kind, c, sh.target, span=sh.span))
    trace = TransformTrace(
        fresh_shapes=tuple(name for name, _ in sources),
        shape_sources=tuple(sources),
    )
    return link_shapes(rebuilt + fresh), trace


# ---------------------------------------------------------------------------
# Single-target reduction


def reduce_to_single_target(
    g: PropertyGraph, shapes: ShapeSet
) -> tuple[PropertyGraph, ShapeSet, Atom, TransformTrace]:
    """Concentrate all targets into one fresh root shape on one fresh node.

    Every original target atom becomes a uniquely labeled fresh edge from
    the new node and one conjunct in the root constraint: node targets are
    reached directly, edge targets through their source node plus an
    outgoing restriction pinned to the edge.  Original targets all become
    nothing; conformance is unchanged and hinges on the returned root atom.
    """
    core = desugar_shapes(shapes)
    labels = _Fresh(_graph_labels(g) | _mentioned_labels(core))
    ids = _Fresh({*g.nodes, *g.edges})
    snames = _Fresh(core.names)

    n0 = ids.name("__n")
    target_atoms = sorted(
        (
            Atom(sh.name, x, sh.kind)
            for sh in core
            for x in target_elements(g, sh)
        ),
        key=Atom.sort_key,
    )
    new_edges = []
    conjuncts = []
    rows = []
    marker = labels.name("__m") if target_atoms else None
    for atom in target_atoms:
        label = labels.name("__t")
        eid = ids.name("__e")
        if atom.kind == NODE:
            reach = atom.element
            conjuncts.append(
                QualPath(1, EdgeLabel(label), ShapeRef(atom.shape))
            )
        else:
            reach = g.endpoints(atom.element)[0]
            conjuncts.append(
                QualPath(
                    1,
                    EdgeLabel(label),
                    QualOutgoing(
                        1, And(Exact(atom.element), ShapeRef(atom.shape))
                    ),
                )
            )
        new_edges.append((eid, n0, reach, (label, marker)))
        rows.append((atom.shape, atom.element, eid, label))

    root_constraint = Top()
    for c in conjuncts:
        root_constraint = c if isinstance(root_constraint, Top) else And(
            root_constraint, c
        )
    root_name = snames.name("__s")
    rebuilt = [
        Shape(sh.name, sh.kind,
              _rewrite(sh.constraint, {}, marker), Nothing(), span=sh.span)
        for sh in core
    ]
    rebuilt.append(Shape(root_name, NODE, root_constraint, TargetExact(n0)))
    g2 = _extend_graph(g, new_nodes=(n0,), new_edges=new_edges)
    trace = TransformTrace(
        fresh_nodes=(n0,),
        fresh_edges=tuple(row[0] for row in new_edges),
        fresh_labels=tuple(row[3] for row in rows) + ((marker,) if marker else ()),
        fresh_shapes=(root_name,),
        target_edges=tuple(rows),
        marker=marker,
    )
    return g2, link_shapes(rebuilt), Atom(root_name, n0, NODE), trace


def normalize_instance(g: PropertyGraph, shapes: ShapeSet):
    """Pipeline: eliminate paths, fold operators, reduce to one target."""
    g1, s1, t1 = eliminate_paths(g, shapes)
    s2, t2 = fold_operators(s1)
    g3, s3, root, t3 = reduce_to_single_target(g1, s2)
    return g3, s3, root, (t1, t2, t3)


# ---------------------------------------------------------------------------
# Flat verification of normalized instances


def _check_normalized(shapes: ShapeSet):
    for sh in shapes:
        for p in constraint_paths(sh.constraint):
            if not isinstance(p, EdgeLabel):
                raise PathsPresent(
                    f"shape {sh.name!r} holds composite path {render_path(p)}"
                )
        if not is_sugar_free(sh.constraint):
            raise NotNormalized(f"shape {sh.name!r} contains sugared forms")
        if not _is_normal(sh.constraint):
            raise NotNormalized(
                f"shape {sh.name!r} nests operators; fold first"
            )
        if not isinstance(sh.target, PLAIN_TARGETS):
            raise NotNormalized(f"shape {sh.name!r} has a compound target")


def is_normalized(shapes: ShapeSet) -> bool:
    try:
        _check_normalized(shapes)
    except (NotNormalized, PathsPresent):
        return False
    return True


def _flat_atomic(g, sigma, x, c, kind, cache):
    if not isinstance(c, ATOMIC_CONSTRAINTS):
        raise NotNormalized(f"operand {type(c).__name__} is not atomic")
    return _eval(g, sigma, x, c, kind, cache)


def _flat_eval(g, sigma, x, c, kind, cache):
    """Single-case evaluation: never recurses through an operator chain."""
    if isinstance(c, (*ATOMIC_CONSTRAINTS, QualKey, KeyCmp, PathCmp, PathKeyCmp)):
        return _eval(g, sigma, x, c, kind, cache)
    if isinstance(c, Not):
        return _flat_atomic(g, sigma, x, c.inner, kind, cache).negate()
    if isinstance(c, And):
        return min(
            _flat_atomic(g, sigma, x, c.first, kind, cache),
            _flat_atomic(g, sigma, x, c.second, kind, cache),
        )
    if isinstance(c, QualPath):
        reached = sorted(eval_path(g, x, c.path, cache))
        vals = [_flat_atomic(g, sigma, m, c.inner, NODE, cache) for m in reached]
        return _counted(c.count, vals, len(reached))
    if isinstance(c, QualIncoming):
        pool = g.adjacent_edges(x, INCOMING)
        vals = [_flat_atomic(g, sigma, e, c.inner, EDGE, cache) for e, _ in pool]
        return _counted(c.count, vals, len(pool))
    if isinstance(c, QualOutgoing):
        pool = g.adjacent_edges(x, OUTGOING)
        vals = [_flat_atomic(g, sigma, e, c.inner, EDGE, cache) for e, _ in pool]
        return _counted(c.count, vals, len(pool))
    if isinstance(c, Src):
        return _flat_atomic(g, sigma, g.endpoints(x)[0], c.inner, NODE, cache)
    if isinstance(c, Dst):
        return _flat_atomic(g, sigma, g.endpoints(x)[1], c.inner, NODE, cache)
    raise NotNormalized(f"cannot flat-evaluate {type(c).__name__}")


class _FlatChecker(FaithfulnessChecker):
    def evaluate(self, sigma, atom):
        shape = self.shapes.get(atom.shape)
        return _flat_eval(
            self.graph, sigma, atom.element, shape.constraint, shape.kind,
            self._path_cache,
        )


def verify_normalized(
    g: PropertyGraph, shapes: ShapeSet, sigma: Assignment
) -> FaithfulnessVerdict:
    """Strict-faithfulness verdict using only per-case checks.

    Requires a normalized shape set (label-only paths, one operator per
    constraint); agrees with is_strictly_faithful wherever both apply.
    """
    _check_normalized(shapes)
    checker = _FlatChecker(g, shapes)
    checker.check_domain(sigma)
    return checker.verdict(sigma)
