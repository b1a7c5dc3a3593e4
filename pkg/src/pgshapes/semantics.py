"""Three-valued constraint evaluation and strictly faithful assignments.

Truth values are the three-point chain false < unknown < true.  Negation
flips the chain, conjunction is the minimum; both are exact enum operations,
no floating point anywhere.  A shape reference never recurses into the
referenced constraint: it reads the current assignment, which is what makes
evaluation total in the presence of recursive (even negated) references.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import DomainMismatch, UnknownElement
from .graph import EDGE, INCOMING, NODE, OUTGOING, PropertyGraph
from .shapes import (
    Alt,
    And,
    AnyValue,
    Cmp,
    Constraint,
    Dst,
    EdgeLabel,
    Exact,
    HasLabel,
    Inverse,
    KeyCmp,
    Not,
    Nothing,
    Opt,
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
    TargetExact,
    TargetKey,
    TargetKeyValue,
    TargetLabel,
    Top,
    TypeIs,
    ValuePredicate,
)
from .values import Value, compare_sets, compare_values


class TruthValue(enum.IntEnum):
    """The three-point chain; the int encoding makes min() the conjunction."""

    FALSE = 0
    UNKNOWN = 1
    TRUE = 2

    def negate(self) -> "TruthValue":
        return TruthValue(2 - self.value)

    @property
    def word(self) -> str:
        return ("no", "maybe", "yes")[self.value]

    @property
    def numeric_text(self) -> str:
        return ("0", "0.5", "1")[self.value]


FALSE, UNKNOWN, TRUE = TruthValue.FALSE, TruthValue.UNKNOWN, TruthValue.TRUE


def _tv(b: bool) -> TruthValue:
    return TRUE if b else FALSE


@dataclass(frozen=True)
class Atom:
    """A (shape, element) pair an assignment gives a truth value to."""

    shape: str
    element: str
    kind: str  # NODE or EDGE

    def sort_key(self) -> tuple[str, str]:
        return (self.shape, self.element)

    def __str__(self) -> str:
        return f"{self.shape}({self.element})"


class Assignment(Mapping):
    """An immutable total map from atoms to truth values."""

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[Atom, TruthValue]):
        checked = {}
        for atom, v in values.items():
            if not isinstance(atom, Atom):
                raise TypeError(f"not an atom: {atom!r}")
            checked[atom] = TruthValue(v)
        self._values = checked

    def __getitem__(self, atom: Atom) -> TruthValue:
        return self._values[atom]

    def __iter__(self) -> Iterator[Atom]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{a}={self._values[a].word}"
            for a in sorted(self._values, key=Atom.sort_key)
        )
        return f"Assignment({inner})"


def atoms(g: PropertyGraph, shapes: ShapeSet) -> frozenset[Atom]:
    """All (shape, element) pairs of matching kind."""
    out = set()
    for s in shapes:
        elements = g.nodes if s.kind == NODE else g.edges
        for x in elements:
            out.add(Atom(s.name, x, s.kind))
    return frozenset(out)


def sorted_atoms(g: PropertyGraph, shapes: ShapeSet) -> tuple[Atom, ...]:
    return tuple(sorted(atoms(g, shapes), key=Atom.sort_key))


# ---------------------------------------------------------------------------
# Targets


def eval_target_nodes(g: PropertyGraph, q: Target) -> frozenset[str]:
    if isinstance(q, Nothing):
        return frozenset()
    if isinstance(q, TargetExact):
        # An id that is not in the graph yields no targets.
        return frozenset({q.element}) if g.has_node(q.element) else frozenset()
    if isinstance(q, TargetLabel):
        return frozenset(n for n in g.nodes if q.label in g.labels_of(n))
    if isinstance(q, TargetKey):
        return frozenset(n for n in g.nodes if g.property_values(n, q.key))
    if isinstance(q, TargetKeyValue):
        return frozenset(
            n for n in g.nodes if q.value in g.property_values(n, q.key)
        )
    raise TypeError(f"cannot evaluate target {type(q).__name__} (desugar first)")


def eval_target_edges(g: PropertyGraph, q: Target) -> frozenset[str]:
    if isinstance(q, Nothing):
        return frozenset()
    if isinstance(q, TargetExact):
        return frozenset({q.element}) if g.has_edge(q.element) else frozenset()
    if isinstance(q, TargetLabel):
        return frozenset(e for e in g.edges if q.label in g.labels_of(e))
    if isinstance(q, TargetKey):
        return frozenset(e for e in g.edges if g.property_values(e, q.key))
    if isinstance(q, TargetKeyValue):
        return frozenset(
            e for e in g.edges if q.value in g.property_values(e, q.key)
        )
    raise TypeError(f"cannot evaluate target {type(q).__name__} (desugar first)")


def target_elements(g: PropertyGraph, shape: Shape) -> frozenset[str]:
    if shape.kind == NODE:
        return eval_target_nodes(g, shape.target)
    return eval_target_edges(g, shape.target)


# ---------------------------------------------------------------------------
# Paths


def eval_path(
    g: PropertyGraph,
    n: str,
    p: PathExpr,
    _cache: dict | None = None,
) -> frozenset[str]:
    """Nodes reachable from n over p.  Independent of any assignment."""
    if not g.has_node(n):
        raise UnknownElement(f"no such node: {n!r}")
    return _path(g, n, p, _cache if _cache is not None else {})


def _path(g, n, p, cache) -> frozenset[str]:
    key = (n, p)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if isinstance(p, EdgeLabel):
        out = frozenset(
            dst
            for (e, dst) in g.adjacent_edges(n, OUTGOING)
            if p.name in g.labels_of(e)
        )
    elif isinstance(p, Inverse):
        out = frozenset(m for m in g.nodes if n in _path(g, m, p.inner, cache))
    elif isinstance(p, Seq):
        out = frozenset(
            n2
            for n1 in _path(g, n, p.first, cache)
            for n2 in _path(g, n1, p.second, cache)
        )
    elif isinstance(p, Alt):
        out = _path(g, n, p.first, cache) | _path(g, n, p.second, cache)
    elif isinstance(p, Star):
        out = frozenset({n}) | _closure(g, n, p.inner, cache)
    elif isinstance(p, Plus):
        out = _closure(g, n, p.inner, cache)
    elif isinstance(p, Opt):
        out = frozenset({n}) | _path(g, n, p.inner, cache)
    else:
        raise TypeError(f"not a path expression: {p!r}")
    cache[key] = out
    return out


def _closure(g, n, p, cache) -> frozenset[str]:
    # Nodes reachable by one or more p-steps: worklist reachability, so
    # cyclic graphs terminate.
    reached: set[str] = set()
    frontier = _path(g, n, p, cache)
    while frontier:
        reached |= frontier
        frontier = frozenset(
            m for x in frontier for m in _path(g, x, p, cache)
        ) - reached
    return frozenset(reached)


# ---------------------------------------------------------------------------
# Predicates


def matches_predicate(f: ValuePredicate, v: Value) -> bool:
    if isinstance(f, AnyValue):
        return True
    if isinstance(f, TypeIs):
        return v.type_name == f.type_name
    if isinstance(f, Cmp):
        return compare_values(f.op, v, f.constant)
    if isinstance(f, PredAnd):
        return matches_predicate(f.first, v) and matches_predicate(f.second, v)
    if isinstance(f, PredNot):
        return not matches_predicate(f.inner, v)
    raise TypeError(f"not a value predicate: {f!r}")


# ---------------------------------------------------------------------------
# Constraint evaluation


def eval_node_constraint(
    g: PropertyGraph,
    sigma: Mapping[Atom, TruthValue],
    n: str,
    c: Constraint,
    _cache: dict | None = None,
) -> TruthValue:
    if not g.has_node(n):
        raise UnknownElement(f"no such node: {n!r}")
    return _eval(g, sigma, n, c, NODE, _cache if _cache is not None else {})


def eval_edge_constraint(
    g: PropertyGraph,
    sigma: Mapping[Atom, TruthValue],
    e: str,
    c: Constraint,
    _cache: dict | None = None,
) -> TruthValue:
    if not g.has_edge(e):
        raise UnknownElement(f"no such edge: {e!r}")
    return _eval(g, sigma, e, c, EDGE, _cache if _cache is not None else {})


def _lookup(sigma, atom: Atom) -> TruthValue:
    try:
        return sigma[atom]
    except KeyError:
        raise DomainMismatch(f"assignment has no value for {atom}") from None


def _counted(count: int, values: list[TruthValue], pool: int) -> TruthValue:
    """The at-least-count verdict over a pool of three-valued results.

    True when `count` members already hold; false when even the undecided
    ones could not bring the tally up to `count`; unknown in between.
    """
    satisfied = sum(1 for v in values if v is TRUE)
    refuted = sum(1 for v in values if v is FALSE)
    if satisfied >= count:
        return TRUE
    if pool - refuted < count:
        return FALSE
    return UNKNOWN


def _eval(g, sigma, x, c, kind, cache) -> TruthValue:
    if isinstance(c, Top):
        return TRUE
    if isinstance(c, ShapeRef):
        return _lookup(sigma, Atom(c.name, x, kind))
    if isinstance(c, Exact):
        return _tv(c.element == x)
    if isinstance(c, HasLabel):
        return _tv(c.label in g.labels_of(x))
    if isinstance(c, Not):
        return _eval(g, sigma, x, c.inner, kind, cache).negate()
    if isinstance(c, And):
        return min(
            _eval(g, sigma, x, c.first, kind, cache),
            _eval(g, sigma, x, c.second, kind, cache),
        )
    if isinstance(c, QualPath):
        reached = sorted(_path(g, x, c.path, cache))
        vals = [_eval(g, sigma, m, c.inner, NODE, cache) for m in reached]
        return _counted(c.count, vals, len(reached))
    if isinstance(c, QualIncoming):
        pool = g.adjacent_edges(x, INCOMING)
        vals = [_eval(g, sigma, e, c.inner, EDGE, cache) for (e, _) in pool]
        return _counted(c.count, vals, len(pool))
    if isinstance(c, QualOutgoing):
        pool = g.adjacent_edges(x, OUTGOING)
        vals = [_eval(g, sigma, e, c.inner, EDGE, cache) for (e, _) in pool]
        return _counted(c.count, vals, len(pool))
    if isinstance(c, QualKey):
        hits = sum(
            1 for v in g.property_values(x, c.key) if matches_predicate(c.predicate, v)
        )
        return _tv(hits >= c.count)
    if isinstance(c, PathCmp):
        return _tv(
            compare_sets(
                c.op, _path(g, x, c.first, cache), _path(g, x, c.second, cache)
            )
        )
    if isinstance(c, PathKeyCmp):
        left = frozenset(
            v
            for m in _path(g, x, c.first_path, cache)
            for v in g.property_values(m, c.first_key)
        )
        right = frozenset(
            v
            for m in _path(g, x, c.second_path, cache)
            for v in g.property_values(m, c.second_key)
        )
        return _tv(compare_sets(c.op, left, right))
    if isinstance(c, KeyCmp):
        return _tv(
            compare_sets(
                c.op,
                g.property_values(x, c.first_key),
                g.property_values(x, c.second_key),
            )
        )
    if isinstance(c, Src):
        src, _ = g.endpoints(x)
        return _eval(g, sigma, src, c.inner, NODE, cache)
    if isinstance(c, Dst):
        _, dst = g.endpoints(x)
        return _eval(g, sigma, dst, c.inner, NODE, cache)
    raise TypeError(f"cannot evaluate {type(c).__name__} (desugar first)")


# ---------------------------------------------------------------------------
# Strict faithfulness


@dataclass(frozen=True)
class FaithfulnessVerdict:
    """Outcome of the four-condition check, naming the first failure."""

    ok: bool
    failed_condition: int | None = None  # 1..4
    atom: Atom | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


class FaithfulnessChecker:
    """Precomputed context for checking many assignments on one instance."""

    def __init__(self, g: PropertyGraph, shapes: ShapeSet):
        self.graph = g
        self.shapes = shapes
        self.atoms = sorted_atoms(g, shapes)
        self.atom_set = frozenset(self.atoms)
        self._path_cache: dict = {}
        self.node_targets: list[Atom] = []
        self.edge_targets: list[Atom] = []
        for s in shapes:
            for x in sorted(target_elements(g, s)):
                atom = Atom(s.name, x, s.kind)
                (self.node_targets if s.kind == NODE else self.edge_targets).append(
                    atom
                )
        self.node_targets.sort(key=Atom.sort_key)
        self.edge_targets.sort(key=Atom.sort_key)
        self.target_atoms = frozenset(self.node_targets) | frozenset(
            self.edge_targets
        )

    def evaluate(self, sigma: Mapping[Atom, TruthValue], atom: Atom) -> TruthValue:
        shape = self.shapes.get(atom.shape)
        return _eval(
            self.graph, sigma, atom.element, shape.constraint, shape.kind,
            self._path_cache,
        )

    def check_domain(self, sigma: Mapping[Atom, TruthValue]):
        given = frozenset(sigma)
        if given != self.atom_set:
            missing = sorted(self.atom_set - given, key=Atom.sort_key)
            extra = sorted(given - self.atom_set, key=Atom.sort_key)
            parts = []
            if missing:
                parts.append(f"missing {', '.join(map(str, missing[:3]))}")
            if extra:
                parts.append(f"extra {', '.join(map(str, extra[:3]))}")
            raise DomainMismatch("assignment domain is not the atom set: "
                                 + "; ".join(parts))

    def verdict(self, sigma: Mapping[Atom, TruthValue]) -> FaithfulnessVerdict:
        # Conditions in order: node equations, edge equations, node targets,
        # edge targets; within each, atoms in canonical order.
        for cond, kind_wanted in ((1, NODE), (2, EDGE)):
            for atom in self.atoms:
                if atom.kind != kind_wanted:
                    continue
                actual = sigma[atom]
                expected = self.evaluate(sigma, atom)
                if actual is not expected:
                    return FaithfulnessVerdict(
                        False,
                        cond,
                        atom,
                        f"{atom} is {actual.word} but evaluates {expected.word}",
                    )
        for cond, targets in ((3, self.node_targets), (4, self.edge_targets)):
            for atom in targets:
                if sigma[atom] is not TRUE:
                    return FaithfulnessVerdict(
                        False,
                        cond,
                        atom,
                        f"target {atom} is {sigma[atom].word}, not yes",
                    )
        return FaithfulnessVerdict(True)

    def holds(self, sigma: Mapping[Atom, TruthValue]) -> bool:
        """Fast verdict-free variant for inner search loops."""
        for atom in self.atoms:
            if sigma[atom] is not self.evaluate(sigma, atom):
                return False
        for atom in self.target_atoms:
            if sigma[atom] is not TRUE:
                return False
        return True


def is_strictly_faithful(
    g: PropertyGraph,
    shapes: ShapeSet,
    sigma: Mapping[Atom, TruthValue],
) -> FaithfulnessVerdict:
    """Check the four faithfulness conditions.

    The assignment must be total over exactly the instance's atoms.
    """
    checker = FaithfulnessChecker(g, shapes)
    checker.check_domain(sigma)
    return checker.verdict(sigma)


def least_fixed_point(g: PropertyGraph, shapes: ShapeSet) -> Assignment:
    """The minimal-information solution of the evaluation equations.

    Iterated evaluation from all-unknown.  Every connective is monotone in
    the knowledge order (unknown below both false and true), so the sweep
    converges in at most one pass per atom.  The result satisfies the two
    equation conditions; targets may still sit at unknown or false.
    """
    checker = FaithfulnessChecker(g, shapes)
    current: dict[Atom, TruthValue] = {a: UNKNOWN for a in checker.atoms}
    for _ in range(len(checker.atoms) + 1):
        updated = {a: checker.evaluate(current, a) for a in checker.atoms}
        if updated == current:
            break
        current = updated
    return Assignment(current)
