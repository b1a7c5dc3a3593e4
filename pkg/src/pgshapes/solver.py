"""Conformance: search for a strictly faithful assignment.

Three entry points share one canonical ordering contract: atoms in
(shape, element) order, candidate values tried yes, no, maybe.  Under the
default configuration find_faithful_assignment, the first assignment of
enumerate_faithful_assignments, and brute_force_conformance all produce the
same witness, so the backtracking engine can be cross-checked against plain
enumeration.

Soundness of the two shortcuts both engines use:
 - every target atom is pinned to yes (faithfulness demands it);
 - the least fixed point of the evaluation equations bounds every solution
   from below in the knowledge order, so an atom decided there carries that
   value in every solution, and an undecided target can only come true in
   some solution, never in the fixed point itself.
Pinned atoms take forced values, so the set of faithful assignments and
their lexicographic order are unchanged.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Mapping

from .errors import BudgetExceeded, TooLarge
from .graph import EDGE, NODE, PropertyGraph
from .semantics import (
    FALSE,
    TRUE,
    UNKNOWN,
    Assignment,
    Atom,
    FaithfulnessChecker,
    TruthValue,
    eval_path,
    least_fixed_point,
)
from .shapes import (
    And,
    Dst,
    Not,
    QualIncoming,
    QualOutgoing,
    QualPath,
    ShapeRef,
    ShapeSet,
    Src,
)

VALUE_ORDER = (TRUE, FALSE, UNKNOWN)


@dataclass
class SolverConfig:
    atom_order: str = "default"        # "default" (canonical) or "dependency"
    max_atoms: int = 12                # brute-force size cap
    max_branches: int | None = None
    time_budget: float | None = None   # seconds
    use_fixed_point: bool = True       # pin atoms the fixed point decides

    def __post_init__(self):
        if self.atom_order not in ("default", "dependency"):
            raise ValueError(f"bad atom order: {self.atom_order!r}")


@dataclass
class SolverStats:
    atoms: int = 0
    targets: int = 0
    pinned: int = 0
    branches: int = 0
    propagations: int = 0
    leaf_checks: int = 0
    elapsed: float = 0.0


@dataclass(frozen=True)
class ValidationReport:
    conforms: bool
    witness: Assignment | None
    violated_targets: tuple[Atom, ...]
    fixed_point: Assignment
    stats: SolverStats

    def __bool__(self) -> bool:
        return self.conforms


def atom_dependencies(
    g: PropertyGraph, shapes: ShapeSet, atom: Atom
) -> frozenset[Atom]:
    """The atoms whose assigned values the evaluation of `atom` reads."""
    shape = shapes.get(atom.shape)
    out: set[Atom] = set()
    cache: dict = {}

    def walk(c, x: str, kind: str):
        if isinstance(c, ShapeRef):
            out.add(Atom(c.name, x, kind))
        elif isinstance(c, Not):
            walk(c.inner, x, kind)
        elif isinstance(c, And):
            walk(c.first, x, kind)
            walk(c.second, x, kind)
        elif isinstance(c, QualPath):
            for m in eval_path(g, x, c.path, cache):
                walk(c.inner, m, NODE)
        elif isinstance(c, QualIncoming):
            for e in g.edges:
                if g.endpoints(e)[1] == x:
                    walk(c.inner, e, EDGE)
        elif isinstance(c, QualOutgoing):
            for e in g.edges:
                if g.endpoints(e)[0] == x:
                    walk(c.inner, e, EDGE)
        elif isinstance(c, Src):
            walk(c.inner, g.endpoints(x)[0], NODE)
        elif isinstance(c, Dst):
            walk(c.inner, g.endpoints(x)[1], NODE)
        # Leaves never read the assignment.

    walk(shape.constraint, atom.element, shape.kind)
    return frozenset(out)


def _dependency_order(
    ordered: tuple[Atom, ...], deps: Mapping[Atom, frozenset[Atom]]
) -> tuple[Atom, ...]:
    """Atoms with dependencies before their dependents (Tarjan emit order),
    canonical order inside a component and between ties."""
    index: dict[Atom, int] = {}
    low: dict[Atom, int] = {}
    on_stack: set[Atom] = set()
    stack: list[Atom] = []
    emitted: list[Atom] = []
    counter = [0]

    def connect(v: Atom):
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in sorted(deps[v], key=Atom.sort_key):
            if w not in deps:
                continue
            if w not in index:
                connect(w)
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
            emitted.extend(sorted(component, key=Atom.sort_key))

    for v in ordered:
        if v not in index:
            connect(v)
    return tuple(emitted)


class _Budget:
    def __init__(self, config: SolverConfig, stats: SolverStats):
        self.config = config
        self.stats = stats
        self.started = time.monotonic()

    def spend_branch(self):
        self.stats.branches += 1
        limit = self.config.max_branches
        if limit is not None and self.stats.branches > limit:
            raise BudgetExceeded(
                f"branch limit {limit} exhausted", stats=self.stats
            )
        if (
            self.config.time_budget is not None
            and self.stats.branches % 64 == 0
            and time.monotonic() - self.started > self.config.time_budget
        ):
            raise BudgetExceeded(
                f"time budget {self.config.time_budget}s exhausted",
                stats=self.stats,
            )

    def finish(self):
        self.stats.elapsed = time.monotonic() - self.started


class _Instance:
    """Shared precomputation for one (graph, shapes) pair."""

    def __init__(self, g: PropertyGraph, shapes: ShapeSet, config: SolverConfig):
        self.checker = FaithfulnessChecker(g, shapes)
        self.config = config
        self.atoms = self.checker.atoms
        self.deps = {a: atom_dependencies(g, shapes, a) for a in self.atoms}
        self.dependents: dict[Atom, set[Atom]] = {a: set() for a in self.atoms}
        for a, ds in self.deps.items():
            for d in ds:
                self.dependents[d].add(a)
        if config.atom_order == "dependency":
            self.order = _dependency_order(self.atoms, self.deps)
        else:
            self.order = self.atoms
        self.targets = self.checker.target_atoms
        self.lfp = least_fixed_point(g, shapes)

    def pinned_values(self) -> dict[Atom, TruthValue] | None:
        """Forced values (targets and fixed-point decisions), or None when
        the fixed point already refutes a target."""
        pinned: dict[Atom, TruthValue] = {}
        for a in self.targets:
            pinned[a] = TRUE
        if self.config.use_fixed_point:
            for a, v in self.lfp.items():
                if v is UNKNOWN:
                    continue
                if pinned.get(a, v) is not v:
                    return None  # target pinned yes, fixed point says no
                pinned[a] = v
        else:
            # Assignment-independent atoms are still forced to their value.
            for a in self.atoms:
                if not self.deps[a]:
                    v = self.checker.evaluate({}, a)
                    if pinned.get(a, v) is not v:
                        return None
                    pinned[a] = v
        return pinned

    def violated_targets(self) -> tuple[Atom, ...]:
        return tuple(
            a
            for a in sorted(self.targets, key=Atom.sort_key)
            if self.lfp[a] is not TRUE
        )


def _search(inst: _Instance, budget: _Budget) -> Iterator[dict[Atom, TruthValue]]:
    """All strictly faithful assignments, lexicographically by atom order.

    Chronological backtracking with forced-value propagation.  An unassigned
    atom whose dependencies are all decided is pinned by its equation; an
    assigned atom whose dependencies complete later is re-checked against
    its equation, so dead branches fall off as early as possible.
    """
    checker = inst.checker
    stats = budget.stats
    pinned = inst.pinned_values()
    if pinned is None:
        return
    if not inst.atoms:
        stats.leaf_checks += 1
        yield {}
        return

    sigma: dict[Atom, TruthValue] = {}
    trail: list[Atom] = []

    def assign(atom: Atom, value: TruthValue):
        sigma[atom] = value
        trail.append(atom)

    def undo(mark: int):
        while len(trail) > mark:
            del sigma[trail.pop()]

    def ready(atom: Atom) -> bool:
        return all(d in sigma for d in inst.deps[atom])

    def settle(queue: list[Atom]) -> bool:
        """Propagate consequences of freshly assigned atoms."""
        while queue:
            a = queue.pop()
            for d in sorted(inst.dependents[a], key=Atom.sort_key):
                if not ready(d):
                    continue
                value = checker.evaluate(sigma, d)
                if d in sigma:
                    if sigma[d] is not value:
                        return False
                    continue
                required = pinned.get(d)
                if required is not None and required is not value:
                    return False
                stats.propagations += 1
                assign(d, value)
                queue.append(d)
        return True

    def seed() -> bool:
        queue: list[Atom] = []
        for atom, value in pinned.items():
            assign(atom, value)
            queue.append(atom)
        for atom in inst.order:
            if atom not in sigma and ready(atom):
                value = checker.evaluate(sigma, atom)
                stats.propagations += 1
                assign(atom, value)
                queue.append(atom)
        if not settle(queue):
            return False
        # Equations of pre-assigned atoms with no open dependencies never
        # surface in the dependent walk; verify them once up front.
        for atom in inst.order:
            if atom in sigma and ready(atom):
                if checker.evaluate(sigma, atom) is not sigma[atom]:
                    return False
        return True

    def descend(position: int) -> Iterator[dict[Atom, TruthValue]]:
        while position < len(inst.order) and inst.order[position] in sigma:
            position += 1
        if position == len(inst.order):
            stats.leaf_checks += 1
            if checker.holds(sigma):
                yield dict(sigma)
            return
        atom = inst.order[position]
        required = pinned.get(atom)
        for value in VALUE_ORDER:
            if required is not None and value is not required:
                continue
            budget.spend_branch()
            mark = len(trail)
            assign(atom, value)
            if settle([atom]):
                yield from descend(position + 1)
            undo(mark)

    mark = len(trail)
    if seed():
        yield from descend(0)
    undo(mark)


def enumerate_faithful_assignments(
    g: PropertyGraph,
    shapes: ShapeSet,
    limit: int | None = None,
    config: SolverConfig | None = None,
) -> list[Assignment]:
    """Faithful assignments in canonical order, up to limit."""
    config = config or SolverConfig()
    stats = SolverStats()
    inst = _Instance(g, shapes, config)
    stats.atoms = len(inst.atoms)
    stats.targets = len(inst.targets)
    budget = _Budget(config, stats)
    found: list[Assignment] = []
    try:
        for sigma in _search(inst, budget):
            found.append(Assignment(sigma))
            if limit is not None and len(found) >= limit:
                break
    finally:
        budget.finish()
    return found


def find_faithful_assignment(
    g: PropertyGraph,
    shapes: ShapeSet,
    config: SolverConfig | None = None,
) -> ValidationReport:
    """Decide conformance; on success the witness is the canonically first
    faithful assignment (under the default configuration)."""
    config = config or SolverConfig()
    stats = SolverStats()
    inst = _Instance(g, shapes, config)
    stats.atoms = len(inst.atoms)
    stats.targets = len(inst.targets)
    stats.pinned = len(inst.pinned_values() or ())
    budget = _Budget(config, stats)
    witness = None
    try:
        for sigma in _search(inst, budget):
            witness = Assignment(sigma)
            break
    finally:
        budget.finish()
    if witness is not None:
        return ValidationReport(True, witness, (), inst.lfp, stats)
    return ValidationReport(False, None, inst.violated_targets(), inst.lfp, stats)


def conforms(
    g: PropertyGraph, shapes: ShapeSet, config: SolverConfig | None = None
) -> bool:
    return find_faithful_assignment(g, shapes, config).conforms


def brute_force_conformance(
    g: PropertyGraph,
    shapes: ShapeSet,
    config: SolverConfig | None = None,
) -> ValidationReport:
    """Reference engine: plain enumeration over the unpinned atoms.

    Pins only what is provably forced (targets to yes; atoms that never read
    the assignment to their evaluation), then tries every combination in
    canonical order.  Raises TooLarge above config.max_atoms atoms.
    """
    config = config or SolverConfig()
    stats = SolverStats()
    start = time.monotonic()
    checker = FaithfulnessChecker(g, shapes)
    ordered = checker.atoms
    stats.atoms = len(ordered)
    stats.targets = len(checker.target_atoms)
    if len(ordered) > config.max_atoms:
        raise TooLarge(
            f"{len(ordered)} atoms exceed the brute-force cap {config.max_atoms}"
        )
    lfp = least_fixed_point(g, shapes)

    deps = {a: atom_dependencies(g, shapes, a) for a in ordered}
    pinned: dict[Atom, TruthValue] = {}
    for a in checker.target_atoms:
        pinned[a] = TRUE
    for a in ordered:
        if not deps[a]:
            value = checker.evaluate({}, a)
            if pinned.get(a, value) is not value:
                stats.elapsed = time.monotonic() - start
                return ValidationReport(
                    False, None,
                    tuple(a for a in sorted(checker.target_atoms,
                                            key=Atom.sort_key)
                          if lfp[a] is not TRUE),
                    lfp, stats,
                )
            pinned[a] = value
    stats.pinned = len(pinned)
    free = [a for a in ordered if a not in pinned]
    witness = None
    for combo in product(VALUE_ORDER, repeat=len(free)):
        stats.leaf_checks += 1
        sigma = dict(pinned)
        sigma.update(zip(free, combo))
        if checker.holds(sigma):
            witness = Assignment(sigma)
            break
    stats.elapsed = time.monotonic() - start
    if witness is not None:
        return ValidationReport(True, witness, (), lfp, stats)
    violated = tuple(
        a for a in sorted(checker.target_atoms, key=Atom.sort_key)
        if lfp[a] is not TRUE
    )
    return ValidationReport(False, None, violated, lfp, stats)
