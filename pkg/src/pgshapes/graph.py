"""Immutable property graph: directed multigraph with identified edges,
label sets, and finitely multi-valued typed properties.

Node ids and edge ids share one namespace-disjointness rule: the two id sets
may not overlap.  Ids are opaque text tokens; integer tokens are accepted on
input and normalized to their decimal text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DanglingEdge, IdClash, KindMismatch, UnknownElement
from .values import Value, coerce_value

NODE = "node"
EDGE = "edge"

OUTGOING = "outgoing"
INCOMING = "incoming"


@dataclass(frozen=True)
class Label:
    """A label name tagged with the namespace it belongs to."""

    name: str
    kind: str  # NODE or EDGE

    def __post_init__(self):
        if self.kind not in (NODE, EDGE):
            raise ValueError(f"bad label kind: {self.kind!r}")


def _ident(raw: object) -> str:
    if isinstance(raw, bool):
        raise TypeError("bool is not an element id")
    if isinstance(raw, int):
        return str(raw)
    if isinstance(raw, str):
        if not raw:
            raise ValueError("empty element id")
        return raw
    raise TypeError(f"not an element id: {raw!r}")


class PropertyGraph:
    """Validated immutable graph.  Construct through build_graph()."""

    __slots__ = ("_nodes", "_edges", "_endpoints", "_labels", "_props", "_out", "_in")

    def __init__(self, nodes, edges, endpoints, labels, props, out, in_):
        self._nodes = nodes
        self._edges = edges
        self._endpoints = endpoints
        self._labels = labels
        self._props = props
        self._out = out
        self._in = in_

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def edges(self) -> tuple[str, ...]:
        return self._edges

    def has_node(self, x: str) -> bool:
        return x in self._out

    def has_edge(self, x: str) -> bool:
        return x in self._endpoints

    def __contains__(self, x: str) -> bool:
        return self.has_node(x) or self.has_edge(x)

    def kind_of(self, x: str) -> str:
        if self.has_node(x):
            return NODE
        if self.has_edge(x):
            return EDGE
        raise UnknownElement(f"no such element: {x!r}")

    def endpoints(self, e: str) -> tuple[str, str]:
        """(source, destination) of edge e."""
        try:
            return self._endpoints[e]
        except KeyError:
            raise UnknownElement(f"no such edge: {e!r}") from None

    def labels_of(self, x: str) -> frozenset[str]:
        if x not in self:
            raise UnknownElement(f"no such element: {x!r}")
        return self._labels.get(x, frozenset())

    def property_values(self, x: str, key: str) -> frozenset[Value]:
        """The value set of (x, key); empty when the key is absent."""
        if x not in self:
            raise UnknownElement(f"no such element: {x!r}")
        return self._props.get((x, key), frozenset())

    def property_keys(self, x: str) -> tuple[str, ...]:
        if x not in self:
            raise UnknownElement(f"no such element: {x!r}")
        return tuple(sorted(k for (y, k) in self._props if y == x))

    def adjacent_edges(self, n: str, direction: str) -> tuple[tuple[str, str], ...]:
        """(edge, other endpoint) pairs at node n, in the given direction.

        A self-loop shows up in both directions.
        """
        if direction == OUTGOING:
            table = self._out
        elif direction == INCOMING:
            table = self._in
        else:
            raise ValueError(f"bad direction: {direction!r}")
        try:
            return table[n]
        except KeyError:
            raise UnknownElement(f"no such node: {n!r}") from None

    def __eq__(self, other) -> bool:
        if not isinstance(other, PropertyGraph):
            return NotImplemented
        return (
            self._nodes == other._nodes
            and self._edges == other._edges
            and self._endpoints == other._endpoints
            and self._labels == other._labels
            and self._props == other._props
        )

    def __repr__(self) -> str:
        return (
            f"PropertyGraph(nodes={len(self._nodes)}, edges={len(self._edges)})"
        )


def build_graph(
    nodes: Iterable[object],
    edges: Iterable[object] = (),
    endpoints: Mapping[object, tuple[object, object]] | None = None,
    labelings: Mapping[object, Iterable[object]] | None = None,
    properties: Mapping[tuple[object, str], Iterable[object]] | None = None,
) -> PropertyGraph:
    """Validate and build a graph.

    labelings maps an element to Label objects (or bare names, which take the
    element's own kind).  properties maps (element, key) to a non-empty
    collection of values; plain int/str/date are coerced.
    """
    node_ids = [_ident(n) for n in nodes]
    edge_ids = [_ident(e) for e in edges]
    node_set = set(node_ids)
    edge_set = set(edge_ids)
    if len(node_set) != len(node_ids):
        raise IdClash("duplicate node id")
    if len(edge_set) != len(edge_ids):
        raise IdClash("duplicate edge id")
    clash = node_set & edge_set
    if clash:
        raise IdClash(f"ids used as both node and edge: {sorted(clash)}")

    endpoint_map: dict[str, tuple[str, str]] = {}
    for e, pair in (endpoints or {}).items():
        eid = _ident(e)
        if eid not in edge_set:
            raise DanglingEdge(f"endpoints given for unknown edge {eid!r}")
        src, dst = (_ident(pair[0]), _ident(pair[1]))
        if src not in node_set or dst not in node_set:
            raise DanglingEdge(f"edge {eid!r} endpoint not a node: ({src}, {dst})")
        endpoint_map[eid] = (src, dst)
    missing = edge_set - endpoint_map.keys()
    if missing:
        raise DanglingEdge(f"edges without endpoints: {sorted(missing)}")

    label_map: dict[str, frozenset[str]] = {}
    for x, raw_labels in (labelings or {}).items():
        xid = _ident(x)
        if xid in node_set:
            kind = NODE
        elif xid in edge_set:
            kind = EDGE
        else:
            raise UnknownElement(f"labels given for unknown element {xid!r}")
        names = set()
        for lab in raw_labels:
            if isinstance(lab, Label):
                if lab.kind != kind:
                    raise KindMismatch(
                        f"{lab.kind} label {lab.name!r} on {kind} {xid!r}"
                    )
                names.add(lab.name)
            elif isinstance(lab, str):
                names.add(lab)
            else:
                raise TypeError(f"not a label: {lab!r}")
        if names:
            label_map[xid] = frozenset(names)

    prop_map: dict[tuple[str, str], frozenset[Value]] = {}
    for (x, key), raw_values in (properties or {}).items():
        xid = _ident(x)
        if xid not in node_set and xid not in edge_set:
            raise UnknownElement(f"property on unknown element {xid!r}")
        if not isinstance(key, str) or not key:
            raise TypeError(f"not a property key: {key!r}")
        vals = frozenset(coerce_value(v) for v in raw_values)
        if not vals:
            raise ValueError(f"empty value set for ({xid!r}, {key!r})")
        prop_map[(xid, key)] = vals

    out: dict[str, list[tuple[str, str]]] = {n: [] for n in node_set}
    in_: dict[str, list[tuple[str, str]]] = {n: [] for n in node_set}
    for e, (src, dst) in endpoint_map.items():
        out[src].append((e, dst))
        in_[dst].append((e, src))

    return PropertyGraph(
        tuple(sorted(node_set)),
        tuple(sorted(edge_set)),
        endpoint_map,
        label_map,
        prop_map,
        {n: tuple(sorted(pairs)) for n, pairs in out.items()},
        {n: tuple(sorted(pairs)) for n, pairs in in_.items()},
    )
