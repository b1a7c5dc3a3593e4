"""Graph interchange: a JSON document format and its reader and writer.

The document is a single object with "nodes" and "relationships" arrays.
Every element carries "id", optional "labels", and optional "properties";
a relationship adds "start" and "end" node ids.  Property values are typed
wrappers like {"type": "int", "value": 30} so readers never have to guess,
and dates travel as ISO text.  Unknown fields are skipped with a warning
rather than rejected, so documents from richer exporters still load.

Export output is canonical: sorted keys, two-space indent, one trailing
newline.  import(export(G)) is the identity.
"""

from __future__ import annotations

import json
import warnings

from .errors import SchemaError
from .graph import PropertyGraph, build_graph
from .values import (
    DATE,
    INT,
    STRING,
    DateValue,
    StrValue,
    IntValue,
    Value,
    parse_date,
    value_sort_key,
)

_NODE_FIELDS = frozenset({"id", "labels", "properties"})
_REL_FIELDS = frozenset({"id", "labels", "label", "start", "end", "properties"})
_VALUE_FIELDS = frozenset({"type", "value"})


def _warn_unknown(obj: dict, known: frozenset, where: str) -> None:
    extra = sorted(set(obj) - known)
    if extra:
        warnings.warn(f"{where}: ignoring unknown fields {extra}", stacklevel=4)


def _id_field(obj: dict, name: str, where: str) -> object:
    if name not in obj:
        raise SchemaError(f"{where}: missing {name!r}")
    raw = obj[name]
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        raise SchemaError(f"{where}: {name!r} must be a string or integer id")
    if raw == "":
        raise SchemaError(f"{where}: empty id")
    return raw


def _decode_labels(obj: dict, where: str) -> list[str]:
    names: list[str] = []
    if "labels" in obj and "label" in obj:
        raise SchemaError(f"{where}: give either 'labels' or 'label', not both")
    if "label" in obj:
        raw = [obj["label"]]
    else:
        raw = obj.get("labels", [])
        if not isinstance(raw, list):
            raise SchemaError(f"{where}: 'labels' must be a list")
    for lab in raw:
        if not isinstance(lab, str) or not lab:
            raise SchemaError(f"{where}: label must be a non-empty string")
        names.append(lab)
    return names


def _decode_value(raw: object, where: str) -> Value:
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: value entry must be an object")
    _warn_unknown(raw, _VALUE_FIELDS, where)
    if "type" not in raw or "value" not in raw:
        raise SchemaError(f"{where}: value entry needs 'type' and 'value'")
    tag = raw["type"]
    payload = raw["value"]
    if tag == INT:
        if isinstance(payload, bool) or not isinstance(payload, int):
            raise SchemaError(f"{where}: int value must be a JSON integer")
        return IntValue(payload)
    if tag == STRING:
        if not isinstance(payload, str):
            raise SchemaError(f"{where}: string value must be JSON text")
        return StrValue(payload)
    if tag == DATE:
        if not isinstance(payload, str):
            raise SchemaError(f"{where}: date value must be ISO text")
        try:
            return DateValue(parse_date(payload))
        except ValueError as exc:
            raise SchemaError(f"{where}: {exc}") from exc
    raise SchemaError(f"{where}: unknown value type tag {tag!r}")


def _decode_properties(
    obj: dict, element: object, where: str, out: dict
) -> None:
    raw = obj.get("properties", {})
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: 'properties' must be an object")
    for key, entries in raw.items():
        if not isinstance(key, str) or not key:
            raise SchemaError(f"{where}: property key must be a non-empty string")
        if not isinstance(entries, list):
            raise SchemaError(f"{where}: values of {key!r} must be a list")
        if not entries:
            raise SchemaError(f"{where}: empty value list for {key!r}")
        out[(element, key)] = [
            _decode_value(v, f"{where}, key {key!r}") for v in entries
        ]


def import_graph_json(data: bytes | str) -> PropertyGraph:
    """Read a graph document.  Raises SchemaError on malformed input and
    DanglingEdge / IdClash when the document violates graph invariants."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"not UTF-8: {exc}") from exc
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    for name in ("nodes", "relationships"):
        if name not in doc:
            raise SchemaError(f"document missing {name!r}")
        if not isinstance(doc[name], list):
            raise SchemaError(f"{name!r} must be a list")
    _warn_unknown(doc, frozenset({"nodes", "relationships"}), "document")

    nodes: list[object] = []
    edges: list[object] = []
    endpoints: dict[object, tuple[object, object]] = {}
    labelings: dict[object, list[str]] = {}
    properties: dict[tuple[object, str], list[Value]] = {}

    for i, obj in enumerate(doc["nodes"]):
        where = f"nodes[{i}]"
        if not isinstance(obj, dict):
            raise SchemaError(f"{where}: must be an object")
        _warn_unknown(obj, _NODE_FIELDS, where)
        nid = _id_field(obj, "id", where)
        nodes.append(nid)
        labels = _decode_labels(obj, where)
        if labels:
            labelings[nid] = labels
        _decode_properties(obj, nid, where, properties)

    for i, obj in enumerate(doc["relationships"]):
        where = f"relationships[{i}]"
        if not isinstance(obj, dict):
            raise SchemaError(f"{where}: must be an object")
        _warn_unknown(obj, _REL_FIELDS, where)
        eid = _id_field(obj, "id", where)
        edges.append(eid)
        endpoints[eid] = (
            _id_field(obj, "start", where),
            _id_field(obj, "end", where),
        )
        labels = _decode_labels(obj, where)
        if labels:
            labelings[eid] = labels
        _decode_properties(obj, eid, where, properties)

    return build_graph(nodes, edges, endpoints, labelings, properties)


def _encode_value(v: Value) -> dict:
    if isinstance(v, DateValue):
        return {"type": DATE, "value": v.value.isoformat()}
    return {"type": v.type_name, "value": v.value}


def _encode_element(g: PropertyGraph, x: str) -> dict:
    out: dict = {"id": x, "labels": sorted(g.labels_of(x))}
    out["properties"] = {
        key: [
            _encode_value(v)
            for v in sorted(g.property_values(x, key), key=value_sort_key)
        ]
        for key in g.property_keys(x)
    }
    return out


def export_graph_json(g: PropertyGraph) -> bytes:
    """Serialize a graph to canonical UTF-8 JSON bytes."""
    rels = []
    for e in g.edges:
        obj = _encode_element(g, e)
        obj["start"], obj["end"] = g.endpoints(e)
        rels.append(obj)
    doc = {
        "nodes": [_encode_element(g, n) for n in g.nodes],
        "relationships": rels,
    }
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")
