"""Shape validation for property graphs with three-valued recursive semantics.

The package parses shape definitions, evaluates constraints over property
graphs under three-valued logic, and decides conformance by searching for a
strictly faithful assignment of truth values to (shape, element) atoms.
Semantics-preserving transforms (path elimination, operator folding,
single-target reduction), JSON graph interop, and logic-program fact export
round out the toolbox; the `pgshapes` command drives it from the shell.
"""

from __future__ import annotations

from .errors import (
    BudgetExceeded,
    DanglingEdge,
    DomainMismatch,
    IdClash,
    KindMismatch,
    NameCollision,
    NotNormalized,
    PathsPresent,
    PgShapesError,
    SchemaError,
    ShapeSyntaxError,
    TooLarge,
    UnencodableValue,
    UnknownElement,
    UnknownShapeName,
    UnsupportedTarget,
)
from .asp import export_asp
from .graph import EDGE, INCOMING, NODE, OUTGOING, Label, PropertyGraph, build_graph
from .jsonio import export_graph_json, import_graph_json
from .semantics import (
    Assignment,
    Atom,
    FaithfulnessVerdict,
    TruthValue,
    atoms,
    eval_edge_constraint,
    eval_node_constraint,
    eval_path,
    eval_target_edges,
    eval_target_nodes,
    is_strictly_faithful,
    least_fixed_point,
)
from .parser import parse_shape_document, parse_shapes
from .printer import render_shape, render_shapes
from .shapes import Shape, ShapeSet, Span, link_shapes
from .solver import (
    SolverConfig,
    SolverStats,
    ValidationReport,
    brute_force_conformance,
    conforms,
    enumerate_faithful_assignments,
    find_faithful_assignment,
)
from .sugar import desugar_constraint, desugar_shapes, desugar_targets
from .transforms import (
    TransformTrace,
    eliminate_paths,
    fold_operators,
    is_normalized,
    normalize_instance,
    reduce_to_single_target,
    verify_normalized,
)
from .values import DateValue, IntValue, StrValue, Value, parse_date

__version__ = "0.1.0"

__all__ = [
    "Assignment",
    "Atom",
    "BudgetExceeded",
    "DanglingEdge",
    "DateValue",
    "DomainMismatch",
    "EDGE",
    "FaithfulnessVerdict",
    "IdClash",
    "INCOMING",
    "IntValue",
    "KindMismatch",
    "Label",
    "NameCollision",
    "NODE",
    "NotNormalized",
    "OUTGOING",
    "PathsPresent",
    "PgShapesError",
    "PropertyGraph",
    "SchemaError",
    "Shape",
    "ShapeSet",
    "ShapeSyntaxError",
    "SolverConfig",
    "SolverStats",
    "Span",
    "StrValue",
    "TooLarge",
    "TransformTrace",
    "TruthValue",
    "ValidationReport",
    "UnencodableValue",
    "UnknownElement",
    "UnknownShapeName",
    "UnsupportedTarget",
    "Value",
    "atoms",
    "brute_force_conformance",
    "build_graph",
    "conforms",
    "desugar_constraint",
    "eliminate_paths",
    "desugar_shapes",
    "desugar_targets",
    "enumerate_faithful_assignments",
    "eval_edge_constraint",
    "eval_node_constraint",
    "eval_path",
    "eval_target_edges",
    "fold_operators",
    "eval_target_nodes",
    "export_asp",
    "export_graph_json",
    "find_faithful_assignment",
    "import_graph_json",
    "is_normalized",
    "is_strictly_faithful",
    "least_fixed_point",
    "link_shapes",
    "normalize_instance",
    "parse_date",
    "parse_shape_document",
    "parse_shapes",
    "reduce_to_single_target",
    "render_shape",
    "render_shapes",
    "verify_normalized",
    "__version__",
]
