"""Morse flows on compact orientable surfaces with boundary, as separatrix diagrams.

Enumerates all flows with a given number of singular points up to topological
equivalence, classifies their typical saddle-node bifurcations, and computes
post-bifurcation flows.
"""

from .diagram import (
    Dart,
    DiagramError,
    DanglingEndpoint,
    DisconnectedDiagram,
    DoubleSummary,
    DuplicateId,
    EdgeKind,
    RotationMismatch,
    SeparatrixDiagram,
    TopologyReport,
    ValidationVerdict,
    VertexKind,
    Violation,
    build_diagram,
    double,
    mirror,
    relabel,
    reverse_flow,
    trace_faces,
    validate,
)
from .canon import (
    DEFAULT_QUOTIENT,
    QuotientConfig,
    SymmetrySummary,
    are_isomorphic,
    canonical_code,
    canonical_form,
    symmetries,
)
from .census import PointBudget, enumerate_flows, point_multisets

__all__ = [
    "Dart",
    "DiagramError",
    "DanglingEndpoint",
    "DisconnectedDiagram",
    "DoubleSummary",
    "DuplicateId",
    "EdgeKind",
    "RotationMismatch",
    "SeparatrixDiagram",
    "TopologyReport",
    "ValidationVerdict",
    "VertexKind",
    "Violation",
    "build_diagram",
    "double",
    "mirror",
    "relabel",
    "reverse_flow",
    "trace_faces",
    "validate",
    "DEFAULT_QUOTIENT",
    "QuotientConfig",
    "SymmetrySummary",
    "are_isomorphic",
    "canonical_code",
    "canonical_form",
    "symmetries",
    "PointBudget",
    "enumerate_flows",
    "point_multisets",
]

__version__ = "0.1.0"
