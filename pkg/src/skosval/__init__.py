"""Validation of SKOS cross-vocabulary mappings.

Typical use::

    from skosval import parse, compute_closure, detect_all

    graph, diagnostics = parse(text)
    findings = detect_all(compute_closure(graph.freeze()))
"""

__version__ = "0.1.0"

from .rdf import BlankNode, Graph, Iri, Literal, Triple, canonical_sort, SKOS  # noqa: E402
from .syntax import ParseDiagnostic, PrefixTable, parse, serialize  # noqa: E402
from .closure import ClosureGraph, RuleId, compute_closure, explain, holds  # noqa: E402
from .detect import (  # noqa: E402
    Finding,
    PatternClass,
    Severity,
    collapse_symmetric,
    detect_all,
    detect_p1,
    detect_p2,
    detect_p3,
    detect_p4,
    detect_p5,
    detect_p6,
    detect_p7,
)
from .classify import convention_lint, ontology, rollup  # noqa: E402
from .report import Report, build_report, to_json, to_rdf, to_text  # noqa: E402

__all__ = [
    "BlankNode", "Graph", "Iri", "Literal", "Triple", "canonical_sort", "SKOS",
    "ParseDiagnostic", "PrefixTable", "parse", "serialize",
    "ClosureGraph", "RuleId", "compute_closure", "explain", "holds",
    "Finding", "PatternClass", "Severity", "collapse_symmetric", "detect_all",
    "detect_p1", "detect_p2", "detect_p3", "detect_p4", "detect_p5", "detect_p6", "detect_p7",
    "convention_lint", "ontology", "rollup",
    "Report", "build_report", "to_json", "to_rdf", "to_text",
]
