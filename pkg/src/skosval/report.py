"""Report assembly and rendering (JSON, RDF, plain text)."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import __version__
from .classify import LintKind, rollup
from .closure import DerivationTree
from .detect import Finding, PatternClass, Severity
from .rdf import (
    RDF,
    REPORT,
    VALIDATION,
    XSD,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Node,
    Triple,
    canonical_sort,
)
from .syntax import ParseDiagnostic, PrefixTable, default_prefixes, format_node

__all__ = [
    "Report",
    "build_report",
    "status_of",
    "digest",
    "to_json",
    "to_rdf",
    "to_text",
    "findings_from_rdf",
    "term_string",
    "report_prefixes",
    "SCHEMA_RESOURCE",
]

SCHEMA_RESOURCE = "data/report.schema.json"
_RDF_SCOPE = "report"


@dataclass(frozen=True)
class Report:
    version: str
    input_digest: str
    findings: tuple[Finding, ...]
    counts: dict
    diagnostics: tuple[ParseDiagnostic, ...] = ()
    status: str = "clean"


def status_of(findings: Iterable[Finding]) -> str:
    severities = {f.severity for f in findings}
    if Severity.Error in severities:
        return "errors"
    if severities:
        return "warnings"
    return "clean"


def digest(chunks: Iterable[bytes]) -> str:
    """Hex SHA-256 over the concatenated raw input bytes."""
    h = hashlib.sha256()
    for chunk in chunks:
        h.update(chunk)
    return h.hexdigest()


def build_report(
    findings: Sequence[Finding],
    diagnostics: Sequence[ParseDiagnostic] = (),
    input_digest: str = "",
    version: str = __version__,
) -> Report:
    findings = tuple(findings)
    return Report(
        version=version,
        input_digest=input_digest,
        findings=findings,
        counts=rollup(findings),
        diagnostics=tuple(diagnostics),
        status=status_of(findings),
    )


def term_string(node: Node) -> str:
    """IRIs as bare strings; blank nodes and literals in N-Triples syntax."""
    if type(node) is Iri:
        return node.value
    if type(node) is BlankNode:
        return f"_:{node.scope}.{node.label}" if node.scope else f"_:{node.label}"
    return format_node(node)


def _triple_json(t: Optional[Triple]):
    if t is None:
        return None
    return {"s": term_string(t[0]), "p": term_string(t[1]), "o": term_string(t[2])}


def _tree_json(tree: DerivationTree) -> dict:
    return {
        "triple": _triple_json(tree.conclusion),
        "rule": "asserted" if tree.rule is None else tree.rule.value,
        "premises": [_tree_json(p) for p in tree.premises],
    }


def _finding_json(f: Finding) -> dict:
    return {
        "pattern": f.pattern.name,
        "severity": f.severity.value,
        "bindings": {k: term_string(v) for k, v in f.bindings},
        "matched": [_triple_json(t) for t in f.sorted_matched()],
        "implied": _triple_json(f.implied),
        "notes": list(f.notes),
        "explanation": [_tree_json(t) for t in f.explanation],
    }


def _diagnostic_json(d: ParseDiagnostic) -> dict:
    return {
        "source": d.source,
        "line": d.line,
        "column": d.column,
        "severity": d.severity,
        "message": d.message,
    }


def to_json(r: Report) -> str:
    doc = {
        "version": r.version,
        "input_digest": r.input_digest,
        "status": r.status,
        "counts": {pc.name: r.counts.get(pc, 0) for pc in PatternClass},
        "findings": [_finding_json(f) for f in r.findings],
        "diagnostics": [_diagnostic_json(d) for d in r.diagnostics],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# RDF

def report_prefixes() -> PrefixTable:
    table = default_prefixes()
    table.bind("vr", REPORT.base)
    table.bind("xsd", XSD.base)
    return table


def _class_iri(pattern) -> Iri:
    if isinstance(pattern, PatternClass):
        return pattern.iri
    return REPORT[pattern.name]


def _reify(g: Graph, node: BlankNode, t: Triple) -> None:
    g.insert(Triple(node, RDF.type, RDF.Statement))
    g.insert(Triple(node, RDF.subject, t[0]))
    g.insert(Triple(node, RDF.predicate, t[1]))
    g.insert(Triple(node, RDF.object, t[2]))


def to_rdf(r: Report) -> Graph:
    """One typed blank node per finding, matched triples reified under ``vr:matched``."""
    g = Graph()
    root = BlankNode("report", _RDF_SCOPE)
    g.insert(Triple(root, RDF.type, REPORT.ValidationReport))
    g.insert(Triple(root, REPORT.toolVersion, Literal(r.version)))
    g.insert(Triple(root, REPORT.inputDigest, Literal(r.input_digest)))
    g.insert(Triple(root, REPORT.status, REPORT[r.status]))
    for i, f in enumerate(r.findings, 1):
        fn = BlankNode(f"f{i}", _RDF_SCOPE)
        g.insert(Triple(root, REPORT.finding, fn))
        g.insert(Triple(fn, RDF.type, _class_iri(f.pattern)))
        g.insert(Triple(fn, REPORT.position, Literal(str(i), XSD.integer)))
        g.insert(Triple(fn, REPORT.severity, REPORT[f.severity.name]))
        for j, t in enumerate(f.sorted_matched(), 1):
            st = BlankNode(f"f{i}m{j}", _RDF_SCOPE)
            g.insert(Triple(fn, REPORT.matched, st))
            _reify(g, st, t)
        if f.implied is not None:
            st = BlankNode(f"f{i}i", _RDF_SCOPE)
            g.insert(Triple(fn, REPORT.implied, st))
            _reify(g, st, f.implied)
        for j, (name, value) in enumerate(f.bindings, 1):
            b = BlankNode(f"f{i}b{j}", _RDF_SCOPE)
            g.insert(Triple(fn, REPORT.binding, b))
            g.insert(Triple(b, REPORT.variable, Literal(name)))
            g.insert(Triple(b, REPORT.value, value))
        for note in f.notes:
            g.insert(Triple(fn, REPORT.note, Literal(note)))
    return g


def _statement(g: Graph, node: Node) -> Triple:
    s = next(g.objects(node, RDF.subject))
    p = next(g.objects(node, RDF.predicate))
    o = next(g.objects(node, RDF.object))
    return Triple(s, p, o)


def findings_from_rdf(g: Graph) -> list[tuple[Iri, frozenset]]:
    """Recover (class IRI, matched triple set) pairs from a ``to_rdf`` graph, in report order."""
    out = []
    for t in g.triples(None, REPORT.finding, None):
        fn = t[2]
        position = int(next(g.objects(fn, REPORT.position)).lexical)
        cls = next(g.objects(fn, RDF.type))
        matched = frozenset(_statement(g, st) for st in g.objects(fn, REPORT.matched))
        out.append((position, cls, matched))
    out.sort(key=lambda x: x[0])
    return [(cls, matched) for _, cls, matched in out]


# --------------------------------------------------------------------------
# text

def _fmt(node: Node, prefixes: PrefixTable) -> str:
    if type(node) is BlankNode:
        return term_string(node)
    return format_node(node, prefixes)


def _fmt_triple(t: Triple, prefixes: PrefixTable) -> str:
    return " ".join(_fmt(n, prefixes) for n in t)


def _tree_lines(tree: DerivationTree, prefixes: PrefixTable, indent: int) -> list[str]:
    rule = "asserted" if tree.rule is None else tree.rule.value
    lines = [" " * indent + f"{_fmt_triple(tree.conclusion, prefixes)}  [{rule}]"]
    for p in tree.premises:
        lines.extend(_tree_lines(p, prefixes, indent + 2))
    return lines


def _summary(r: Report) -> str:
    n = len(r.findings)
    if not n:
        return f"{r.status}, 0 findings"
    by = {s: 0 for s in Severity}
    for f in r.findings:
        by[f.severity] += 1
    parts = ", ".join(f"{by[s]} {s.value}" for s in Severity)
    noun = "finding" if n == 1 else "findings"
    return f"{r.status}, {n} {noun} ({parts})"


def to_text(r: Report, verbosity: int = 0, prefixes: Optional[PrefixTable] = None) -> str:
    """Human-readable report.

    0: one line per diagnostic and finding plus a summary line;
    1: adds matched and implied triples; 2: adds derivation trees.
    """
    if prefixes is None:
        prefixes = report_prefixes()
    lines = [str(d) for d in r.diagnostics]
    for f in r.findings:
        binds = " ".join(f"{k}={_fmt(v, prefixes)}" for k, v in f.bindings)
        lines.append(f"{f.severity.value.upper():<7} {f.pattern.name} {binds}".rstrip())
        if verbosity >= 1:
            for t in f.sorted_matched():
                lines.append(f"    matched  {_fmt_triple(t, prefixes)}")
            if f.implied is not None:
                lines.append(f"    implied  {_fmt_triple(f.implied, prefixes)}")
            for note in f.notes:
                lines.append(f"    note     {note}")
        if verbosity >= 2 and f.explanation:
            lines.append("    derivation:")
            for tree in f.explanation:
                lines.extend(_tree_lines(tree, prefixes, 6))
    lines.append(_summary(r))
    return "\n".join(lines) + "\n"
