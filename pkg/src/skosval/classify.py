"""Pattern class ontology, roll-up counts and the scheme-convention lint."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

from .detect import SEVERITY, Finding, PatternClass, Severity, finding_sort_key
from .rdf import RDF, RDFS, SKOS, Graph, Literal, Node, Triple, canonical_sort

__all__ = [
    "ClassDescriptor",
    "DESCRIPTORS",
    "LintKind",
    "ancestors",
    "ontology",
    "rollup",
    "convention_lint",
    "MAPPING_PREDICATES",
    "SEMANTIC_PREDICATES",
]

P = PatternClass


@dataclass(frozen=True)
class ClassDescriptor:
    pattern: PatternClass
    comment: str
    parents: frozenset
    severity: Severity


_COMMENTS = {
    P.Pattern1VocabularyHijacking: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch mapping is "
        "considered as vocabulary hijacking to the original vocabulary"
    ),
    P.Pattern1NonConsistentWithSKOSRules: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch mapping is "
        "considered as contradictory with the existing skos:related relation"
    ),
    P.Pattern1NonConsistentWithSKOSExtraRules: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch mapping "
        "consists a cycle the with existing skos:broaderTransitive relation"
    ),
    P.Pattern2VocabularyHijacking: (
        "The inferred skos:exactMatch relation via skos:exactMatch mappings is "
        "considered as vocabulary hijacking to the original vocabulary"
    ),
    P.Pattern2NonConsistentWithSKOSExtraRules: (
        "The inferred skos:exactMatch relation via skos:exactMatch mappings is "
        "considered as conflicting with the existing skos:broaderTransitive relation"
    ),
    P.Pattern3NonConsistentWithSKOSRules: (
        "The inferred skos:broaderTransitive relation via skos:broaderTransitive and "
        "skos:broadMatch is considered as contradictory with the existing skos:relatedMatch mapping"
    ),
    P.Pattern3NonConsistentWithSKOSExtraRules: (
        "The inferred skos:broaderTransitive relation via skos:broaderTransitive and "
        "skos:broadMatch is considered as conflicting with the existing skos:exactMatch mapping"
    ),
    P.Pattern4NonConsistentWithSKOSRules: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch and "
        "skos:broaderTransitive is considered as contradictory with the existing skos:relatedMatch mapping"
    ),
    P.Pattern4NonConsistentWithSKOSExtraRules: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch and "
        "skos:broaderTransitive is considered as conflicting with the existing skos:exactMatch mapping"
    ),
    P.Pattern5VocabularyHijacking: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch mappings and "
        "skos:broaderTransitive is considered as vocabulary hijacking to the original vocabulary"
    ),
    P.Pattern5NonConsistentWithSKOSRules: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch mappings and "
        "skos:broaderTransitive is considered as contradictory with the existing skos:related relation"
    ),
    P.Pattern5NonConsistentWithSKOSExtraRules: (
        "The inferred skos:broaderTransitive relation via skos:broadMatch mappings and "
        "skos:broaderTransitive consists a cycle with the existing skos:broaderTransitive relation"
    ),
    P.Pattern6NonConsistentWithSKOSRules: (
        "The inferred skos:broaderTransitive relation via skos:broaderTransitive, skos:broadMatch "
        "and skos:broaderTransitive is considered as contradictory with the existing skos:relatedMatch mapping"
    ),
    P.Pattern6NonConsistentWithSKOSExtraRules: (
        "The inferred skos:broaderTransitive relation via skos:broaderTransitive, skos:broadMatch "
        "and skos:broaderTransitive is considered as conflicting with the existing skos:exactMatch mapping"
    ),
    P.Pattern7CounterIntuitive: (
        "The skos:exactMatch mappings and skos:broaderTransitive relations of two concept "
        "schemes form a cycle, which is considered as counter intuitive"
    ),
}

# the two non-consistent classes of patterns 2 and 5 mirror pattern 1's layout
_PARENTS = {
    P.Pattern1NonConsistentWithSKOSRules: {P.Pattern1VocabularyHijacking},
    P.Pattern1NonConsistentWithSKOSExtraRules: {P.Pattern1VocabularyHijacking},
    P.Pattern2NonConsistentWithSKOSExtraRules: {P.Pattern2VocabularyHijacking},
    P.Pattern5NonConsistentWithSKOSRules: {P.Pattern5VocabularyHijacking},
    P.Pattern5NonConsistentWithSKOSExtraRules: {P.Pattern5VocabularyHijacking},
}

DESCRIPTORS: dict[PatternClass, ClassDescriptor] = {
    pc: ClassDescriptor(pc, _COMMENTS[pc], frozenset(_PARENTS.get(pc, ())), SEVERITY[pc])
    for pc in PatternClass
}


def ancestors(pc: PatternClass) -> set[PatternClass]:
    """Transitive superclasses of ``pc`` (excluding ``pc``)."""
    out: set[PatternClass] = set()
    stack = list(DESCRIPTORS[pc].parents)
    while stack:
        parent = stack.pop()
        if parent in out:
            continue
        out.add(parent)
        stack.extend(DESCRIPTORS[parent].parents)
    return out


def ontology() -> Graph:
    g = Graph()
    for pc, desc in DESCRIPTORS.items():
        g.insert(Triple(pc.iri, RDF.type, RDFS.Class))
        g.insert(Triple(pc.iri, RDFS.comment, Literal(desc.comment)))
        for parent in desc.parents:
            g.insert(Triple(pc.iri, RDFS.subClassOf, parent.iri))
    return g.freeze()


def rollup(findings: Iterable[Finding]) -> dict[PatternClass, int]:
    counts = {pc: 0 for pc in PatternClass}
    for f in findings:
        if not isinstance(f.pattern, PatternClass):
            continue
        counts[f.pattern] += 1
        for parent in ancestors(f.pattern):
            counts[parent] += 1
    return counts


class LintKind(enum.Enum):
    MappingWithinScheme = "MappingWithinScheme"
    SemanticAcrossSchemes = "SemanticAcrossSchemes"


MAPPING_PREDICATES = (
    SKOS.broadMatch,
    SKOS.narrowMatch,
    SKOS.relatedMatch,
    SKOS.closeMatch,
    SKOS.exactMatch,
)
SEMANTIC_PREDICATES = (
    SKOS.broader,
    SKOS.narrower,
    SKOS.related,
    SKOS.broaderTransitive,
    SKOS.narrowerTransitive,
)


def convention_lint(input: Graph) -> list[Finding]:
    """Flag mapping links inside one scheme and semantic links across schemes.

    Only concepts with at least one ``skos:inScheme`` declaration are judged.
    A concept in several schemes counts as sharing a scheme with anything in
    any of them.
    """
    schemes: dict[Node, set[Node]] = {}
    for s, _, o in input.triples(None, SKOS.inScheme, None):
        schemes.setdefault(s, set()).add(o)

    out: list[Finding] = []
    for pred_set, kind in ((MAPPING_PREDICATES, LintKind.MappingWithinScheme),
                           (SEMANTIC_PREDICATES, LintKind.SemanticAcrossSchemes)):
        for pred in pred_set:
            for t in canonical_sort(input.triples(None, pred, None)):
                s_schemes = schemes.get(t[0])
                o_schemes = schemes.get(t[2])
                if not s_schemes or not o_schemes:
                    continue
                shared = s_schemes & o_schemes
                if kind is LintKind.MappingWithinScheme and not shared:
                    continue
                if kind is LintKind.SemanticAcrossSchemes and shared:
                    continue
                out.append(
                    Finding(
                        kind,
                        Severity.Info,
                        frozenset({t}),
                        None,
                        (("subject", t[0]), ("object", t[2])),
                        (),
                        (f"{t[1].value.rsplit('#', 1)[-1]} link between concepts "
                         + ("declared in the same scheme" if shared else "declared in different schemes"),),
                    )
                )
    return sorted(out, key=finding_sort_key)
