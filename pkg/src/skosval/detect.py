"""Problematic mapping pattern detectors.

Each detector matches its antecedent subgraph against a closed graph,
applies the negation-as-failure or inequality guard of its rule and emits
findings deduplicated by (class, matched triple set).  Negation is always
evaluated against the full prerequisite closure; detectors never add
triples to it.

Literal nodes never bind a pattern variable.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Union

from .closure import (
    EXPLANATION_RULES,
    ClosureGraph,
    DerivationTree,
    compute_closure,
    graft,
)
from .rdf import SKOS, VALIDATION, Graph, Iri, Literal, Node, Triple, canonical_sort, node_key, triple_key

__all__ = [
    "PatternClass",
    "Severity",
    "Finding",
    "SEVERITY",
    "DETECTORS",
    "detect_p1",
    "detect_p2",
    "detect_p3",
    "detect_p4",
    "detect_p5",
    "detect_p6",
    "detect_p7",
    "detect_all",
    "collapse_symmetric",
    "finding_sort_key",
    "resolve_patterns",
]

BM = SKOS.broadMatch
EM = SKOS.exactMatch
RM = SKOS.relatedMatch
BT = SKOS.broaderTransitive
REL = SKOS.related

SYMMETRIC_PREDICATES = frozenset({EM, RM, REL})


class Severity(enum.Enum):
    Error = "error"
    Warning = "warning"
    Info = "info"


class PatternClass(enum.Enum):
    Pattern1VocabularyHijacking = 1
    Pattern1NonConsistentWithSKOSRules = 2
    Pattern1NonConsistentWithSKOSExtraRules = 3
    Pattern2VocabularyHijacking = 4
    Pattern2NonConsistentWithSKOSExtraRules = 5
    Pattern3NonConsistentWithSKOSRules = 6
    Pattern3NonConsistentWithSKOSExtraRules = 7
    Pattern4NonConsistentWithSKOSRules = 8
    Pattern4NonConsistentWithSKOSExtraRules = 9
    Pattern5VocabularyHijacking = 10
    Pattern5NonConsistentWithSKOSRules = 11
    Pattern5NonConsistentWithSKOSExtraRules = 12
    Pattern6NonConsistentWithSKOSRules = 13
    Pattern6NonConsistentWithSKOSExtraRules = 14
    Pattern7CounterIntuitive = 15

    @property
    def iri(self) -> Iri:
        return VALIDATION[self.name]

    @property
    def pattern_number(self) -> int:
        return int(self.name[len("Pattern")])

    @classmethod
    def for_pattern(cls, number: int) -> list["PatternClass"]:
        return [pc for pc in cls if pc.pattern_number == number]


def _severity(pc: PatternClass) -> Severity:
    if pc.name.endswith("NonConsistentWithSKOSRules"):
        return Severity.Error
    if pc is PatternClass.Pattern7CounterIntuitive:
        return Severity.Info
    return Severity.Warning


SEVERITY: dict[PatternClass, Severity] = {pc: _severity(pc) for pc in PatternClass}


@dataclass(frozen=True)
class Finding:
    """One detected pattern instance.

    ``explanation`` holds derivation trees for the matched triples that were
    entailed rather than asserted, followed by the tree for ``implied`` when
    one could be built.
    """

    pattern: enum.Enum
    severity: Severity
    matched: frozenset
    implied: Optional[Triple] = None
    bindings: tuple[tuple[str, Node], ...] = ()
    explanation: tuple[DerivationTree, ...] = field(default=(), compare=False)
    notes: tuple[str, ...] = ()

    @property
    def key(self) -> tuple:
        return (self.pattern, self.matched)

    def binding(self, name: str) -> Node:
        return dict(self.bindings)[name]

    def sorted_matched(self) -> list[Triple]:
        return canonical_sort(self.matched)


def _enum_rank(pattern: enum.Enum) -> tuple:
    if isinstance(pattern, PatternClass):
        return (0, pattern.value)
    return (1, type(pattern).__name__, pattern.name)


def finding_sort_key(f: Finding) -> tuple:
    return (_enum_rank(f.pattern), tuple(triple_key(t) for t in f.sorted_matched()))


def _bindings_key(f: Finding) -> tuple:
    return tuple((k, node_key(v)) for k, v in f.bindings)


class _Collector:
    def __init__(self, closure: ClosureGraph, explain: bool):
        self.closure = closure
        self.explain = explain
        self.found: dict[tuple, Finding] = {}

    def add(
        self,
        pattern: PatternClass,
        matched: Iterable[Triple],
        implied: Optional[Triple],
        bindings: dict[str, Node],
        notes: tuple[str, ...] = (),
    ) -> None:
        f = Finding(
            pattern,
            SEVERITY[pattern],
            frozenset(matched),
            implied,
            tuple(bindings.items()),
            (),
            notes,
        )
        prev = self.found.get(f.key)
        # same matched graph reached through different bindings: keep the smallest
        if prev is None or _bindings_key(f) < _bindings_key(prev):
            self.found[f.key] = f

    def results(self) -> list[Finding]:
        out = sorted(self.found.values(), key=finding_sort_key)
        if self.explain:
            out = [_with_explanation(self.closure, f) for f in out]
        return out


def _with_explanation(c: ClosureGraph, f: Finding) -> Finding:
    trees = [c.explain(t) for t in f.sorted_matched() if t not in c.base]
    if f.implied is not None:
        tree = implied_derivation(c, f.matched, f.implied)
        if tree is not None:
            trees.append(tree)
    return Finding(f.pattern, f.severity, f.matched, f.implied, f.bindings, tuple(trees), f.notes)


def implied_derivation(
    c: Optional[ClosureGraph], matched: Iterable[Triple], implied: Triple
) -> Optional[DerivationTree]:
    """Derive ``implied`` from ``matched`` with the explanation-only rules.

    Leaves are grafted onto the closure's own derivations when ``c`` is given,
    so the tree bottoms out in input triples.
    """
    local = compute_closure(Graph(matched), EXPLANATION_RULES)
    if implied not in local:
        return None
    tree = local.explain(implied)
    if c is None:
        return tree
    return graft(tree, c.explain)


def _edges(g: Graph, s: Optional[Node], p: Iri, o: Optional[Node]) -> Iterator[Triple]:
    for t in g.triples(s, p, o):
        if type(t[2]) is not Literal:
            yield t


def _self_note(a1: Node, a2: Node) -> tuple[str, ...]:
    if a1 is a2:
        return ("self-binding: A1 and A2 are the same concept",)
    return ()


def detect_p1(c: ClosureGraph, explain: bool = True) -> list[Finding]:
    """broaderTransitive asserted through a chain of two broadMatch mappings."""
    g = c.graph
    out = _Collector(c, explain)
    for t1 in _edges(g, None, BM, None):
        a1, b1 = t1[0], t1[2]
        for t2 in _edges(g, b1, BM, None):
            a2 = t2[2]
            b = {"A1": a1, "B1": b1, "A2": a2}
            implied = Triple(a1, BT, a2)
            if not c.holds(a1, BT, a2):
                out.add(PatternClass.Pattern1VocabularyHijacking, (t1, t2), implied, b, _self_note(a1, a2))
            if c.holds(a1, REL, a2):
                out.add(
                    PatternClass.Pattern1NonConsistentWithSKOSRules,
                    (t1, t2, Triple(a1, REL, a2)),
                    implied,
                    b,
                )
            if c.holds(a2, BT, a1):
                out.add(
                    PatternClass.Pattern1NonConsistentWithSKOSExtraRules,
                    (t1, t2, Triple(a2, BT, a1)),
                    implied,
                    b,
                )
    return out.results()


def detect_p2(c: ClosureGraph, explain: bool = True) -> list[Finding]:
    """exactMatch asserted between two concepts of one scheme via a shared exactMatch."""
    g = c.graph
    out = _Collector(c, explain)
    for t1 in _edges(g, None, EM, None):
        a1, b1 = t1[0], t1[2]
        for t2 in _edges(g, b1, EM, None):
            a2 = t2[2]
            if a1 is a2:
                continue
            b = {"A1": a1, "B1": b1, "A2": a2}
            implied = Triple(a1, EM, a2)
            out.add(PatternClass.Pattern2VocabularyHijacking, (t1, t2), implied, b)
            if c.holds(a2, BT, a1):
                out.add(
                    PatternClass.Pattern2NonConsistentWithSKOSExtraRules,
                    (t1, t2, Triple(a2, BT, a1)),
                    implied,
                    b,
                )
    return out.results()


def detect_p3(c: ClosureGraph, explain: bool = True) -> list[Finding]:
    g = c.graph
    out = _Collector(c, explain)
    for t1 in _edges(g, None, BM, None):
        a1, b1 = t1[0], t1[2]
        for t0 in _edges(g, None, BT, a1):
            a2 = t0[0]
            b = {"A2": a2, "A1": a1, "B1": b1}
            implied = Triple(a2, BT, b1)
            if c.holds(b1, RM, a2):
                out.add(PatternClass.Pattern3NonConsistentWithSKOSRules, (t0, t1, Triple(b1, RM, a2)), implied, b)
            if c.holds(b1, EM, a2):
                out.add(PatternClass.Pattern3NonConsistentWithSKOSExtraRules, (t0, t1, Triple(b1, EM, a2)), implied, b)
    return out.results()


def detect_p4(c: ClosureGraph, explain: bool = True) -> list[Finding]:
    g = c.graph
    out = _Collector(c, explain)
    for t1 in _edges(g, None, BM, None):
        b1, a1 = t1[0], t1[2]
        for t0 in _edges(g, a1, BT, None):
            a2 = t0[2]
            b = {"A1": a1, "A2": a2, "B1": b1}
            implied = Triple(b1, BT, a2)
            if c.holds(a2, RM, b1):
                out.add(PatternClass.Pattern4NonConsistentWithSKOSRules, (t0, t1, Triple(a2, RM, b1)), implied, b)
            if c.holds(a2, EM, b1):
                out.add(PatternClass.Pattern4NonConsistentWithSKOSExtraRules, (t0, t1, Triple(a2, EM, b1)), implied, b)
    return out.results()


def detect_p5(c: ClosureGraph, explain: bool = True) -> list[Finding]:
    """broaderTransitive asserted through broadMatch, a hierarchy step in the
    other scheme, and broadMatch back."""
    g = c.graph
    out = _Collector(c, explain)
    for t1 in _edges(g, None, BM, None):
        a1, b1 = t1[0], t1[2]
        for t2 in _edges(g, b1, BT, None):
            b2 = t2[2]
            for t3 in _edges(g, b2, BM, None):
                a2 = t3[2]
                b = {"A1": a1, "B1": b1, "B2": b2, "A2": a2}
                implied = Triple(a1, BT, a2)
                matched = (t1, t2, t3)
                if a1 is not a2 and not c.holds(a1, BT, a2):
                    out.add(PatternClass.Pattern5VocabularyHijacking, matched, implied, b)
                if c.holds(a2, REL, a1):
                    out.add(
                        PatternClass.Pattern5NonConsistentWithSKOSRules,
                        matched + (Triple(a2, REL, a1),),
                        implied,
                        b,
                    )
                if c.holds(a2, BT, a1):
                    out.add(
                        PatternClass.Pattern5NonConsistentWithSKOSExtraRules,
                        matched + (Triple(a2, BT, a1),),
                        implied,
                        b,
                    )
    return out.results()


def detect_p6(c: ClosureGraph, explain: bool = True) -> list[Finding]:
    g = c.graph
    out = _Collector(c, explain)
    for t1 in _edges(g, None, BM, None):
        a1, b1 = t1[0], t1[2]
        for t0 in _edges(g, None, BT, a1):
            a2 = t0[0]
            for t2 in _edges(g, b1, BT, None):
                b2 = t2[2]
                b = {"A2": a2, "A1": a1, "B1": b1, "B2": b2}
                implied = Triple(a2, BT, b2)
                if c.holds(b2, RM, a2):
                    out.add(
                        PatternClass.Pattern6NonConsistentWithSKOSRules,
                        (t0, t1, t2, Triple(b2, RM, a2)),
                        implied,
                        b,
                    )
                if c.holds(b2, EM, a2):
                    out.add(
                        PatternClass.Pattern6NonConsistentWithSKOSExtraRules,
                        (t0, t1, t2, Triple(b2, EM, a2)),
                        implied,
                        b,
                    )
    return out.results()


def detect_p7(c: ClosureGraph, explain: bool = True) -> list[Finding]:
    """Hierarchy/exactMatch cycle spanning two schemes."""
    g = c.graph
    out = _Collector(c, explain)
    for t1 in _edges(g, None, EM, None):
        a1, b1 = t1[0], t1[2]
        for t0 in _edges(g, None, BT, a1):
            a2 = t0[0]
            for t2 in _edges(g, b1, BT, None):
                b2 = t2[2]
                if c.holds(b2, EM, a2):
                    out.add(
                        PatternClass.Pattern7CounterIntuitive,
                        (t0, t1, t2, Triple(b2, EM, a2)),
                        Triple(a1, BT, a2),
                        {"A2": a2, "A1": a1, "B1": b1, "B2": b2},
                    )
    return out.results()


DETECTORS: dict[int, Callable[..., list[Finding]]] = {
    1: detect_p1,
    2: detect_p2,
    3: detect_p3,
    4: detect_p4,
    5: detect_p5,
    6: detect_p6,
    7: detect_p7,
}


def detect_all(
    c: ClosureGraph,
    enabled: Optional[Iterable[PatternClass]] = None,
    explain: bool = True,
) -> list[Finding]:
    """Run every detector with at least one enabled class.

    ``enabled=None`` means all classes.
    """
    wanted = set(PatternClass) if enabled is None else set(enabled)
    found: dict[tuple, Finding] = {}
    for number, detector in DETECTORS.items():
        if not any(pc.pattern_number == number for pc in wanted):
            continue
        for f in detector(c, explain=explain):
            if f.pattern in wanted:
                found.setdefault(f.key, f)
    return sorted(found.values(), key=finding_sort_key)


def _orient(t: Triple) -> Triple:
    if t[1] in SYMMETRIC_PREDICATES and type(t[2]) is not Literal:
        flipped = Triple(t[2], t[1], t[0])
        if triple_key(flipped) < triple_key(t):
            return flipped
    return t


def collapse_symmetric(findings: Iterable[Finding]) -> list[Finding]:
    """Merge findings whose matched sets coincide once symmetric edges
    (exactMatch, relatedMatch, related) are read undirected.  The first
    finding in canonical order survives."""
    seen: set[tuple] = set()
    out = []
    for f in sorted(findings, key=finding_sort_key):
        key = (f.pattern, frozenset(_orient(t) for t in f.matched))
        if key in seen:
            continue
        seen.add(key)
        out.append(f)
    return out


def resolve_patterns(names: Iterable[str]) -> set[PatternClass]:
    """Turn ``pattern3`` style or full class names into classes.

    Raises ValueError naming the first unknown entry.
    """
    by_name = {pc.name.lower(): pc for pc in PatternClass}
    out: set[PatternClass] = set()
    for raw in names:
        name = raw.strip()
        if not name:
            continue
        low = name.lower()
        if low in by_name:
            out.add(by_name[low])
        elif low.startswith("pattern") and low[7:].isdigit() and 1 <= int(low[7:]) <= 7:
            out.update(PatternClass.for_pattern(int(low[7:])))
        elif low == "all":
            out.update(PatternClass)
        else:
            raise ValueError(f"unknown pattern name {raw!r}")
    return out
