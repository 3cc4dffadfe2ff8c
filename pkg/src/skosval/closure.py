"""SKOS prerequisite closure with per-triple derivations.

The closure applies seven rules (symmetry of exactMatch/relatedMatch/related,
narrowMatch->broadMatch, narrower->broader, broader->broaderTransitive and
transitivity of broaderTransitive) until fixpoint, semi-naively.  It is the
scope against which every negation-as-failure guard in :mod:`skosval.detect`
is evaluated.

A second, explanation-only rule set (broadMatch read as broader, exactMatch
transitivity and substitution) is never applied to that scope.  It is only
run over a finding's matched subgraph to show how the implied relation comes
about.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .rdf import SKOS, Graph, Iri, Literal, Node, Triple, triple_key

__all__ = [
    "RuleId",
    "Rule",
    "Derivation",
    "DerivationTree",
    "ClosureGraph",
    "NotInClosureError",
    "CLOSURE_RULES",
    "EXPLANATION_RULES",
    "compute_closure",
    "explain",
    "graft",
    "holds",
]


class RuleId(enum.Enum):
    ExactMatchSym = "ExactMatchSym"
    NarrowToBroadMatch = "NarrowToBroadMatch"
    RelatedMatchSym = "RelatedMatchSym"
    NarrowerToBroader = "NarrowerToBroader"
    RelatedSym = "RelatedSym"
    BroaderToBT = "BroaderToBT"
    BTTransitive = "BTTransitive"
    # explanation-only rules
    BroadMatchToBroader_L2 = "BroadMatchToBroader_L2"
    ExactMatchTransitive_X = "ExactMatchTransitive_X"
    ExactMatchSubstLeft_X = "ExactMatchSubstLeft_X"
    ExactMatchSubstRight_X = "ExactMatchSubstRight_X"

    @property
    def explanation_only(self) -> bool:
        return self.value.endswith(("_L2", "_X"))


Atom = tuple[str, Iri, str]


@dataclass(frozen=True)
class Rule:
    """A Horn rule with one or two body atoms over variables ``x``, ``y``, ``z``."""

    id: RuleId
    body: tuple[Atom, ...]
    head: Atom

    def fire(self, premises: Sequence[Triple]) -> Optional[Triple]:
        """Apply the rule to premises given in body order; None if they don't unify."""
        env: dict[str, Node] = {}
        for (sv, pred, ov), t in zip(self.body, premises):
            if t[1] is not pred:
                return None
            for var, node in ((sv, t[0]), (ov, t[2])):
                bound = env.setdefault(var, node)
                if bound is not node:
                    return None
        hs, hp, ho = self.head
        subject = env[hs]
        if type(subject) is Literal:
            return None
        return Triple(subject, hp, env[ho])


def _r(rule_id: RuleId, body: Iterable[tuple[str, Iri, str]], head: tuple[str, Iri, str]) -> Rule:
    return Rule(rule_id, tuple(body), head)


CLOSURE_RULES: tuple[Rule, ...] = (
    _r(RuleId.ExactMatchSym, [("x", SKOS.exactMatch, "y")], ("y", SKOS.exactMatch, "x")),
    _r(RuleId.NarrowToBroadMatch, [("x", SKOS.narrowMatch, "y")], ("y", SKOS.broadMatch, "x")),
    _r(RuleId.RelatedMatchSym, [("x", SKOS.relatedMatch, "y")], ("y", SKOS.relatedMatch, "x")),
    _r(RuleId.NarrowerToBroader, [("x", SKOS.narrower, "y")], ("y", SKOS.broader, "x")),
    _r(RuleId.RelatedSym, [("x", SKOS.related, "y")], ("y", SKOS.related, "x")),
    _r(RuleId.BroaderToBT, [("x", SKOS.broader, "y")], ("x", SKOS.broaderTransitive, "y")),
    _r(
        RuleId.BTTransitive,
        [("x", SKOS.broaderTransitive, "y"), ("y", SKOS.broaderTransitive, "z")],
        ("x", SKOS.broaderTransitive, "z"),
    ),
)

EXPLANATION_RULES: tuple[Rule, ...] = CLOSURE_RULES + (
    _r(RuleId.BroadMatchToBroader_L2, [("x", SKOS.broadMatch, "y")], ("x", SKOS.broader, "y")),
    _r(
        RuleId.ExactMatchTransitive_X,
        [("x", SKOS.exactMatch, "y"), ("y", SKOS.exactMatch, "z")],
        ("x", SKOS.exactMatch, "z"),
    ),
    _r(
        RuleId.ExactMatchSubstLeft_X,
        [("x", SKOS.exactMatch, "y"), ("y", SKOS.broaderTransitive, "z")],
        ("x", SKOS.broaderTransitive, "z"),
    ),
    _r(
        RuleId.ExactMatchSubstRight_X,
        [("x", SKOS.broaderTransitive, "y"), ("y", SKOS.exactMatch, "z")],
        ("x", SKOS.broaderTransitive, "z"),
    ),
)

_RULE_ORDER = {r: i for i, r in enumerate(RuleId)}


@dataclass(frozen=True)
class Derivation:
    conclusion: Triple
    rule: Optional[RuleId]  # None means asserted
    premises: tuple[Triple, ...] = ()
    depth: int = 0

    @property
    def asserted(self) -> bool:
        return self.rule is None


@dataclass(frozen=True)
class DerivationTree:
    conclusion: Triple
    rule: Optional[RuleId]
    premises: tuple["DerivationTree", ...] = ()

    @property
    def asserted(self) -> bool:
        return self.rule is None

    def leaves(self) -> list[Triple]:
        if not self.premises:
            return [self.conclusion]
        out: list[Triple] = []
        for p in self.premises:
            out.extend(p.leaves())
        return out

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


class NotInClosureError(KeyError):
    pass


class ClosureGraph:
    """Input triples plus everything the rule set entails from them.

    ``base`` and ``entailed`` are disjoint; ``graph`` is their union and is
    what detectors match against.
    """

    def __init__(
        self,
        base: Graph,
        entailed: Graph,
        derivations: dict[Triple, Derivation],
        graph: Graph,
        rules: tuple[Rule, ...],
    ):
        self.base = base
        self.entailed = entailed
        self.derivations = derivations
        self.graph = graph
        self.rules = rules
        self._trees: dict[Triple, DerivationTree] = {}

    def holds(self, s: Node, p: Iri, o: Node) -> bool:
        return self.graph.has(s, p, o)

    def __contains__(self, t) -> bool:
        return t in self.graph

    def __len__(self) -> int:
        return len(self.graph)

    def __iter__(self):
        return iter(self.graph)

    def is_asserted(self, t: Triple) -> bool:
        return t in self.base

    def explain(self, t: Triple) -> DerivationTree:
        t = Triple(*t)
        if t not in self.graph:
            raise NotInClosureError(t)
        tree = self._trees.get(t)
        if tree is None:
            d = self.derivations[t]
            tree = DerivationTree(t, d.rule, tuple(self.explain(p) for p in d.premises))
            self._trees[t] = tree
        return tree


def _candidates(rule: Rule, t: Triple, graph: Graph) -> Iterable[tuple[Triple, ...]]:
    """Premise tuples for ``rule`` in which ``t`` fills at least one body slot."""
    body = rule.body
    if len(body) == 1:
        if t[1] is body[0][1]:
            yield (t,)
        return
    (s0, p0, o0), (s1, p1, o1) = body
    # all two-atom rules here chain through the shared variable: o0 == s1
    if t[1] is p0:
        for u in graph.triples(t[2], p1, None):
            yield (t, u)
    if t[1] is p1:
        for u in graph.triples(None, p0, t[0]):
            yield (u, t)


def compute_closure(input: Graph, rules: tuple[Rule, ...] = CLOSURE_RULES) -> ClosureGraph:
    """Least fixpoint of ``rules`` over ``input``, computed semi-naively.

    Round ``k`` only joins against triples first derived in round ``k-1``, so
    the round in which a triple appears is its minimal derivation depth.  When
    several derivations of the same depth exist the one with the smallest
    canonical premise key is kept.
    """
    for rule in rules:
        if len(rule.body) == 2 and rule.body[0][2] != rule.body[1][0]:
            raise ValueError(f"unsupported join shape in rule {rule.id}")
    base = input
    if not base.frozen:
        base = base.copy().freeze()
    graph = Graph(base)
    derivations: dict[Triple, Derivation] = {
        t: Derivation(t, None, (), 0) for t in base
    }
    entailed = Graph()
    by_pred: dict[Iri, list[Rule]] = {}
    for rule in rules:
        for atom in rule.body:
            lst = by_pred.setdefault(atom[1], [])
            if rule not in lst:
                lst.append(rule)

    delta: list[Triple] = list(base)
    depth = 0
    while delta:
        depth += 1
        best: dict[Triple, tuple[tuple, Rule, tuple[Triple, ...]]] = {}
        for t in delta:
            for rule in by_pred.get(t[1], ()):
                for premises in _candidates(rule, t, graph):
                    head = rule.fire(premises)
                    if head is None or graph.has(*head):
                        continue
                    key = (tuple(triple_key(p) for p in premises), _RULE_ORDER[rule.id])
                    cur = best.get(head)
                    if cur is None or key < cur[0]:
                        best[head] = (key, rule, premises)
        delta = []
        for head, (_, rule, premises) in best.items():
            graph.insert(head)
            entailed.insert(head)
            derivations[head] = Derivation(head, rule.id, premises, depth)
            delta.append(head)
    entailed.freeze()
    graph.freeze()
    return ClosureGraph(base, entailed, derivations, graph, rules)


def holds(c: ClosureGraph, s: Node, p: Iri, o: Node) -> bool:
    """Membership test used for negation as failure."""
    return c.holds(s, p, o)


def explain(c: ClosureGraph, t: Triple) -> DerivationTree:
    return c.explain(t)


def graft(tree: DerivationTree, leaf: Callable[[Triple], DerivationTree]) -> DerivationTree:
    """Replace each asserted leaf of ``tree`` with ``leaf(conclusion)``."""
    if tree.asserted:
        return leaf(tree.conclusion)
    return DerivationTree(tree.conclusion, tree.rule, tuple(graft(p, leaf) for p in tree.premises))
