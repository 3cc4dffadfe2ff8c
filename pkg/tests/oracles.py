"""Independent reference implementations used by the tests.

Nothing here imports the closure engine or the detectors: the closure is a
naive repeat-until-no-change loop written straight from the seven rules, and
each detector is a nested loop over predicate buckets with the guards spelled
out inline.
"""

from __future__ import annotations

import random
from itertools import permutations

from skosval.rdf import SKOS, BlankNode, Graph, Iri, Literal, Triple

BM, NM = SKOS.broadMatch, SKOS.narrowMatch
EM, RM, CM = SKOS.exactMatch, SKOS.relatedMatch, SKOS.closeMatch
BR, NR = SKOS.broader, SKOS.narrower
BT, NT = SKOS.broaderTransitive, SKOS.narrowerTransitive
REL = SKOS.related

SKOS_PREDICATES = (BR, NR, REL, BT, NT, BM, NM, RM, EM, CM)


def naive_closure(triples) -> set:
    facts = {tuple(t) for t in triples}
    while True:
        new = set()
        for s, p, o in facts:
            if isinstance(o, Literal):
                continue
            if p is EM:
                new.add((o, EM, s))
            elif p is NM:
                new.add((o, BM, s))
            elif p is RM:
                new.add((o, RM, s))
            elif p is NR:
                new.add((o, BR, s))
            elif p is REL:
                new.add((o, REL, s))
            if p is BR:
                new.add((s, BT, o))
        bts = [t for t in facts if t[1] is BT]
        for x, _, y in bts:
            for y2, _, z in bts:
                if y is y2:
                    new.add((x, BT, z))
        if new <= facts:
            return facts
        facts |= new


def _bucket(closure, p):
    return [t for t in closure if t[1] is p and not isinstance(t[2], Literal)]


def brute_force_findings(closure) -> set:
    """(class name, frozenset of matched triples) for every rule instance."""
    closure = {tuple(t) for t in closure}
    bm, em, rm, bt, rel = (_bucket(closure, p) for p in (BM, EM, RM, BT, REL))
    out = set()

    def add(name, *ts):
        out.add((name, frozenset(Triple(*t) for t in ts)))

    # pattern 1
    for t1 in bm:
        for t2 in bm:
            if t2[0] is not t1[2]:
                continue
            a1, b1, a2 = t1[0], t1[2], t2[2]
            if not any(t[0] is a1 and t[2] is a2 for t in bt):
                add("Pattern1VocabularyHijacking", t1, t2)
            for t3 in rel:
                if t3[0] is a1 and t3[2] is a2:
                    add("Pattern1NonConsistentWithSKOSRules", t1, t2, t3)
            for t3 in bt:
                if t3[0] is a2 and t3[2] is a1:
                    add("Pattern1NonConsistentWithSKOSExtraRules", t1, t2, t3)
    # pattern 2
    for t1 in em:
        for t2 in em:
            if t2[0] is not t1[2]:
                continue
            a1, a2 = t1[0], t2[2]
            if a1 is a2:
                continue
            add("Pattern2VocabularyHijacking", t1, t2)
            for t3 in bt:
                if t3[0] is a2 and t3[2] is a1:
                    add("Pattern2NonConsistentWithSKOSExtraRules", t1, t2, t3)
    # patterns 3 and 6 share the leading (A2 bT A1)(A1 bM B1)
    for t0 in bt:
        for t1 in bm:
            if t1[0] is not t0[2]:
                continue
            a2, a1, b1 = t0[0], t0[2], t1[2]
            for t2 in rm:
                if t2[0] is b1 and t2[2] is a2:
                    add("Pattern3NonConsistentWithSKOSRules", t0, t1, t2)
            for t2 in em:
                if t2[0] is b1 and t2[2] is a2:
                    add("Pattern3NonConsistentWithSKOSExtraRules", t0, t1, t2)
            for t2 in bt:
                if t2[0] is not b1:
                    continue
                b2 = t2[2]
                for t3 in rm:
                    if t3[0] is b2 and t3[2] is a2:
                        add("Pattern6NonConsistentWithSKOSRules", t0, t1, t2, t3)
                for t3 in em:
                    if t3[0] is b2 and t3[2] is a2:
                        add("Pattern6NonConsistentWithSKOSExtraRules", t0, t1, t2, t3)
    # pattern 4
    for t0 in bt:
        for t1 in bm:
            if t1[2] is not t0[0]:
                continue
            a1, a2, b1 = t0[0], t0[2], t1[0]
            for t2 in rm:
                if t2[0] is a2 and t2[2] is b1:
                    add("Pattern4NonConsistentWithSKOSRules", t0, t1, t2)
            for t2 in em:
                if t2[0] is a2 and t2[2] is b1:
                    add("Pattern4NonConsistentWithSKOSExtraRules", t0, t1, t2)
    # pattern 5
    for t1 in bm:
        for t2 in bt:
            if t2[0] is not t1[2]:
                continue
            for t3 in bm:
                if t3[0] is not t2[2]:
                    continue
                a1, a2 = t1[0], t3[2]
                if a1 is not a2 and not any(t[0] is a1 and t[2] is a2 for t in bt):
                    add("Pattern5VocabularyHijacking", t1, t2, t3)
                for t4 in rel:
                    if t4[0] is a2 and t4[2] is a1:
                        add("Pattern5NonConsistentWithSKOSRules", t1, t2, t3, t4)
                for t4 in bt:
                    if t4[0] is a2 and t4[2] is a1:
                        add("Pattern5NonConsistentWithSKOSExtraRules", t1, t2, t3, t4)
    # pattern 7
    for t0 in bt:
        for t1 in em:
            if t1[0] is not t0[2]:
                continue
            for t2 in bt:
                if t2[0] is not t1[2]:
                    continue
                for t3 in em:
                    if t3[0] is t2[2] and t3[2] is t0[0]:
                        add("Pattern7CounterIntuitive", t0, t1, t2, t3)
    return out


def random_graph(rng: random.Random, max_nodes: int = 15, max_triples: int = 60) -> Graph:
    n_nodes = rng.randint(1, max_nodes)
    nodes = [Iri(f"urn:n:{i}") for i in range(n_nodes)]
    g = Graph()
    for _ in range(rng.randint(0, max_triples)):
        g.insert(Triple(rng.choice(nodes), rng.choice(SKOS_PREDICATES), rng.choice(nodes)))
    return g.freeze()


def random_corpus(n: int, seed: int, **kw) -> list[Graph]:
    rng = random.Random(seed)
    return [random_graph(rng, **kw) for _ in range(n)]


def isomorphic(g1, g2) -> bool:
    """Graph equality up to a bijective renaming of blank nodes (exhaustive search)."""
    t1, t2 = {tuple(t) for t in g1}, {tuple(t) for t in g2}
    if len(t1) != len(t2):
        return False
    b1 = sorted({n for t in t1 for n in (t[0], t[2]) if isinstance(n, BlankNode)}, key=repr)
    b2 = sorted({n for t in t2 for n in (t[0], t[2]) if isinstance(n, BlankNode)}, key=repr)
    if len(b1) != len(b2):
        return False
    if len(b1) > 8:
        raise ValueError("too many blank nodes for exhaustive isomorphism search")
    for perm in permutations(b2):
        m = dict(zip(b1, perm))
        mapped = {(m.get(s, s), p, m.get(o, o)) for s, p, o in t1}
        if mapped == t2:
            return True
    return False
