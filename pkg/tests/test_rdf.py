import pickle
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skosval.rdf import (
    SKOS,
    BlankNode,
    FrozenGraphError,
    Graph,
    Iri,
    Literal,
    MalformedTripleError,
    Triple,
    canonical_sort,
)

A1, A2, B1 = Iri("urn:x:A1"), Iri("urn:x:A2"), Iri("urn:x:B1")
P = Iri("urn:x:p")


def test_iris_are_interned():
    assert Iri("urn:x:A1") is A1
    assert pickle.loads(pickle.dumps(A1)) is A1
    assert Literal("x", language="EN") is Literal("x", language="en")


def test_relative_iri_rejected():
    with pytest.raises(ValueError):
        Iri("relative/path")


def test_blank_nodes_scoped():
    assert BlankNode("b") is BlankNode("b")
    assert BlankNode("b", "d0") is not BlankNode("b", "d1")


def test_insert_into_empty():
    g = Graph()
    assert g.insert(Triple(A1, SKOS.broadMatch, B1)) is True
    assert len(g) == 1


def test_insert_twice_is_noop():
    g = Graph()
    t = Triple(A1, SKOS.broadMatch, B1)
    g.insert(t)
    assert g.insert(t) is False
    assert len(g) == 1


@pytest.mark.parametrize(
    "s,p,o",
    [
        (Literal("x"), P, B1),
        (A1, BlankNode("p"), B1),
        (A1, Literal("p"), B1),
        (A1, "urn:x:p", B1),
    ],
)
def test_malformed_triples(s, p, o):
    with pytest.raises(MalformedTripleError):
        Graph().insert(Triple(s, p, o))


def test_frozen_graph_rejects_insert():
    g = Graph([Triple(A1, P, B1)]).freeze()
    with pytest.raises(FrozenGraphError):
        g.insert(Triple(A2, P, B1))


def test_match_exact_hit():
    g = Graph([Triple(A1, SKOS.broadMatch, B1)])
    assert g.match(s=A1, p=SKOS.broadMatch) == [Triple(A1, SKOS.broadMatch, B1)]


def test_match_empty():
    assert Graph().match() == []


def test_match_by_predicate():
    g = Graph(
        [
            Triple(A1, SKOS.exactMatch, B1),
            Triple(B1, SKOS.exactMatch, A2),
            Triple(A1, SKOS.broadMatch, B1),
        ]
    )
    expected = [t for t in sorted(g, key=lambda t: tuple(n.value for n in t)) if t.p is SKOS.exactMatch]
    assert g.match(p=SKOS.exactMatch) == expected
    assert len(expected) == 2


def test_canonical_sort_simple():
    a, b, c = Iri("urn:A"), Iri("urn:B"), Iri("urn:C")
    assert canonical_sort({Triple(b, P, c), Triple(a, P, c)}) == [Triple(a, P, c), Triple(b, P, c)]
    assert canonical_sort(set()) == []


def test_canonical_sort_permutation_invariant():
    nodes = [Iri(f"urn:n{i}") for i in range(3)]
    ts = [Triple(nodes[i], P, nodes[j]) for i, j in [(2, 0), (0, 1), (1, 1), (0, 0)]]
    outputs = {tuple(canonical_sort(perm)) for perm in permutations(ts)}
    assert len(outputs) == 1


def test_canonical_sort_mixed_node_kinds():
    ts = [
        Triple(BlankNode("z"), P, A1),
        Triple(A1, P, Literal("a")),
        Triple(A1, P, BlankNode("b")),
        Triple(A1, P, A2),
    ]
    out = canonical_sort(ts)
    assert out[0] == Triple(A1, P, A2)
    assert out[1] == Triple(A1, P, BlankNode("b"))
    assert out[2] == Triple(A1, P, Literal("a"))
    assert out[3][0] == BlankNode("z")


# property tests

NODES = [Iri(f"urn:n:{i}") for i in range(5)] + [BlankNode("b0"), BlankNode("b1")]
PREDS = [Iri(f"urn:p:{i}") for i in range(3)]
OBJECTS = NODES + [Literal("v"), Literal("v", language="en"), Literal("1", Iri("urn:dt"))]

triples = st.builds(Triple, st.sampled_from(NODES), st.sampled_from(PREDS), st.sampled_from(OBJECTS))
opt = lambda xs: st.one_of(st.none(), st.sampled_from(xs))  # noqa: E731


@given(st.lists(triples, max_size=30), triples)
def test_double_insert_equals_single(ts, t):
    g1, g2 = Graph(ts), Graph(ts)
    g1.insert(t)
    g2.insert(t)
    g2.insert(t)
    assert g1 == g2


@settings(max_examples=200)
@given(st.lists(triples, max_size=30), opt(NODES), opt(PREDS), opt(OBJECTS))
def test_match_equals_filter(ts, s, p, o):
    g = Graph(ts)
    expected = [
        t for t in set(ts)
        if (s is None or t[0] is s) and (p is None or t[1] is p) and (o is None or t[2] is o)
    ]
    got = g.match(s, p, o)
    assert sorted(got, key=repr) == sorted(expected, key=repr)
    assert got == canonical_sort(got)


@given(st.lists(triples, max_size=20), st.randoms())
def test_canonical_sort_deterministic_permutation(ts, rnd):
    shuffled = list(ts)
    rnd.shuffle(shuffled)
    out = canonical_sort(ts)
    assert out == canonical_sort(shuffled)
    assert sorted(out, key=repr) == sorted(ts, key=repr)
