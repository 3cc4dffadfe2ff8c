"""In-memory RDF model: interned nodes, validated triples and indexed graphs.

Nodes are interned on construction, so two equal nodes are the same object
and hashing/equality run on object identity.  Everything downstream (closure,
detectors) relies on that for speed.
"""

from __future__ import annotations

import re
import weakref
from collections import defaultdict
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "Iri",
    "BlankNode",
    "Literal",
    "Node",
    "Triple",
    "Graph",
    "MalformedTripleError",
    "FrozenGraphError",
    "canonical_sort",
    "node_key",
    "triple_key",
    "is_absolute_iri",
    "Namespace",
    "SKOS",
    "RDF",
    "RDFS",
    "XSD",
    "VALIDATION",
    "REPORT",
]

_ABSOLUTE_IRI = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


def is_absolute_iri(value: str) -> bool:
    return bool(_ABSOLUTE_IRI.match(value))


class MalformedTripleError(ValueError):
    """Raised when a triple violates the RDF positional constraints."""


class FrozenGraphError(RuntimeError):
    """Raised on mutation of a frozen graph."""


class Iri:
    __slots__ = ("value", "__weakref__")
    _cache: "weakref.WeakValueDictionary[str, Iri]" = weakref.WeakValueDictionary()

    def __new__(cls, value: str) -> "Iri":
        node = cls._cache.get(value)
        if node is not None:
            return node
        if not isinstance(value, str) or not is_absolute_iri(value):
            raise ValueError(f"not an absolute IRI: {value!r}")
        node = object.__new__(cls)
        object.__setattr__(node, "value", value)
        cls._cache[value] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError("Iri is immutable")

    def __reduce__(self):
        return (Iri, (self.value,))

    def __repr__(self) -> str:
        return f"Iri({self.value!r})"

    def __str__(self) -> str:
        return self.value


class BlankNode:
    """A blank node.  ``scope`` keeps labels from different documents apart."""

    __slots__ = ("label", "scope", "__weakref__")
    _cache: "weakref.WeakValueDictionary[tuple[str, str], BlankNode]" = weakref.WeakValueDictionary()

    def __new__(cls, label: str, scope: str = "") -> "BlankNode":
        key = (label, scope)
        node = cls._cache.get(key)
        if node is not None:
            return node
        if not label:
            raise ValueError("blank node label must be non-empty")
        node = object.__new__(cls)
        object.__setattr__(node, "label", label)
        object.__setattr__(node, "scope", scope)
        cls._cache[key] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError("BlankNode is immutable")

    def __reduce__(self):
        return (BlankNode, (self.label, self.scope))

    def __repr__(self) -> str:
        if self.scope:
            return f"BlankNode({self.label!r}, scope={self.scope!r})"
        return f"BlankNode({self.label!r})"

    def __str__(self) -> str:
        return f"_:{self.label}"


class Literal:
    __slots__ = ("lexical", "datatype", "language", "__weakref__")
    _cache: "weakref.WeakValueDictionary[tuple, Literal]" = weakref.WeakValueDictionary()

    def __new__(
        cls,
        lexical: str,
        datatype: Optional[Iri] = None,
        language: Optional[str] = None,
    ) -> "Literal":
        if language is not None:
            language = language.lower()
            if datatype is not None:
                raise ValueError("a literal cannot carry both a datatype and a language tag")
        key = (lexical, datatype, language)
        node = cls._cache.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        object.__setattr__(node, "lexical", lexical)
        object.__setattr__(node, "datatype", datatype)
        object.__setattr__(node, "language", language)
        cls._cache[key] = node
        return node

    def __setattr__(self, name, value):
        raise AttributeError("Literal is immutable")

    def __reduce__(self):
        return (Literal, (self.lexical, self.datatype, self.language))

    def __repr__(self) -> str:
        extra = ""
        if self.datatype is not None:
            extra = f", datatype={self.datatype!r}"
        elif self.language is not None:
            extra = f", language={self.language!r}"
        return f"Literal({self.lexical!r}{extra})"

    def __str__(self) -> str:
        return self.lexical


Node = Union[Iri, BlankNode, Literal]


def node_key(node: Node) -> tuple:
    """Sort key giving the canonical node order: IRIs, then blank nodes, then literals."""
    if type(node) is Iri:
        return (0, node.value)
    if type(node) is BlankNode:
        return (1, node.scope, node.label)
    dt = node.datatype.value if node.datatype is not None else ""
    return (2, node.lexical, dt, node.language or "")


class Triple(tuple):
    """An RDF statement.  Construction validates positional constraints."""

    __slots__ = ()

    def __new__(cls, s: Node, p: Node, o: Node) -> "Triple":
        if type(s) not in (Iri, BlankNode):
            raise MalformedTripleError(f"subject must be an IRI or blank node, got {s!r}")
        if type(p) is not Iri:
            raise MalformedTripleError(f"predicate must be an IRI, got {p!r}")
        if type(o) not in (Iri, BlankNode, Literal):
            raise MalformedTripleError(f"object must be an RDF node, got {o!r}")
        return tuple.__new__(cls, (s, p, o))

    @property
    def s(self) -> Node:
        return self[0]

    @property
    def p(self) -> Iri:
        return self[1]

    @property
    def o(self) -> Node:
        return self[2]

    def __getnewargs__(self):
        return tuple(self)

    def __repr__(self) -> str:
        return f"Triple({self[0]!r}, {self[1]!r}, {self[2]!r})"


def triple_key(t: Triple) -> tuple:
    return (node_key(t[0]), node_key(t[1]), node_key(t[2]))


def canonical_sort(triples: Iterable[Triple]) -> list[Triple]:
    """Return ``triples`` in canonical (subject, predicate, object) order."""
    return sorted(triples, key=triple_key)


class Graph:
    """A deduplicated triple set with s, p, o, (s,p) and (p,o) indexes.

    Graphs are mutable until :meth:`freeze` is called; after that any
    insertion raises :class:`FrozenGraphError`.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: set[Triple] = set()
        self._by_s: dict[Node, set[Triple]] = defaultdict(set)
        self._by_p: dict[Iri, set[Triple]] = defaultdict(set)
        self._by_o: dict[Node, set[Triple]] = defaultdict(set)
        self._by_sp: dict[tuple, set[Triple]] = defaultdict(set)
        self._by_po: dict[tuple, set[Triple]] = defaultdict(set)
        self._frozen = False
        for t in triples:
            self.insert(t)

    def insert(self, t: Triple) -> bool:
        if self._frozen:
            raise FrozenGraphError("graph is frozen")
        if not isinstance(t, Triple):
            t = Triple(*t)
        if t in self._triples:
            return False
        s, p, o = t
        self._triples.add(t)
        self._by_s[s].add(t)
        self._by_p[p].add(t)
        self._by_o[o].add(t)
        self._by_sp[s, p].add(t)
        self._by_po[p, o].add(t)
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(self.insert(t) for t in triples)

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def copy(self) -> "Graph":
        return Graph(self._triples)

    def triples(
        self,
        s: Optional[Node] = None,
        p: Optional[Node] = None,
        o: Optional[Node] = None,
    ) -> Iterator[Triple]:
        """Iterate matching triples in no particular order (fast path)."""
        if s is not None:
            if p is not None:
                if o is not None:
                    t = (s, p, o)
                    if t in self._triples:
                        yield Triple(s, p, o)
                    return
                candidates = self._by_sp.get((s, p), ())
            elif o is not None:
                candidates = (t for t in self._by_s.get(s, ()) if t[2] is o)
            else:
                candidates = self._by_s.get(s, ())
        elif p is not None:
            candidates = self._by_po.get((p, o), ()) if o is not None else self._by_p.get(p, ())
        elif o is not None:
            candidates = self._by_o.get(o, ())
        else:
            candidates = self._triples
        yield from candidates

    def match(
        self,
        s: Optional[Node] = None,
        p: Optional[Node] = None,
        o: Optional[Node] = None,
    ) -> list[Triple]:
        """Triples agreeing with every bound position, in canonical order."""
        return canonical_sort(self.triples(s, p, o))

    def objects(self, s: Node, p: Iri) -> Iterator[Node]:
        for t in self._by_sp.get((s, p), ()):
            yield t[2]

    def subjects(self, p: Iri, o: Node) -> Iterator[Node]:
        for t in self._by_po.get((p, o), ()):
            yield t[0]

    def has(self, s: Node, p: Node, o: Node) -> bool:
        return (s, p, o) in self._triples

    def nodes(self) -> set[Node]:
        out: set[Node] = set()
        for s, _, o in self._triples:
            out.add(s)
            out.add(o)
        return out

    def __contains__(self, t) -> bool:
        return tuple(t) in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __eq__(self, other) -> bool:
        if isinstance(other, Graph):
            return self._triples == other._triples
        return NotImplemented

    __hash__ = None  # type: ignore[assignment]

    def __or__(self, other: "Graph") -> "Graph":
        g = Graph(self._triples)
        g.update(other)
        return g

    def __repr__(self) -> str:
        state = "frozen" if self._frozen else "mutable"
        return f"<Graph {len(self)} triples, {state}>"


class Namespace:
    """Attribute access builds IRIs: ``SKOS.broader`` -> ``Iri(ns + "broader")``."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, local: str) -> Iri:
        if local.startswith("__"):
            raise AttributeError(local)
        return Iri(self.base + local)

    def __getitem__(self, local: str) -> Iri:
        return Iri(self.base + local)

    def __contains__(self, node) -> bool:
        return type(node) is Iri and node.value.startswith(self.base)

    def __repr__(self) -> str:
        return f"Namespace({self.base!r})"


SKOS = Namespace("http://www.w3.org/2004/02/skos/core#")
RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
VALIDATION = Namespace("http://eulersharp.sourceforge.net/2003/03swap/skos-mapping-validation-rules#")
REPORT = Namespace("urn:skosval:report#")
