"""Turtle (subset) and N-Triples reading and writing.

Supported Turtle: ``@prefix``/``@base`` (and the SPARQL-style ``PREFIX``/``BASE``),
prefixed names, IRI references, ``a``, predicate lists, object lists, blank
node labels, string literals with datatype or language tag, and comments.
Collections, ``[ ... ]`` property lists and numeric/boolean shorthand are
rejected with an "unsupported construct" diagnostic.

Errors never abort a parse: the offending statement is dropped, a positioned
diagnostic is recorded, and parsing resumes after the next ``.`` at bracket
depth zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union
from urllib.parse import urljoin

from .rdf import (
    RDF,
    BlankNode,
    Graph,
    Iri,
    Literal,
    Node,
    Triple,
    canonical_sort,
    is_absolute_iri,
)

__all__ = [
    "PrefixTable",
    "ParseDiagnostic",
    "Parser",
    "parse",
    "serialize",
    "format_node",
    "DEFAULT_PREFIXES",
    "default_prefixes",
]

TURTLE = "turtle"
NTRIPLES = "ntriples"
FORMATS = (TURTLE, NTRIPLES)


class PrefixTable:
    """Prefix label to namespace map, plus an optional base IRI."""

    def __init__(self, bindings: Optional[dict[str, str]] = None, base: Optional[str] = None):
        self.bindings: dict[str, str] = dict(bindings or {})
        self.base = base

    def bind(self, prefix: str, namespace: str) -> None:
        self.bindings[prefix] = namespace

    def expand(self, prefix: str, local: str) -> str:
        if prefix not in self.bindings:
            raise KeyError(prefix)
        value = self.bindings[prefix] + local
        if not is_absolute_iri(value):
            raise ValueError(f"expansion of {prefix}:{local} is not an absolute IRI: {value}")
        return value

    def compact(self, iri: str) -> Optional[str]:
        """Shortest ``prefix:local`` form for ``iri``, or None."""
        best = None
        for prefix, ns in sorted(self.bindings.items()):
            if iri.startswith(ns) and len(iri) > len(ns):
                local = iri[len(ns):]
                if _SAFE_LOCAL.match(local):
                    cand = f"{prefix}:{local}"
                    if best is None or len(cand) < len(best):
                        best = cand
        return best

    def copy(self) -> "PrefixTable":
        return PrefixTable(self.bindings, self.base)

    def __contains__(self, prefix: str) -> bool:
        return prefix in self.bindings

    def __repr__(self) -> str:
        return f"PrefixTable({self.bindings!r}, base={self.base!r})"


DEFAULT_PREFIXES = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "skos": "http://www.w3.org/2004/02/skos/core#",
    "validation": "http://eulersharp.sourceforge.net/2003/03swap/skos-mapping-validation-rules#",
}


def default_prefixes() -> PrefixTable:
    return PrefixTable(DEFAULT_PREFIXES)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "error"
    source: Optional[str] = None

    def __str__(self) -> str:
        where = f"{self.source}:" if self.source else ""
        return f"{where}{self.line}:{self.column}: {self.severity}: {self.message}"


# --------------------------------------------------------------------------
# Lexer

@dataclass
class _Token:
    kind: str
    value: object
    line: int
    col: int
    extra: object = None


_PN_CHARS_BASE = (
    "A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF"
    "\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD"
)
_PN_CHARS_U = _PN_CHARS_BASE + "_"
_PN_CHARS = _PN_CHARS_U + "\\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
_PLX = r"%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]"

_PNAME = re.compile(
    rf"(?P<prefix>(?:[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)?):"
    rf"(?P<local>(?:[{_PN_CHARS_U}:0-9]|{_PLX})(?:(?:[{_PN_CHARS}.:]|{_PLX})*(?:[{_PN_CHARS}:]|{_PLX}))?)?"
)
_BNODE = re.compile(rf"_:(?P<label>[{_PN_CHARS_U}0-9](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?)")
_LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_NUMBER = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?")
_WORD = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*")
_SAFE_LOCAL = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?$")
_LOCAL_ESCAPE = re.compile(r"\\([_~.\-!$&'()*+,;=/?#@%])")

_STRING_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}


class _LexError(Exception):
    def __init__(self, message: str, line: int, col: int, resume: int, ends_statement: bool = False):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col
        self.resume = resume
        # a short string cut off by a newline most likely swallowed its own '.'
        self.ends_statement = ends_statement


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.line_start = 0

    def _col(self, pos: int) -> int:
        return pos - self.line_start + 1

    def _advance_to(self, pos: int) -> None:
        chunk = self.text[self.pos:pos]
        nl = chunk.count("\n")
        if nl:
            self.line += nl
            self.line_start = self.pos + chunk.rindex("\n") + 1
        self.pos = pos

    def _eof_position(self) -> tuple[int, int]:
        # points at the last character of the document so that it stays in range
        if not self.text:
            return 1, 1
        last = len(self.text) - 1
        line = self.text.count("\n", 0, last) + 1
        start = self.text.rfind("\n", 0, last) + 1
        return line, last - start + 1

    def tokens(self) -> list[_Token]:
        out: list[_Token] = []
        text = self.text
        n = len(text)
        while True:
            # whitespace and comments
            while self.pos < n:
                c = text[self.pos]
                if c in " \t\r\n":
                    self._advance_to(self.pos + 1)
                elif c == "#":
                    end = text.find("\n", self.pos)
                    self._advance_to(n if end < 0 else end)
                else:
                    break
            if self.pos >= n:
                line, col = self._eof_position()
                out.append(_Token("EOF", None, line, col))
                return out
            line, col = self.line, self._col(self.pos)
            try:
                tok, end = self._one(line, col)
            except _LexError as err:
                out.append(_Token("ERROR", err.message, err.line, err.col, err.ends_statement))
                self._advance_to(err.resume)
                continue
            out.append(tok)
            self._advance_to(end)

    def _one(self, line: int, col: int) -> tuple[_Token, int]:
        text, pos = self.text, self.pos
        c = text[pos]
        if c == "<":
            return self._iriref(line, col)
        if c in "\"'":
            return self._string(line, col)
        if c == ".":
            if pos + 1 < len(text) and text[pos + 1].isdigit():
                m = _NUMBER.match(text, pos)
                return _Token("UNSUPPORTED", "numeric literal", line, col), m.end()
            return _Token("DOT", ".", line, col), pos + 1
        if c == ";":
            return _Token("SEMI", ";", line, col), pos + 1
        if c == ",":
            return _Token("COMMA", ",", line, col), pos + 1
        if c in "([":
            kind = "collection" if c == "(" else "blank node property list"
            return _Token("UNSUPPORTED", kind, line, col, extra=c), pos + 1
        if c in ")]":
            return _Token("UNSUPPORTED", f"unbalanced '{c}'", line, col, extra=c), pos + 1
        if c == "^":
            if text.startswith("^^", pos):
                return _Token("DTYPE", "^^", line, col), pos + 2
            raise _LexError("unexpected '^'", line, col, pos + 1)
        if c == "@":
            m = _LANGTAG.match(text, pos)
            if not m:
                raise _LexError("malformed language tag or directive", line, col, pos + 1)
            word = m.group(1)
            if word == "prefix":
                return _Token("PREFIX", word, line, col), m.end()
            if word == "base":
                return _Token("BASE", word, line, col), m.end()
            return _Token("LANG", word, line, col), m.end()
        if c == "_" and text.startswith("_:", pos):
            m = _BNODE.match(text, pos)
            if not m:
                raise _LexError("malformed blank node label", line, col, pos + 2)
            return _Token("BNODE", m.group("label"), line, col), m.end()
        if c in "+-" or c.isdigit():
            m = _NUMBER.match(text, pos)
            if m:
                return _Token("UNSUPPORTED", "numeric literal", line, col), m.end()
        m = _PNAME.match(text, pos)
        if m:
            local = _LOCAL_ESCAPE.sub(r"\1", m.group("local") or "")
            return _Token("PNAME", (m.group("prefix"), local), line, col), m.end()
        m = _WORD.match(text, pos)
        if m:
            word = m.group(0)
            if word == "a":
                return _Token("A", word, line, col), m.end()
            if word in ("true", "false"):
                return _Token("UNSUPPORTED", "boolean literal", line, col), m.end()
            if word.upper() == "PREFIX":
                return _Token("SPARQL_PREFIX", word, line, col), m.end()
            if word.upper() == "BASE":
                return _Token("SPARQL_BASE", word, line, col), m.end()
            raise _LexError(f"unexpected word {word!r}", line, col, m.end())
        raise _LexError(f"unexpected character {c!r}", line, col, pos + 1)

    def _unescape_numeric(self, s: str, i: int, line: int, col: int) -> tuple[str, int]:
        kind = s[i]
        width = 4 if kind == "u" else 8
        digits = s[i + 1:i + 1 + width]
        if len(digits) != width or not all(ch in "0123456789abcdefABCDEF" for ch in digits):
            raise _LexError(f"bad \\{kind} escape", line, col, self._line_end(self.pos))
        cp = int(digits, 16)
        if cp > 0x10FFFF:
            raise _LexError(f"bad \\{kind} escape", line, col, self._line_end(self.pos))
        return chr(cp), i + 1 + width

    def _line_end(self, pos: int) -> int:
        end = self.text.find("\n", pos)
        return len(self.text) if end < 0 else end + 1

    def _iriref(self, line: int, col: int) -> tuple[_Token, int]:
        text = self.text
        i = self.pos + 1
        buf = []
        while i < len(text):
            ch = text[i]
            if ch == ">":
                return _Token("IRI", "".join(buf), line, col), i + 1
            if ch == "\\":
                if i + 1 < len(text) and text[i + 1] in "uU":
                    decoded, i = self._unescape_numeric(text, i + 1, line, col)
                    buf.append(decoded)
                    continue
                raise _LexError("invalid escape in IRI", line, col, self._line_end(i))
            if ch in ' \n\r\t<"{}|^`':
                raise _LexError("unterminated or malformed IRI reference", line, col, self._line_end(i) if ch != "\n" else i + 1)
            buf.append(ch)
            i += 1
        raise _LexError("unterminated IRI reference", line, col, len(text))

    def _string(self, line: int, col: int) -> tuple[_Token, int]:
        text = self.text
        q = text[self.pos]
        long_form = text.startswith(q * 3, self.pos)
        i = self.pos + (3 if long_form else 1)
        buf = []
        while i < len(text):
            ch = text[i]
            if long_form and text.startswith(q * 3, i):
                # a long string may end with up to two extra quote characters
                while text.startswith(q * 4, i):
                    buf.append(q)
                    i += 1
                return _Token("STRING", "".join(buf), line, col), i + 3
            if not long_form and ch == q:
                return _Token("STRING", "".join(buf), line, col), i + 1
            if not long_form and ch in "\n\r":
                raise _LexError("unterminated string literal", line, col, i + 1, ends_statement=True)
            if ch == "\\":
                if i + 1 >= len(text):
                    break
                nxt = text[i + 1]
                if nxt in _STRING_ESCAPES:
                    buf.append(_STRING_ESCAPES[nxt])
                    i += 2
                    continue
                if nxt in "uU":
                    decoded, i = self._unescape_numeric(text, i + 1, line, col)
                    buf.append(decoded)
                    continue
                raise _LexError(f"invalid escape '\\{nxt}' in string", line, col, self._line_end(i))
            buf.append(ch)
            i += 1
        raise _LexError("unterminated string literal", line, col, len(text))


# --------------------------------------------------------------------------
# Parser

class _StatementError(Exception):
    def __init__(self, token: _Token, message: str):
        super().__init__(message)
        self.token = token
        self.message = message


class Parser:
    """Single-use parser for one document.

    After :meth:`parse`, ``prefixes`` holds the document's final prefix table.
    """

    def __init__(self, format: str = TURTLE, base: Optional[str] = None, scope: str = ""):
        if format not in FORMATS:
            raise ValueError(f"unknown format {format!r}")
        self.format = format
        self.scope = scope
        self.prefixes = PrefixTable(base=base)
        self.diagnostics: list[ParseDiagnostic] = []
        self._used = False

    def parse(self, text: Union[str, bytes]) -> tuple[Graph, list[ParseDiagnostic]]:
        if self._used:
            raise RuntimeError("Parser instances are single-use")
        self._used = True
        if isinstance(text, bytes):
            text = text.decode("utf-8-sig")
        elif text.startswith("\ufeff"):
            text = text[1:]
        self._toks = _Lexer(text).tokens()
        self._i = 0
        graph = Graph()
        while self._peek().kind != "EOF":
            start = self._i
            pending: list[Triple] = []
            try:
                self._statement(pending)
            except _StatementError as err:
                self._error(err.token, err.message)
                self._recover(max(start, self._i))
                continue
            graph.update(pending)
        return graph, self.diagnostics

    # token helpers
    def _peek(self) -> _Token:
        return self._toks[self._i]

    def _next(self) -> _Token:
        tok = self._toks[self._i]
        if tok.kind != "EOF":
            self._i += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Token:
        tok = self._peek()
        if tok.kind != kind:
            raise _StatementError(tok, f"expected {what}, found {self._describe(tok)}")
        return self._next()

    @staticmethod
    def _describe(tok: _Token) -> str:
        if tok.kind == "EOF":
            return "end of input"
        if tok.kind == "PNAME":
            return f"'{tok.value[0]}:{tok.value[1]}'"
        if tok.kind == "IRI":
            return f"<{tok.value}>"
        if tok.kind == "STRING":
            return "string literal"
        return f"'{tok.value}'"

    def _error(self, tok: _Token, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(tok.line, tok.col, message))

    def _recover(self, i: int) -> None:
        depth = 0
        toks = self._toks
        while toks[i].kind != "EOF":
            tok = toks[i]
            if tok.kind == "UNSUPPORTED" and tok.extra in ("(", "["):
                depth += 1
            elif tok.kind == "UNSUPPORTED" and tok.extra in (")", "]"):
                depth = max(0, depth - 1)
            elif (tok.kind == "DOT" and depth == 0) or (tok.kind == "ERROR" and tok.extra):
                self._i = i + 1
                return
            i += 1
        self._i = i

    def _check(self, tok: _Token) -> None:
        if tok.kind == "ERROR":
            raise _StatementError(tok, str(tok.value))
        if tok.kind == "UNSUPPORTED":
            raise _StatementError(tok, f"unsupported construct: {tok.value}")

    # grammar
    def _statement(self, out: list[Triple]) -> None:
        tok = self._peek()
        self._check(tok)
        nt = self.format == NTRIPLES
        if tok.kind in ("PREFIX", "BASE", "SPARQL_PREFIX", "SPARQL_BASE"):
            if nt:
                raise _StatementError(tok, "directives are not allowed in N-Triples")
            self._directive()
            return
        subject = self._subject()
        self._predicate_object_list(subject, out)
        self._expect("DOT", "'.' at end of statement")

    def _directive(self) -> None:
        tok = self._next()
        if tok.kind in ("PREFIX", "SPARQL_PREFIX"):
            name = self._peek()
            self._check(name)
            if name.kind != "PNAME" or name.value[1]:
                raise _StatementError(name, f"expected prefix label, found {self._describe(name)}")
            self._next()
            iri = self._resolve(self._expect("IRI", "namespace IRI"))
            if tok.kind == "PREFIX":
                self._expect("DOT", "'.' after @prefix directive")
            self.prefixes.bind(name.value[0], iri)
        else:
            iri = self._resolve(self._expect("IRI", "base IRI"))
            if tok.kind == "BASE":
                self._expect("DOT", "'.' after @base directive")
            self.prefixes.base = iri

    def _resolve(self, tok: _Token) -> str:
        value = str(tok.value)
        if is_absolute_iri(value):
            return value
        if self.format == NTRIPLES:
            raise _StatementError(tok, f"relative IRI <{value}> is not allowed in N-Triples")
        if self.prefixes.base is None:
            raise _StatementError(tok, f"relative IRI <{value}> with no base IRI")
        return urljoin(self.prefixes.base, value)

    def _iri(self, tok: _Token) -> Iri:
        if tok.kind == "IRI":
            return Iri(self._resolve(tok))
        if self.format == NTRIPLES:
            raise _StatementError(tok, "prefixed names are not allowed in N-Triples")
        prefix, local = tok.value
        if prefix not in self.prefixes:
            raise _StatementError(tok, f"undefined prefix '{prefix}'")
        try:
            return Iri(self.prefixes.expand(prefix, local))
        except ValueError as err:
            raise _StatementError(tok, str(err)) from None

    def _subject(self) -> Node:
        tok = self._peek()
        self._check(tok)
        if tok.kind in ("IRI", "PNAME"):
            self._next()
            return self._iri(tok)
        if tok.kind == "BNODE":
            self._next()
            return BlankNode(tok.value, self.scope)
        if tok.kind == "STRING":
            raise _StatementError(tok, "a literal cannot be the subject of a triple")
        raise _StatementError(tok, f"expected subject, found {self._describe(tok)}")

    def _verb(self) -> Iri:
        tok = self._peek()
        self._check(tok)
        if tok.kind == "A":
            if self.format == NTRIPLES:
                raise _StatementError(tok, "'a' is not allowed in N-Triples")
            self._next()
            return RDF.type
        if tok.kind in ("IRI", "PNAME"):
            self._next()
            return self._iri(tok)
        if tok.kind == "BNODE":
            raise _StatementError(tok, "a blank node cannot be a predicate")
        if tok.kind == "STRING":
            raise _StatementError(tok, "a literal cannot be a predicate")
        raise _StatementError(tok, f"expected predicate, found {self._describe(tok)}")

    def _object(self) -> Node:
        tok = self._peek()
        self._check(tok)
        if tok.kind in ("IRI", "PNAME"):
            self._next()
            return self._iri(tok)
        if tok.kind == "BNODE":
            self._next()
            return BlankNode(tok.value, self.scope)
        if tok.kind == "STRING":
            self._next()
            nxt = self._peek()
            if nxt.kind == "LANG":
                self._next()
                return Literal(tok.value, language=nxt.value)
            if nxt.kind == "DTYPE":
                self._next()
                dt = self._peek()
                self._check(dt)
                if dt.kind not in ("IRI", "PNAME"):
                    raise _StatementError(dt, f"expected datatype IRI, found {self._describe(dt)}")
                self._next()
                return Literal(tok.value, datatype=self._iri(dt))
            return Literal(tok.value)
        raise _StatementError(tok, f"expected object, found {self._describe(tok)}")

    def _predicate_object_list(self, subject: Node, out: list[Triple]) -> None:
        nt = self.format == NTRIPLES
        while True:
            predicate = self._verb()
            while True:
                out.append(Triple(subject, predicate, self._object()))
                if self._peek().kind != "COMMA":
                    break
                if nt:
                    raise _StatementError(self._peek(), "object lists are not allowed in N-Triples")
                self._next()
            if self._peek().kind != "SEMI":
                return
            if nt:
                raise _StatementError(self._peek(), "predicate lists are not allowed in N-Triples")
            while self._peek().kind == "SEMI":
                self._next()
            if self._peek().kind in ("DOT", "EOF"):
                return


def parse(
    text: Union[str, bytes],
    format: str = TURTLE,
    base: Optional[str] = None,
    scope: str = "",
) -> tuple[Graph, list[ParseDiagnostic]]:
    """Parse a whole document into a graph plus diagnostics.

    ``scope`` namespaces blank node labels so that several documents can be
    merged without their ``_:x`` labels colliding.
    """
    return Parser(format, base=base, scope=scope).parse(text)


# --------------------------------------------------------------------------
# Serializer

def _escape_iri(value: str) -> str:
    out = []
    for ch in value:
        if ord(ch) <= 0x20 or ch in '<>"{}|^`\\':
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _escape_string(value: str) -> str:
    out = []
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def format_node(
    node: Node,
    prefixes: Optional[PrefixTable] = None,
    blank_labels: Optional[dict[BlankNode, str]] = None,
) -> str:
    """Render one node in Turtle/N-Triples term syntax."""
    if type(node) is Iri:
        if prefixes is not None:
            short = prefixes.compact(node.value)
            if short is not None:
                return short
        return f"<{_escape_iri(node.value)}>"
    if type(node) is BlankNode:
        label = blank_labels.get(node) if blank_labels else None
        return f"_:{label or node.label}"
    text = f'"{_escape_string(node.lexical)}"'
    if node.language:
        return f"{text}@{node.language}"
    if node.datatype is not None:
        return f"{text}^^{format_node(node.datatype, prefixes)}"
    return text


def _blank_labels(triples: list[Triple]) -> dict[BlankNode, str]:
    labels: dict[BlankNode, str] = {}
    for t in triples:
        for node in (t[0], t[2]):
            if type(node) is BlankNode and node not in labels:
                labels[node] = f"b{len(labels)}"
    return labels


def serialize(
    graph: Union[Graph, Iterable[Triple]],
    format: str = TURTLE,
    prefixes: Optional[PrefixTable] = None,
) -> str:
    """Render triples in canonical order.  Blank nodes are relabelled b0, b1, ..."""
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}")
    triples = canonical_sort(graph)
    labels = _blank_labels(triples)
    if format == NTRIPLES:
        return "".join(
            f"{format_node(s, None, labels)} {format_node(p)} {format_node(o, None, labels)} .\n"
            for s, p, o in triples
        )

    if prefixes is None:
        prefixes = default_prefixes()
    lines = [f"@prefix {p}: <{_escape_iri(ns)}> ." for p, ns in sorted(prefixes.bindings.items())]
    if prefixes.base:
        lines.insert(0, f"@base <{_escape_iri(prefixes.base)}> .")

    def term(n: Node) -> str:
        return format_node(n, prefixes, labels)

    i = 0
    while i < len(triples):
        subject = triples[i][0]
        j = i
        while j < len(triples) and triples[j][0] is subject:
            j += 1
        group = triples[i:j]
        i = j
        if lines:
            lines.append("")
        pred_chunks = []
        k = 0
        while k < len(group):
            pred = group[k][1]
            objs = []
            while k < len(group) and group[k][1] is pred:
                objs.append(term(group[k][2]))
                k += 1
            verb = "a" if pred is RDF.type else term(pred)
            pred_chunks.append(f"{verb} {' , '.join(objs)}")
        lines.append(f"{term(subject)} " + " ;\n    ".join(pred_chunks) + " .")
    return "\n".join(lines) + "\n"
