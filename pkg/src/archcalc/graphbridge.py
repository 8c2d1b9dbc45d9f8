"""Directed graphs as architectures, and a small DOT importer.

A directed graph is exactly a boxes-and-connectors architecture with a
single binary relation, and the two representations convert losslessly in
both directions.  The importer reads a deliberately small DOT subset:

    digraph <id> { <node>; <node> -> <node>; ... }

with identifiers ``[A-Za-z_][A-Za-z0-9_]*``, ``//`` line comments, and no
attributes, subgraphs, or undirected edges.  Express an undirected edge as
a pair of directed ones; symmetry is data here, not syntax.
"""

from __future__ import annotations

import re
from typing import Iterable

from .core import Architecture, Relation
from .errors import NotSingleRelationBncError, ParseError
from .tiers import is_bnc

_DOT_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Graph:
    """A finite directed graph; edge endpoints must be vertices."""

    def __init__(self, vertices: Iterable[str], edges: Iterable = ()):
        self.vertices = frozenset(vertices)
        self.edges = frozenset((str(a), str(b)) for a, b in edges)
        for a, b in self.edges:
            if a not in self.vertices or b not in self.vertices:
                raise ValueError(f"edge ({a}, {b}) has an endpoint outside "
                                 f"the vertex set")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((Graph, self.vertices, self.edges))

    def __repr__(self):
        return f"Graph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


def graph_to_bnc(g: Graph, name: str = "") -> Architecture:
    """The boxes-and-connectors architecture with the edge set as its one
    binary relation.  The graph with no vertices maps to the empty
    architecture, relation and all."""
    if not g.vertices:
        return Architecture((), (), (), name or "T0")
    return Architecture(sorted(g.vertices),
                        (Relation("edge", 2, g.edges),), (), name)


def bnc_to_graph(arch: Architecture) -> Graph:
    """Inverse direction: vertices from the universe, edges from the single
    binary relation.  Accepts a relation-free B&C architecture as the
    edgeless graph so the empty architecture round-trips."""
    if not is_bnc(arch):
        raise NotSingleRelationBncError(
            "architecture is not boxes-and-connectors (needs binary "
            "relations only and no functions)")
    if len(arch.relations) > 1:
        raise NotSingleRelationBncError(
            f"expected at most one relation, found {len(arch.relations)}")
    edges = arch.relations[0].tuples if arch.relations else frozenset()
    return Graph(arch.universe, edges)


def to_dot(g: Graph, name: str = "g") -> str:
    """Render a graph in the importer's DOT subset (inverse of
    :func:`parse_dot_subset`).  All vertex ids must be DOT identifiers."""
    if not _DOT_ID.fullmatch(name):
        name = "g"
    for v in sorted(g.vertices):
        if not _DOT_ID.fullmatch(v):
            raise ValueError(f"vertex id {v!r} is not a DOT identifier")
    lines = [f"digraph {name} {{"]
    in_edges = {v for e in g.edges for v in e}
    for v in sorted(g.vertices - in_edges):
        lines.append(f"  {v};")
    for a, b in sorted(g.edges):
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            line += 1
            col = 1
            i += 1
        elif c in " \t\r":
            i += 1
            col += 1
        elif text.startswith("//", i):
            while i < n and text[i] != "\n":
                i += 1
        elif c == "{":
            tokens.append(_Token("lbrace", c, line, col))
            i += 1
            col += 1
        elif c == "}":
            tokens.append(_Token("rbrace", c, line, col))
            i += 1
            col += 1
        elif c == ";":
            tokens.append(_Token("semi", c, line, col))
            i += 1
            col += 1
        elif text.startswith("->", i):
            tokens.append(_Token("arrow", "->", line, col))
            i += 2
            col += 2
        else:
            m = _DOT_ID.match(text, i)
            if not m:
                raise ParseError(f"unexpected character {c!r}", line, col,
                                 expected=("identifier", "{", "}", ";", "->"),
                                 found=c)
            tokens.append(_Token("ident", m.group(), line, col))
            col += len(m.group())
            i = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _DotParser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self, kind: str, expected: tuple[str, ...]) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {' or '.join(expected)}, found "
                f"{tok.value!r if tok.value else 'end of input'}",
                tok.line, tok.column, expected=expected, found=tok.value)
        self.pos += 1
        return tok

    def parse(self) -> Graph:
        head = self.take("ident", ("'digraph'",))
        if head.value != "digraph":
            raise ParseError(f"expected 'digraph', found {head.value!r}",
                             head.line, head.column,
                             expected=("'digraph'",), found=head.value)
        self.take("ident", ("graph name",))
        self.take("lbrace", ("'{'",))

        vertices: set[str] = set()
        edges: set[tuple[str, str]] = set()
        while self.peek().kind != "rbrace":
            src = self.take("ident", ("identifier", "'}'"))
            vertices.add(src.value)
            if self.peek().kind == "arrow":
                self.take("arrow", ("'->'",))
                dst = self.take("ident", ("identifier",))
                vertices.add(dst.value)
                edges.add((src.value, dst.value))
            if self.peek().kind != "rbrace":
                self.take("semi", ("';'", "'}'"))
        self.take("rbrace", ("'}'",))
        self.take("eof", ("end of input",))
        return Graph(vertices, edges)


def parse_dot_subset(text: str) -> Graph:
    """Parse the DOT subset described in the module docstring.

    Raises :class:`ParseError` with a 1-based line/column position and the
    token set that would have been accepted.
    """
    return _DotParser(_tokenize(text)).parse()
