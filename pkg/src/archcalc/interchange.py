"""Canonical line-oriented interchange format (``.archc``).

One document per file: an architecture, an unstructured view, a viewpoint,
a tier partition, or a homomorphism witness.  The layout is human-diffable
and canonical: components are emitted in a fixed sorted order, so
serializing extensionally equal content in a different construction order
produces byte-identical text, and ``serialize(parse(s)) == s`` for any
canonical ``s``.

Architecture block::

    arch <name>
    elements: e1 e2 ...
    rel <name>/<arity>:
    (e1, e2)
    fun <name>/<arity>:
    (e1, e2) -> e3

Views and homomorphisms refer to relations and functions positionally
(``rel#0``, ``fun#1``) in the canonical order of the embedded architecture,
because names are metadata and need not be unique.  Element tokens, names,
and labels are restricted to ``[A-Za-z0-9_.·-]+``; architecture names may
be empty.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (Architecture, FunctionTable, PARTIAL_MAPPING, Relation,
                   Violation, validate)
from .errors import ArchError, ParseError, SchemaError
from .morphism import Homomorphism
from .tiers import TierPartition
from .views import UnstructuredView, Viewpoint, make_view, make_viewpoint

TOKEN_RE = re.compile(r"[A-Za-z0-9_.·-]+")

KINDS = ("architecture", "view", "viewpoint", "partition", "homomorphism")

_HEADERS = {"arch": "architecture", "view": "view", "viewpoint": "viewpoint",
            "partition": "partition", "hom": "homomorphism"}


@dataclass(frozen=True)
class Document:
    """A typed payload as read from or written to the wire format."""

    kind: str
    payload: object


def as_document(value) -> Document:
    if isinstance(value, Document):
        if value.kind not in KINDS:
            raise ValueError(f"unknown document kind {value.kind!r}")
        return value
    if isinstance(value, Architecture):
        return Document("architecture", value)
    if isinstance(value, UnstructuredView):
        return Document("view", value)
    if isinstance(value, Viewpoint):
        return Document("viewpoint", value)
    if isinstance(value, TierPartition):
        return Document("partition", value)
    if isinstance(value, Homomorphism):
        return Document("homomorphism", value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _rel_key(r: Relation):
    return (r.arity, sorted(r.tuples), r.name)


def _fun_key(f: FunctionTable):
    return (f.arity, sorted(f.domain), sorted(f.mapping.items()), f.name)


def canonical_relations(arch: Architecture) -> list[Relation]:
    """Relations in serialization order; the basis for ``rel#i`` refs."""
    return sorted(arch.relations, key=_rel_key)


def canonical_functions(arch: Architecture) -> list[FunctionTable]:
    return sorted(arch.functions, key=_fun_key)


def _check_token(token: str, what: str, allow_empty: bool = False) -> str:
    if token == "" and allow_empty:
        return token
    if not TOKEN_RE.fullmatch(token):
        raise ValueError(f"{what} {token!r} cannot be serialized: tokens are "
                         f"restricted to [A-Za-z0-9_.·-]+")
    return token


# ---------------------------------------------------------------- serialize

def _emit_arch(arch: Architecture, out: list[str]) -> None:
    name = _check_token(arch.name, "architecture name", allow_empty=True)
    out.append(f"arch {name}" if name else "arch")
    elems = sorted(arch.universe)
    for e in elems:
        _check_token(e, "element id")
    out.append("elements: " + " ".join(elems) if elems else "elements:")
    for rel in canonical_relations(arch):
        _check_token(rel.name, "relation name", allow_empty=True)
        out.append(f"rel {rel.name}/{rel.arity}:")
        for t in sorted(rel.tuples):
            out.append("(" + ", ".join(t) + ")")
    for fn in canonical_functions(arch):
        _check_token(fn.name, "function name", allow_empty=True)
        out.append(f"fun {fn.name}/{fn.arity}:")
        for t in sorted(fn.domain):
            if t in fn.mapping:
                out.append("(" + ", ".join(t) + ") -> " + fn.mapping[t])


def _emit_view_body(view: UnstructuredView, out: list[str]) -> None:
    rels = canonical_relations(view.parent)
    funs = canonical_functions(view.parent)
    elems = sorted(view.elements)
    out.append("elements: " + " ".join(elems) if elems else "elements:")
    rel_idx = sorted(rels.index(r) for r in view.relation_refs)
    out.append("rels: " + " ".join(f"rel#{i}" for i in rel_idx) if rel_idx
               else "rels:")
    fun_idx = sorted(funs.index(f) for f in view.function_refs)
    out.append("funs: " + " ".join(f"fun#{i}" for i in fun_idx) if fun_idx
               else "funs:")


def _emit_maps(h: Homomorphism, out: list[str]) -> None:
    src_rels = canonical_relations(h.source)
    tgt_rels = canonical_relations(h.target)
    src_funs = canonical_functions(h.source)
    tgt_funs = canonical_functions(h.target)
    out.append("h0:")
    for a in sorted(h.h0):
        out.append(f"{a} -> {h.h0[a]}")
    out.append("hR:")
    for i, rel in enumerate(src_rels):
        out.append(f"rel#{i} -> rel#{tgt_rels.index(h.hR[rel])}")
    out.append("hF:")
    for i, fn in enumerate(src_funs):
        out.append(f"fun#{i} -> fun#{tgt_funs.index(h.hF[fn])}")


def serialize(value) -> str:
    """Render a document (or a bare payload) as canonical text."""
    doc = as_document(value)
    out: list[str] = []
    if doc.kind == "architecture":
        _emit_arch(doc.payload, out)
    elif doc.kind == "view":
        out.append("view")
        _emit_view_body(doc.payload, out)
        out.append("parent:")
        _emit_arch(doc.payload.parent, out)
    elif doc.kind == "viewpoint":
        vp: Viewpoint = doc.payload
        out.append("viewpoint")
        for label in sorted(vp.assignment):
            _check_token(label, "viewpoint label")
            view = vp.assignment[label]
            if isinstance(view, Architecture):
                out.append(f"label {label}: arch")
                _emit_arch(view, out)
            else:
                out.append(f"label {label}: view")
                _emit_view_body(view, out)
        out.append("parent:")
        _emit_arch(vp.parent, out)
    elif doc.kind == "partition":
        out.append("partition")
        for tier in doc.payload.tiers:
            elems = sorted(tier)
            for e in elems:
                _check_token(e, "element id")
            out.append("tier: " + " ".join(elems) if elems else "tier:")
    elif doc.kind == "homomorphism":
        h: Homomorphism = doc.payload
        out.append("hom")
        out.append("source:")
        _emit_arch(h.source, out)
        out.append("target:")
        _emit_arch(h.target, out)
        _emit_maps(h, out)
    return "\n".join(out) + "\n"


# -------------------------------------------------------------------- parse

class _Cursor:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        self.pos = 0

    def _skip_blanks(self) -> None:
        while self.pos < len(self.lines) and not self.lines[self.pos].strip():
            self.pos += 1

    def peek(self) -> str | None:
        self._skip_blanks()
        if self.pos >= len(self.lines):
            return None
        return self.lines[self.pos]

    @property
    def lineno(self) -> int:
        return self.pos + 1

    def take(self) -> tuple[str, int]:
        line = self.peek()
        if line is None:
            raise ParseError("unexpected end of input", len(self.lines), 1,
                             expected=("more content",))
        no = self.lineno
        self.pos += 1
        return line, no


def _fail(line_text: str, lineno: int, message: str, expected=()) -> ParseError:
    return ParseError(message, lineno, 1, expected=tuple(expected),
                      found=line_text)


def _token_at(line: str, lineno: int, token: str, what: str) -> str:
    if not TOKEN_RE.fullmatch(token):
        column = line.find(token)
        column = column + 1 if column >= 0 else 1
        raise ParseError(f"invalid {what} {token!r}", lineno, column,
                         expected=(what,), found=token)
    return token


def _split_words(payload: str, line: str, lineno: int, what: str) -> list[str]:
    return [_token_at(line, lineno, w, what) for w in payload.split()]


def _parse_tuple_text(body: str, line: str, lineno: int) -> tuple[str, ...]:
    parts = [p.strip() for p in body.split(",")] if body.strip() else []
    return tuple(_token_at(line, lineno, p, "element id") for p in parts)


def _parse_header(line: str, lineno: int, keyword: str) -> tuple[str, int]:
    """Parse ``rel <name>/<arity>:`` or ``fun <name>/<arity>:``."""
    body = line[len(keyword) + 1:]
    if not body.endswith(":") or "/" not in body:
        raise _fail(line, lineno, f"malformed {keyword} header",
                    expected=(f"{keyword} <name>/<arity>:",))
    name, _, arity_text = body[:-1].rpartition("/")
    if name:
        _token_at(line, lineno, name, f"{keyword} name")
    try:
        arity = int(arity_text)
    except ValueError:
        raise ParseError(f"arity must be an integer, got {arity_text!r}",
                         lineno, line.rfind("/") + 2,
                         expected=("integer",), found=arity_text) from None
    return name, arity


_ARCH_STOPS = ("target:", "h0:", "parent:")


def _at_boundary(line: str | None) -> bool:
    return line is None or line in _ARCH_STOPS or line.startswith("label ")


def _parse_arch(cur: _Cursor) -> Architecture:
    line, lineno = cur.take()
    if line != "arch" and not line.startswith("arch "):
        raise _fail(line, lineno, "expected an architecture header",
                    expected=("arch <name>",))
    name = line[5:] if line.startswith("arch ") else ""
    if name:
        _token_at(line, lineno, name, "architecture name")

    line, lineno = cur.take()
    if line != "elements:" and not line.startswith("elements: "):
        raise _fail(line, lineno, "expected the elements line",
                    expected=("elements: ...",))
    elements = _split_words(line[9:], line, lineno, "element id")

    relations: list[Relation] = []
    functions: list[FunctionTable] = []
    schema: list[Violation] = []
    while True:
        line = cur.peek()
        if _at_boundary(line):
            break
        if line.startswith("rel "):
            _, lineno = cur.take()
            rel_name, arity = _parse_header(line, lineno, "rel")
            if arity < 1:
                raise SchemaError(f"{lineno}: relation arity must be positive, "
                                  f"got {arity}")
            tuples = []
            while (nxt := cur.peek()) is not None and nxt.startswith("("):
                nxt, tno = cur.take()
                if not nxt.endswith(")"):
                    raise _fail(nxt, tno, "unterminated tuple", expected=(")",))
                tuples.append(_parse_tuple_text(nxt[1:-1], nxt, tno))
            relations.append(Relation(rel_name, arity, tuples))
        elif line.startswith("fun "):
            _, lineno = cur.take()
            fn_name, arity = _parse_header(line, lineno, "fun")
            if arity < 1:
                raise SchemaError(f"{lineno}: function arity must be positive, "
                                  f"got {arity}")
            mapping: dict[tuple, str] = {}
            while (nxt := cur.peek()) is not None and nxt.startswith("("):
                nxt, tno = cur.take()
                close = nxt.find(")")
                if close < 0 or not nxt[close + 1:].startswith(" -> "):
                    raise _fail(nxt, tno, "malformed function entry",
                                expected=("(args) -> value",))
                args = _parse_tuple_text(nxt[1:close], nxt, tno)
                value = _token_at(nxt, tno, nxt[close + 5:], "element id")
                if args in mapping:
                    raise SchemaError(
                        f"{tno}: function '{fn_name}' maps {args} twice",
                        violations=(Violation(
                            PARTIAL_MAPPING,
                            f"function '{fn_name}' maps {args} twice", args),))
                mapping[args] = value
            functions.append(FunctionTable(fn_name, arity, mapping))
        else:
            lineno = cur.lineno
            raise _fail(line, lineno, f"unexpected line {line!r}",
                        expected=("rel <name>/<arity>:", "fun <name>/<arity>:"))
    return Architecture(elements, relations, functions, name)


def _validated(arch: Architecture) -> Architecture:
    problems = validate(arch)
    if problems:
        raise SchemaError("; ".join(str(v) for v in problems),
                          violations=problems)
    return arch


def _parse_refs(cur: _Cursor, keyword: str) -> list[int]:
    line, lineno = cur.take()
    if line != f"{keyword}:" and not line.startswith(f"{keyword}: "):
        raise _fail(line, lineno, f"expected the {keyword} line",
                    expected=(f"{keyword}: ...",))
    prefix = {"rels": "rel", "funs": "fun"}[keyword]
    refs = []
    for word in line[len(keyword) + 1:].split():
        m = re.fullmatch(rf"{prefix}#(\d+)", word)
        if not m:
            raise ParseError(f"invalid reference {word!r}", lineno,
                             line.find(word) + 1,
                             expected=(f"{prefix}#<index>",), found=word)
        refs.append(int(m.group(1)))
    return refs


def _resolve(items: list, refs: list[int], what: str) -> list:
    out = []
    for i in refs:
        if i >= len(items):
            raise SchemaError(f"{what} reference #{i} is out of range "
                              f"(only {len(items)} present)")
        out.append(items[i])
    return out


def _parse_elements_line(cur: _Cursor) -> list[str]:
    line, lineno = cur.take()
    if line != "elements:" and not line.startswith("elements: "):
        raise _fail(line, lineno, "expected the elements line",
                    expected=("elements: ...",))
    return _split_words(line[9:], line, lineno, "element id")


def _expect_line(cur: _Cursor, exact: str) -> None:
    line, lineno = cur.take()
    if line != exact:
        raise _fail(line, lineno, f"expected {exact!r}", expected=(exact,))


def _parse_map_section(cur: _Cursor, header: str, stops: tuple[str, ...]):
    _expect_line(cur, header)
    entries = []
    while (line := cur.peek()) is not None and line not in stops:
        line, lineno = cur.take()
        left, sep, right = line.partition(" -> ")
        if not sep:
            raise _fail(line, lineno, "expected a map entry",
                        expected=("<from> -> <to>",))
        entries.append((left, right, lineno))
    return entries


def parse(text: str, validate_model: bool = True) -> Document:
    """Parse one document.

    Raises :class:`ParseError` for syntax problems (with 1-based line and
    column) and, unless ``validate_model`` is false, :class:`SchemaError`
    for well-formed text whose content breaks model invariants.
    """
    cur = _Cursor(text)
    first = cur.peek()
    if first is None:
        raise ParseError("empty document", 1, 1, expected=tuple(_HEADERS))
    keyword = first.split(" ", 1)[0]
    kind = _HEADERS.get(keyword)
    if kind is None:
        raise ParseError(f"unknown document header {keyword!r}", cur.lineno, 1,
                         expected=tuple(_HEADERS), found=keyword)

    if kind == "architecture":
        arch = _parse_arch(cur)
        _expect_eof(cur)
        return Document(kind, _validated(arch) if validate_model else arch)

    if kind == "partition":
        _expect_line(cur, "partition")
        tiers = []
        while (line := cur.peek()) is not None:
            line, lineno = cur.take()
            if line != "tier:" and not line.startswith("tier: "):
                raise _fail(line, lineno, "expected a tier line",
                            expected=("tier: ...",))
            tiers.append(_split_words(line[5:], line, lineno, "element id"))
        return Document(kind, TierPartition(tiers))

    if kind == "view":
        _expect_line(cur, "view")
        elements = _parse_elements_line(cur)
        rel_refs = _parse_refs(cur, "rels")
        fun_refs = _parse_refs(cur, "funs")
        _expect_line(cur, "parent:")
        parent = _parse_arch(cur)
        _expect_eof(cur)
        if validate_model:
            parent = _validated(parent)
        rels = _resolve(canonical_relations(parent), rel_refs, "relation")
        funs = _resolve(canonical_functions(parent), fun_refs, "function")
        try:
            view = (make_view(parent, elements, rels, funs) if validate_model
                    else UnstructuredView(parent, elements, rels, funs))
        except ArchError as exc:
            raise SchemaError(str(exc)) from exc
        return Document(kind, view)

    if kind == "viewpoint":
        _expect_line(cur, "viewpoint")
        entries: list[tuple[str, object]] = []
        raw_views: list[tuple[str, list, list, list]] = []
        while (line := cur.peek()) is not None and line != "parent:":
            line, lineno = cur.take()
            m = re.fullmatch(r"label (\S+): (view|arch)", line)
            if not m:
                raise _fail(line, lineno, "expected a label line",
                            expected=("label <label>: view",
                                      "label <label>: arch", "parent:"))
            label = _token_at(line, lineno, m.group(1), "label")
            if m.group(2) == "arch":
                entries.append((label, _parse_arch(cur)))
            else:
                elements = _parse_elements_line(cur)
                rel_refs = _parse_refs(cur, "rels")
                fun_refs = _parse_refs(cur, "funs")
                raw_views.append((label, elements, rel_refs, fun_refs))
                entries.append((label, None))
        _expect_line(cur, "parent:")
        parent = _parse_arch(cur)
        _expect_eof(cur)
        if validate_model:
            parent = _validated(parent)
        rels = canonical_relations(parent)
        funs = canonical_functions(parent)
        raw_iter = iter(raw_views)
        assignment: dict[str, object] = {}
        for label, payload in entries:
            if payload is None:
                _, elements, rel_refs, fun_refs = next(raw_iter)
                payload = UnstructuredView(parent, elements,
                                           _resolve(rels, rel_refs, "relation"),
                                           _resolve(funs, fun_refs, "function"))
            elif validate_model:
                payload = _validated(payload)
            if label in assignment:
                raise SchemaError(f"label '{label}' appears twice")
            assignment[label] = payload
        try:
            vp = (make_viewpoint(parent, assignment) if validate_model
                  else Viewpoint(parent, assignment))
        except ArchError as exc:
            raise SchemaError(str(exc)) from exc
        return Document(kind, vp)

    # homomorphism
    _expect_line(cur, "hom")
    _expect_line(cur, "source:")
    source = _parse_arch(cur)
    _expect_line(cur, "target:")
    target = _parse_arch(cur)
    if validate_model:
        source = _validated(source)
        target = _validated(target)
    h0_entries = _parse_map_section(cur, "h0:", ("hR:",))
    hr_entries = _parse_map_section(cur, "hR:", ("hF:",))
    hf_entries = _parse_map_section(cur, "hF:", ())
    _expect_eof(cur)

    src_rels = canonical_relations(source)
    tgt_rels = canonical_relations(target)
    src_funs = canonical_functions(source)
    tgt_funs = canonical_functions(target)

    h0 = {}
    for left, right, lineno in h0_entries:
        a = _token_at(left, lineno, left, "element id")
        b = _token_at(right, lineno, right, "element id")
        if a in h0:
            raise SchemaError(f"{lineno}: element '{a}' is mapped twice")
        h0[a] = b

    def resolve_pairs(entries, items_l, items_r, prefix, what):
        out = {}
        for left, right, lineno in entries:
            pair = []
            for side, items in ((left, items_l), (right, items_r)):
                m = re.fullmatch(rf"{prefix}#(\d+)", side)
                if not m:
                    raise ParseError(f"invalid reference {side!r}", lineno, 1,
                                     expected=(f"{prefix}#<index>",), found=side)
                pair.append(_resolve(items, [int(m.group(1))], what)[0])
            out[pair[0]] = pair[1]
        return out

    hR = resolve_pairs(hr_entries, src_rels, tgt_rels, "rel", "relation")
    hF = resolve_pairs(hf_entries, src_funs, tgt_funs, "fun", "function")
    try:
        hom = Homomorphism(source, target, h0, hR, hF)
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    return Document("homomorphism", hom)


def _expect_eof(cur: _Cursor) -> None:
    line = cur.peek()
    if line is not None:
        raise _fail(line, cur.lineno, f"unexpected trailing content {line!r}",
                    expected=("end of document",))
