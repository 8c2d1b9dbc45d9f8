"""Finite architectures as exact relational structures.

An :class:`Architecture` is a universe of opaque element ids together with
a set of finite relations over it and a set of finite partial function
tables into it.  All values are immutable after construction and compare
*extensionally*: relation and function names are metadata for diagnostics
and serialization, and never participate in equality, hashing, or any
structural check.

Invariant checking is data, not control flow: :func:`validate` returns a
list of :class:`Violation` records instead of raising, so malformed inputs
can be represented, reported, and (where a repair exists) rewritten.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

ElementId = str

# Violation codes reported by validate().
DANGLING_ELEMENT = "DANGLING_ELEMENT"
ARITY_MISMATCH = "ARITY_MISMATCH"
DUPLICATE_RELATION_EXTENSION = "DUPLICATE_RELATION_EXTENSION"
PARTIAL_MAPPING = "PARTIAL_MAPPING"
DUPLICATE_ELEMENT = "DUPLICATE_ELEMENT"


@dataclass(frozen=True)
class Violation:
    """One invariant violation, with a machine-readable code and the
    offending element or tuple when there is one."""

    code: str
    message: str
    subject: tuple = ()

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def _element_id(value) -> str:
    if not isinstance(value, str) or not value or any(c.isspace() for c in value):
        raise ValueError(
            f"element id must be a nonempty string without whitespace, got {value!r}")
    return value


def _as_tuple(t) -> tuple[str, ...]:
    return tuple(_element_id(e) for e in t)


class Relation:
    """A finite k-ary relation: a set of k-tuples of element ids.

    The name is carried for readability only.  Two relations are equal iff
    they have the same arity and the same tuple set; an architecture may
    therefore not contain two relations with identical extensions (see
    :func:`validate` and :func:`disambiguate_relations`).
    """

    def __init__(self, name: str, arity: int, tuples: Iterable = ()):
        if not isinstance(arity, int) or arity < 1:
            raise ValueError(f"relation arity must be a positive integer, got {arity!r}")
        self.name = str(name)
        self.arity = arity
        self.tuples: frozenset[tuple[str, ...]] = frozenset(_as_tuple(t) for t in tuples)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.arity == other.arity and self.tuples == other.tuples

    def __hash__(self):
        return hash((Relation, self.arity, self.tuples))

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)

    def __repr__(self):
        return f"Relation({self.name!r}, arity={self.arity}, tuples={len(self.tuples)})"

    def extension(self) -> tuple[int, frozenset]:
        """The identity of this relation: arity plus tuple set."""
        return (self.arity, self.tuples)


class FunctionTable:
    """A finite partial m-ary function over a universe, given by an explicit
    domain and a mapping from domain tuples to output elements.

    The domain is stored separately from the mapping so that a table whose
    declared domain and actual mapping disagree is representable; validate()
    reports such tables as PARTIAL_MAPPING.  When ``domain`` is omitted it
    defaults to the mapping's keys (a total table over its own mapping).
    """

    def __init__(self, name: str, arity: int, mapping: Mapping, domain: Iterable | None = None):
        if not isinstance(arity, int) or arity < 1:
            raise ValueError(f"function arity must be a positive integer, got {arity!r}")
        self.name = str(name)
        self.arity = arity
        self.mapping: dict[tuple[str, ...], str] = {
            _as_tuple(args): _element_id(out) for args, out in dict(mapping).items()
        }
        if domain is None:
            self.domain: frozenset[tuple[str, ...]] = frozenset(self.mapping)
        else:
            self.domain = frozenset(_as_tuple(t) for t in domain)

    def apply(self, *args: str) -> str:
        """Value at the given argument tuple; KeyError outside the domain."""
        return self.mapping[tuple(args)]

    def __eq__(self, other):
        if not isinstance(other, FunctionTable):
            return NotImplemented
        return (self.arity == other.arity and self.domain == other.domain
                and self.mapping == other.mapping)

    def __hash__(self):
        return hash((FunctionTable, self.arity, self.domain,
                     frozenset(self.mapping.items())))

    def __len__(self) -> int:
        return len(self.domain)

    def __repr__(self):
        return f"FunctionTable({self.name!r}, arity={self.arity}, domain={len(self.domain)})"

    def extension(self):
        return (self.arity, self.domain, frozenset(self.mapping.items()))


class Architecture:
    """An architecture: universe, relations, and function tables.

    ``universe`` is a frozenset of element ids.  The raw constructor
    sequence is retained so :func:`validate` can report duplicate element
    declarations.  Relations and functions keep their construction order
    for presentation, but equality treats them as sets.
    """

    def __init__(self, universe: Iterable = (), relations: Iterable[Relation] = (),
                 functions: Iterable[FunctionTable] = (), name: str = ""):
        self.declared_elements: tuple[str, ...] = _as_tuple(universe)
        self.universe: frozenset[str] = frozenset(self.declared_elements)
        self.relations: tuple[Relation, ...] = tuple(relations)
        self.functions: tuple[FunctionTable, ...] = tuple(functions)
        self.name = str(name)
        for r in self.relations:
            if not isinstance(r, Relation):
                raise TypeError(f"expected Relation, got {r!r}")
        for f in self.functions:
            if not isinstance(f, FunctionTable):
                raise TypeError(f"expected FunctionTable, got {f!r}")

    def __eq__(self, other):
        if not isinstance(other, Architecture):
            return NotImplemented
        return (self.universe == other.universe
                and frozenset(self.relations) == frozenset(other.relations)
                and frozenset(self.functions) == frozenset(other.functions))

    def __hash__(self):
        return hash((Architecture, self.universe,
                     frozenset(self.relations), frozenset(self.functions)))

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return (f"Architecture({label.strip()} |A|={len(self.universe)}, "
                f"|R|={len(self.relations)}, |F|={len(self.functions)})")

    def with_name(self, name: str) -> "Architecture":
        return Architecture(self.declared_elements, self.relations, self.functions, name)


def validate(arch: Architecture) -> list[Violation]:
    """Check every structural invariant of an architecture.

    Returns one :class:`Violation` per broken invariant; an empty list
    means the architecture is well formed.  Codes: DUPLICATE_ELEMENT,
    DANGLING_ELEMENT, ARITY_MISMATCH, PARTIAL_MAPPING,
    DUPLICATE_RELATION_EXTENSION.
    """
    out: list[Violation] = []

    seen: set[str] = set()
    for e in arch.declared_elements:
        if e in seen:
            out.append(Violation(DUPLICATE_ELEMENT,
                                 f"element '{e}' declared more than once", (e,)))
        seen.add(e)

    for rel in arch.relations:
        for t in sorted(rel.tuples):
            if len(t) != rel.arity:
                out.append(Violation(
                    ARITY_MISMATCH,
                    f"relation '{rel.name}' has arity {rel.arity} but contains "
                    f"a tuple of length {len(t)}: {t}", t))
            for e in t:
                if e not in arch.universe:
                    out.append(Violation(
                        DANGLING_ELEMENT,
                        f"element '{e}' in tuple {t} of relation '{rel.name}' "
                        f"is not in the universe", (e,)))

    for fn in arch.functions:
        for t in sorted(fn.domain):
            if len(t) != fn.arity:
                out.append(Violation(
                    ARITY_MISMATCH,
                    f"function '{fn.name}' has arity {fn.arity} but its domain "
                    f"contains a tuple of length {len(t)}: {t}", t))
            for e in t:
                if e not in arch.universe:
                    out.append(Violation(
                        DANGLING_ELEMENT,
                        f"element '{e}' in domain tuple {t} of function "
                        f"'{fn.name}' is not in the universe", (e,)))
            if t not in fn.mapping:
                out.append(Violation(
                    PARTIAL_MAPPING,
                    f"function '{fn.name}' declares {t} in its domain but "
                    f"maps no value to it", t))
        for t, value in sorted(fn.mapping.items()):
            if t not in fn.domain:
                out.append(Violation(
                    PARTIAL_MAPPING,
                    f"function '{fn.name}' maps {t} outside its declared domain", t))
            if value not in arch.universe:
                out.append(Violation(
                    DANGLING_ELEMENT,
                    f"output '{value}' of function '{fn.name}' at {t} "
                    f"is not in the universe", (value,)))

    by_extension: dict[tuple, Relation] = {}
    for rel in arch.relations:
        first = by_extension.get(rel.extension())
        if first is not None:
            out.append(Violation(
                DUPLICATE_RELATION_EXTENSION,
                f"relations '{first.name}' and '{rel.name}' have the same "
                f"extension (arity {rel.arity}, {len(rel.tuples)} tuples)",
                (first.name, rel.name)))
        else:
            by_extension[rel.extension()] = rel
    return out


def is_valid(arch: Architecture) -> bool:
    return not validate(arch)


def disambiguate_relations(arch: Architecture) -> Architecture:
    """Make all relation extensions pairwise distinct.

    For each relation whose extension duplicates an earlier one, a fresh
    element is added to the universe and prepended to every tuple of that
    relation, raising its arity by one.  Duplicate *empty* relations carry
    no tuples to tag, so their arity is bumped to the next unused empty
    arity instead.  Architectures without duplicate extensions are returned
    unchanged; the rewrite is idempotent.
    """
    extensions: set[tuple] = set()
    duplicates = []
    for rel in arch.relations:
        if rel.extension() in extensions:
            duplicates.append(rel)
        extensions.add(rel.extension())
    if not duplicates:
        return arch

    universe = list(arch.declared_elements)
    taken = set(universe)
    counter = 1

    def fresh(base: str) -> str:
        nonlocal counter
        while f"{base}·n{counter}" in taken:
            counter += 1
        name = f"{base}·n{counter}"
        counter += 1
        taken.add(name)
        return name

    new_relations: list[Relation] = []
    seen: set[tuple] = set()
    for rel in arch.relations:
        if rel.extension() in seen:
            if rel.tuples:
                base = re.sub(r"[^A-Za-z0-9_.·-]", "", rel.name) or "rel"
                tag = fresh(base)
                universe.append(tag)
                rel = Relation(rel.name, rel.arity + 1,
                               {(tag,) + t for t in rel.tuples})
            else:
                arity = rel.arity + 1
                while (arity, frozenset()) in seen | extensions:
                    arity += 1
                rel = Relation(rel.name, arity)
        seen.add(rel.extension())
        new_relations.append(rel)
    return Architecture(universe, new_relations, arch.functions, arch.name)


def empty_architecture() -> Architecture:
    """The architecture with an empty universe and no structure."""
    return Architecture((), (), (), name="T0")


def trivial_architecture() -> Architecture:
    """One element ``a``, its self-loop relation, and the identity table."""
    return Architecture(
        ("a",),
        (Relation("loop", 2, {("a", "a")}),),
        (FunctionTable("id", 1, {("a",): "a"}),),
        name="T1",
    )
