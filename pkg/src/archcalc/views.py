"""Views on architectures.

Two notions live here.  A *structured view* (sub-architecture) is an
architecture in its own right whose universe is a strict subset of a
parent's and whose relations and functions are restrictions of the
parent's; :func:`restrict` builds the maximal one over a given element
subset, and :func:`is_sub_architecture` recognizes the general case, which
may also drop components.  An *unstructured view* is any componentwise
selection from an architecture; it deliberately does not require the
selected elements and relations to be compatible, because naming a
relation in a view can carry information by itself.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Union

from .core import Architecture, FunctionTable, Relation
from .errors import DuplicateViewError, NotASubsetError, SubsetNotInUniverseError


def _restrict_relation(rel: Relation, subset: frozenset[str]) -> Relation:
    kept = {t for t in rel.tuples if all(e in subset for e in t)}
    return Relation(rel.name, rel.arity, kept)


def _restrict_function(fn: FunctionTable, subset: frozenset[str]) -> FunctionTable:
    # A domain tuple survives only if its components and its output stay
    # inside the subset; otherwise the restricted table would escape the
    # restricted universe.
    kept = {t: v for t, v in fn.mapping.items()
            if v in subset and all(e in subset for e in t)}
    return FunctionTable(fn.name, fn.arity, kept)


def restrict(parent: Architecture, subset: Iterable[str]) -> Architecture:
    """The maximal structured view of ``parent`` on ``subset``.

    Every relation is cut down to the tuples lying entirely inside the
    subset and every function to the domain tuples whose components and
    output do.  Components that collapse to the same extension are merged
    (set semantics); function tables whose restriction is empty are
    dropped, so restricting to a subset not touching a function removes it.
    Empty relations are kept: an empty extension is still a relation.
    """
    sub = frozenset(subset)
    missing = sub - parent.universe
    if missing:
        raise SubsetNotInUniverseError(
            f"elements not in the universe: {sorted(missing)}")

    relations: list[Relation] = []
    seen_r = set()
    for rel in parent.relations:
        cut = _restrict_relation(rel, sub)
        if cut.extension() not in seen_r:
            seen_r.add(cut.extension())
            relations.append(cut)

    functions: list[FunctionTable] = []
    seen_f = set()
    for fn in parent.functions:
        cut = _restrict_function(fn, sub)
        if cut.domain and cut.extension() not in seen_f:
            seen_f.add(cut.extension())
            functions.append(cut)

    return Architecture(sorted(sub), relations, functions, parent.name)


def is_sub_architecture(a: Architecture, b: Architecture) -> bool:
    """Whether ``a`` is a structured view of ``b``.

    Requires a strictly smaller universe; every relation of ``a`` must
    equal the restriction of some relation of ``b`` to that universe, and
    every function of ``a`` the restriction of some function of ``b``.
    Dropping components is allowed, so this recognizes more than
    :func:`restrict` constructs.
    """
    if not (a.universe < b.universe):
        return False
    sub = a.universe
    restricted_rels = {_restrict_relation(r, sub) for r in b.relations}
    for rel in a.relations:
        if rel not in restricted_rels:
            return False
    restricted_funs = {_restrict_function(f, sub) for f in b.functions}
    for fn in a.functions:
        if fn not in restricted_funs:
            return False
    return True


class UnstructuredView:
    """A componentwise selection from a parent architecture.

    Elements, relations, and functions are each subsets of the parent's;
    nothing ties them to each other.
    """

    def __init__(self, parent: Architecture, elements: Iterable[str],
                 relation_refs: Iterable[Relation] = (),
                 function_refs: Iterable[FunctionTable] = ()):
        self.parent = parent
        self.elements = frozenset(elements)
        self.relation_refs = frozenset(relation_refs)
        self.function_refs = frozenset(function_refs)

    def __eq__(self, other):
        if not isinstance(other, UnstructuredView):
            return NotImplemented
        return (self.parent == other.parent
                and self.elements == other.elements
                and self.relation_refs == other.relation_refs
                and self.function_refs == other.function_refs)

    def __hash__(self):
        return hash((UnstructuredView, self.parent, self.elements,
                     self.relation_refs, self.function_refs))

    def __repr__(self):
        return (f"UnstructuredView(|A|={len(self.elements)}, "
                f"rels={len(self.relation_refs)}, funs={len(self.function_refs)})")


View = Union[Architecture, UnstructuredView]


def make_view(parent: Architecture, elements: Iterable[str],
              relation_refs: Iterable[Relation] = (),
              function_refs: Iterable[FunctionTable] = ()) -> UnstructuredView:
    """Build an unstructured view, checking only the subset conditions."""
    view = UnstructuredView(parent, elements, relation_refs, function_refs)
    stray = view.elements - parent.universe
    if stray:
        raise NotASubsetError(f"view elements not in the universe: {sorted(stray)}")
    parent_rels = set(parent.relations)
    for rel in view.relation_refs:
        if rel not in parent_rels:
            raise NotASubsetError(
                f"view references relation '{rel.name}' that is not in the parent")
    parent_funs = set(parent.functions)
    for fn in view.function_refs:
        if fn not in parent_funs:
            raise NotASubsetError(
                f"view references function '{fn.name}' that is not in the parent")
    return view


def is_view(candidate: View, parent: Architecture) -> bool:
    """Whether ``candidate`` is a view of ``parent``.

    Unstructured candidates are checked against the componentwise subset
    conditions; architectures are checked as structured views.
    """
    if isinstance(candidate, Architecture):
        return is_sub_architecture(candidate, parent)
    return (candidate.elements <= parent.universe
            and candidate.relation_refs <= set(parent.relations)
            and candidate.function_refs <= set(parent.functions))


class Viewpoint:
    """An injective assignment of labels to views of one architecture."""

    def __init__(self, parent: Architecture, assignment: Mapping[str, View]):
        self.parent = parent
        self.assignment: dict[str, View] = dict(assignment)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.assignment)

    def __getitem__(self, label: str) -> View:
        return self.assignment[label]

    def __len__(self) -> int:
        return len(self.assignment)

    def __eq__(self, other):
        if not isinstance(other, Viewpoint):
            return NotImplemented
        return self.parent == other.parent and self.assignment == other.assignment

    def __repr__(self):
        return f"Viewpoint(labels={list(self.assignment)})"


def make_viewpoint(parent: Architecture,
                   labeled_views: Mapping[str, View]) -> Viewpoint:
    """Build a viewpoint over ``parent``.

    Labels must map to pairwise distinct views (otherwise two labels would
    name the same thing), and every view must belong to ``parent``.
    """
    seen: dict[View, str] = {}
    for label, view in labeled_views.items():
        if view in seen:
            raise DuplicateViewError(
                f"labels '{seen[view]}' and '{label}' are assigned the same view",
                labels=(seen[view], label))
        seen[view] = label
        if isinstance(view, UnstructuredView) and view.parent != parent:
            raise NotASubsetError(
                f"view under label '{label}' was built over a different architecture")
        if not is_view(view, parent):
            raise NotASubsetError(f"view under label '{label}' does not belong "
                                  f"to the given architecture")
    return Viewpoint(parent, labeled_views)
