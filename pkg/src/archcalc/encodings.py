"""Encodings of common modeling constructs, plus ready-made fixtures.

Junction connectors (joining several relations with and/or meaning) and
layer-membership indicator functions all stay inside the plain relational
model: an and-junction becomes one higher-arity relation, an or-junction
routes through a fresh hub element, and a layer indicator is a unary
function table into designated ``0``/``1`` elements embedded in the
universe, keeping every function endofunctional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import Architecture, FunctionTable, Relation
from .errors import JunctionShapeError


@dataclass(frozen=True)
class LayerSpec:
    """A named subset of an architecture's universe."""

    name: str
    members: frozenset[str]

    def __init__(self, name: str, members: Iterable[str]):
        object.__setattr__(self, "name", str(name))
        object.__setattr__(self, "members", frozenset(members))


def _fresh_hub(taken: set[str]) -> str:
    if "omega" not in taken:
        return "omega"
    i = 2
    while f"omega·{i}" in taken:
        i += 1
    return f"omega·{i}"


def encode_and_junction(arch: Architecture,
                        relations_to_join: Sequence[Relation]) -> Architecture:
    """Join single-tuple binary relations sharing a source element into one
    relation holding the tuple (source, target1, ..., targetk).

    Joining a single relation is a no-op.  The joined relations are
    replaced in place (at the position of the first); the new relation
    keeps the first one's name.
    """
    if not relations_to_join:
        raise JunctionShapeError("nothing to join")
    if len(relations_to_join) == 1:
        return arch

    present = {r: r for r in arch.relations}
    picked: list[Relation] = []
    for rel in relations_to_join:
        if rel not in present:
            raise JunctionShapeError(
                f"relation '{rel.name}' is not part of the architecture")
        picked.append(present[rel])

    source = None
    targets: list[str] = []
    for rel in picked:
        if rel.arity != 2 or len(rel.tuples) != 1:
            raise JunctionShapeError(
                f"junction member '{rel.name}' must be binary with exactly "
                f"one tuple")
        (a, b), = rel.tuples
        if source is None:
            source = a
        elif a != source:
            raise JunctionShapeError(
                f"junction members disagree on the source element: "
                f"'{source}' vs '{a}'")
        targets.append(b)

    joined = Relation(picked[0].name, 1 + len(targets),
                      {(source, *targets)})
    removed = set(picked)
    relations: list[Relation] = []
    for rel in arch.relations:
        if rel == picked[0]:
            relations.append(joined)
        elif rel not in removed:
            relations.append(rel)
    if any(joined == r for r in relations if r is not joined):
        raise JunctionShapeError(
            "joined relation collides with an existing extension")
    return Architecture(arch.declared_elements, relations, arch.functions,
                        arch.name)


def encode_or_junction(arch: Architecture, source: str,
                       targets: Iterable[str],
                       relation: Relation | None = None) -> Architecture:
    """Route a one-to-many connection through a fresh hub element.

    Adds a fresh element (``omega``, then ``omega·2``, ...) and the tuples
    (source, hub) plus (hub, t) for every target to the designated binary
    relation.  When the architecture has exactly one binary relation it is
    picked automatically.  Repeated junctions get distinct hubs, and the
    result stays boxes-and-connectors if the input was.
    """
    targets = list(targets)
    if source not in arch.universe:
        raise ValueError(f"source '{source}' is not in the universe")
    for t in targets:
        if t not in arch.universe:
            raise ValueError(f"target '{t}' is not in the universe")

    if relation is None:
        binary = [r for r in arch.relations if r.arity == 2]
        if len(binary) != 1:
            raise JunctionShapeError(
                "no designated relation and the architecture does not have "
                "exactly one binary relation")
        relation = binary[0]
    else:
        match = [r for r in arch.relations if r == relation]
        if not match:
            raise JunctionShapeError(
                f"relation '{relation.name}' is not part of the architecture")
        relation = match[0]
        if relation.arity != 2:
            raise JunctionShapeError(
                f"or-junctions extend binary relations, "
                f"'{relation.name}' has arity {relation.arity}")

    hub = _fresh_hub(set(arch.universe))
    new_tuples = set(relation.tuples) | {(source, hub)} | {(hub, t) for t in targets}
    extended = Relation(relation.name, 2, new_tuples)
    relations = [extended if r == relation else r for r in arch.relations]
    return Architecture(list(arch.declared_elements) + [hub], relations,
                        arch.functions, arch.name)


def indicator_function(arch: Architecture, layer: LayerSpec) -> Architecture:
    """Add a unary membership table for ``layer`` over the whole universe.

    Members map to element ``0`` and non-members to element ``1``; the two
    code elements are added to the universe first when absent, so the
    function's outputs stay inside the universe.
    """
    stray = layer.members - arch.universe
    if stray:
        raise ValueError(f"layer members not in the universe: {sorted(stray)}")
    universe = list(arch.declared_elements)
    for code in ("0", "1"):
        if code not in arch.universe and code not in universe:
            universe.append(code)
    full = sorted(set(universe))
    table = FunctionTable(
        layer.name, 1,
        {(e,): ("0" if e in layer.members else "1") for e in full})
    return Architecture(universe, arch.relations,
                        list(arch.functions) + [table], arch.name)


def wilkinson_base() -> Architecture:
    """The matrix-equation architecture: three symbol groups, one
    juxtaposition relation and one equality relation."""
    return Architecture(
        ("A", "x", "b"),
        (Relation("dot", 2, {("A", "x")}),
         Relation("eq", 2, {("x", "b")})),
        (),
        name="wilkinson",
    )


def wilkinson_star() -> Architecture:
    """The base architecture extended with the individual matrix and vector
    entries and a unary table sending each entry to its symbol group."""
    entries = ("a11", "a12", "a21", "a22", "x1", "x2", "b1", "b2")
    group = {}
    for e in entries:
        group[(e,)] = {"a": "A", "x": "x", "b": "b"}[e[0]]
    return Architecture(
        ("A", "x", "b", *entries),
        (Relation("dot", 2, {("A", "x")}),
         Relation("eq", 2, {("x", "b")})),
        (FunctionTable("fstar", 1, group),),
        name="wilkinson-star",
    )


def torch_fixture() -> Architecture:
    """A generic torch as boxes and connectors: seven concepts, seven
    singleton binary relations, maximal tier count six.

    The energy path runs user -> switch -> transfer mechanism -> store ->
    light generation -> light -> environment, with a direct feed from the
    transfer mechanism to light generation; edge orientation is fixed by
    this fixture (tier analysis does not depend on it).
    """
    edges = (
        ("operates", ("user", "switch")),
        ("activates", ("switch", "energy_transfer_mechanism")),
        ("is_transferred_by", ("energy_store", "energy_transfer_mechanism")),
        ("is_consumed_by", ("energy_store", "light_generation_mechanism")),
        ("feeds", ("energy_transfer_mechanism", "light_generation_mechanism")),
        ("produces", ("light_generation_mechanism", "light")),
        ("illuminates", ("light", "environment")),
    )
    elements = ("user", "switch", "energy_transfer_mechanism", "energy_store",
                "light_generation_mechanism", "light", "environment")
    return Architecture(
        elements,
        tuple(Relation(name, 2, {pair}) for name, pair in edges),
        (),
        name="torch",
    )
