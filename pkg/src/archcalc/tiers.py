"""Tier structure of architectures.

An architecture is n-tier when its universe admits an ordered partition
into n nonempty tiers such that every relation tuple stays within one tier
or two adjacent ones.  For boxes-and-connectors architectures this is
equivalent to the existence of a surjective homomorphism onto the
elementary n-tier architecture (universe 1..n, reflexive adjacency), which
is how :func:`find_max_tiers` searches; an independent exhaustive
enumeration over ordered partitions is provided for cross-checking.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .core import Architecture, Relation
from .errors import (EmptyUniverseError, IndexOutOfRangeError, NotAPartitionError,
                     NotBncError, SearchBudgetError)
from .morphism import Homomorphism, find_homomorphism

EXHAUSTIVE_SIZE_LIMIT = 9


class TierPartition:
    """An ordered list of element sets; order is the tier order."""

    def __init__(self, tiers: Iterable[Iterable[str]]):
        self.tiers: tuple[frozenset[str], ...] = tuple(frozenset(t) for t in tiers)

    def __len__(self) -> int:
        return len(self.tiers)

    def __iter__(self):
        return iter(self.tiers)

    def __getitem__(self, i):
        return self.tiers[i]

    def __eq__(self, other):
        if not isinstance(other, TierPartition):
            return NotImplemented
        return self.tiers == other.tiers

    def __hash__(self):
        return hash((TierPartition, self.tiers))

    def __repr__(self):
        return f"TierPartition({[sorted(t) for t in self.tiers]})"

    def tier_of(self) -> dict[str, int]:
        """Element -> 1-based tier index."""
        out: dict[str, int] = {}
        for i, tier in enumerate(self.tiers, start=1):
            for e in tier:
                out[e] = i
        return out


def is_bnc(arch: Architecture) -> bool:
    """Boxes and connectors: binary relations only, no functions."""
    return not arch.functions and all(r.arity == 2 for r in arch.relations)


def _require_partition(arch: Architecture, p: TierPartition) -> None:
    total = 0
    union: set[str] = set()
    for i, tier in enumerate(p.tiers, start=1):
        if not tier:
            raise NotAPartitionError(f"tier {i} is empty")
        total += len(tier)
        union |= tier
    if len(union) != total:
        raise NotAPartitionError("tiers are not pairwise disjoint")
    if union != arch.universe:
        raise NotAPartitionError(
            "tiers do not cover the universe exactly "
            f"(missing {sorted(arch.universe - union)}, "
            f"extra {sorted(union - arch.universe)})")


def check_tier_partition(arch: Architecture, p: TierPartition) -> bool:
    """Whether ``p`` witnesses n-tier structure for ``arch``.

    Every tuple of every relation must lie within one tier or two adjacent
    tiers; with a single tier the condition is trivially satisfied.
    Raises :class:`NotAPartitionError` when ``p`` does not partition the
    universe into nonempty tiers.
    """
    _require_partition(arch, p)
    index = p.tier_of()
    for rel in arch.relations:
        for t in rel.tuples:
            levels = [index[e] for e in t]
            if max(levels) - min(levels) > 1:
                return False
    return True


def elementary_tier(n: int) -> Architecture:
    """Universe 1..n with the reflexive adjacency relation |i-j| <= 1."""
    if n < 1:
        raise ValueError(f"tier count must be >= 1, got {n}")
    elems = [str(i) for i in range(1, n + 1)]
    linked = {(str(i), str(j))
              for i in range(1, n + 1) for j in range(1, n + 1)
              if abs(i - j) <= 1}
    return Architecture(elems, (Relation("linked", 2, linked),), (), name=f"T{n}")


def merge_adjacent_tiers(p: TierPartition, i: int) -> TierPartition:
    """Merge tiers i and i+1 (1-based); the result is an (n-1)-partition.

    Merging preserves tier-witness validity: any tuple that fit in tiers
    {l, l+1} still fits after the pair is fused.
    """
    if not 1 <= i < len(p.tiers):
        raise IndexOutOfRangeError(
            f"merge index must satisfy 1 <= i < {len(p.tiers)}, got {i}")
    tiers = list(p.tiers)
    merged = tiers[i - 1] | tiers[i]
    return TierPartition(tiers[:i - 1] + [merged] + tiers[i + 1:])


def tier_map(arch: Architecture, p: TierPartition) -> Homomorphism:
    """The map induced by a tier partition: each element to its tier index
    in the elementary architecture, every relation to the adjacency
    relation.  Only defined for boxes-and-connectors architectures."""
    if not is_bnc(arch):
        raise NotBncError("tier maps are only defined for "
                          "boxes-and-connectors architectures")
    _require_partition(arch, p)
    target = elementary_tier(len(p.tiers))
    index = p.tier_of()
    linked = target.relations[0]
    return Homomorphism(arch, target,
                        {e: str(i) for e, i in index.items()},
                        {r: linked for r in arch.relations}, {})


def _singletons(arch: Architecture) -> TierPartition:
    return TierPartition([{e} for e in sorted(arch.universe)])


def _check_max_tiers_input(arch: Architecture) -> None:
    if not is_bnc(arch):
        raise NotBncError("tier search requires a boxes-and-connectors "
                          "architecture (binary relations, no functions)")
    if not arch.universe:
        raise EmptyUniverseError("tier search requires a nonempty universe")


def find_max_tiers(arch: Architecture,
                   budget: int | None = None) -> tuple[int, TierPartition]:
    """The largest n admitting an n-tier partition, with one witness.

    Searches surjective homomorphisms onto elementary architectures of
    increasing size and reads the witness off the preimages; feasibility
    is downward closed (adjacent tiers merge), so the first infeasible n
    bounds the answer.  A relation-free architecture is trivially n-tier
    for every n up to its size, but has no map onto the elementary
    architecture's relation, so it is answered directly.
    """
    _check_max_tiers_input(arch)
    if not arch.relations:
        return len(arch.universe), _singletons(arch)

    best = (1, TierPartition([arch.universe]))
    for n in range(2, len(arch.universe) + 1):
        h = find_homomorphism(arch, elementary_tier(n),
                              surjective=True, budget=budget)
        if h is None:
            break
        tiers = [frozenset(e for e, v in h.h0.items() if v == str(i))
                 for i in range(1, n + 1)]
        best = (n, TierPartition(tiers))
    return best


def _surjections(k: int, n: int):
    """All assignment vectors of k items onto distinguishable blocks
    0..n-1 with every block hit, in lexicographic order."""
    assign = [0] * k

    def rec(i: int, used: set[int]):
        if n - len(used) > k - i:
            return
        if i == k:
            yield tuple(assign)
            return
        for b in range(n):
            assign[i] = b
            if b in used:
                yield from rec(i + 1, used)
            else:
                used.add(b)
                yield from rec(i + 1, used)
                used.remove(b)

    yield from rec(0, set())


def find_max_tiers_exhaustive(arch: Architecture,
                              size_limit: int = EXHAUSTIVE_SIZE_LIMIT
                              ) -> tuple[int, TierPartition]:
    """Maximal tier count by direct enumeration of ordered partitions.

    Independent of the homomorphism search; intended as a cross-check at
    small sizes and refuses universes larger than ``size_limit``.
    """
    _check_max_tiers_input(arch)
    if len(arch.universe) > size_limit:
        raise SearchBudgetError(
            f"universe of size {len(arch.universe)} exceeds the exhaustive "
            f"enumeration cap of {size_limit}")
    if not arch.relations:
        return len(arch.universe), _singletons(arch)

    elems = sorted(arch.universe)
    index = {e: i for i, e in enumerate(elems)}
    tuple_indices = [tuple(index[e] for e in t)
                     for rel in arch.relations for t in sorted(rel.tuples)]

    best = (1, TierPartition([arch.universe]))
    for n in range(2, len(elems) + 1):
        witness = None
        for assign in _surjections(len(elems), n):
            ok = True
            for t in tuple_indices:
                levels = [assign[i] for i in t]
                if max(levels) - min(levels) > 1:
                    ok = False
                    break
            if ok:
                witness = assign
                break
        if witness is None:
            break
        tiers = [frozenset(e for e in elems if witness[index[e]] == b)
                 for b in range(n)]
        best = (n, TierPartition(tiers))
    return best
