"""Structure-preserving maps between architectures.

A homomorphism is a triple of maps: elements to elements, relations to
relations, functions to functions, arity-preserving and total.  It is
*verified* by :func:`check_homomorphism` (every relation tuple must map
into the image relation; every function application must commute with the
element map) and *found* by :func:`find_homomorphism`, an exact
backtracking search with forward checking.  Exhausting the search space is
the proof of nonexistence, so a ``None`` result is a theorem about the
inputs; running out of node budget raises instead of returning ``None``.
"""

from __future__ import annotations

import os
from typing import Iterable, Mapping

from .core import Architecture, FunctionTable, Relation, Violation
from .errors import SearchBudgetError

RELATION_NOT_PRESERVED = "RELATION_NOT_PRESERVED"
FUNCTION_DOMAIN_ESCAPE = "FUNCTION_DOMAIN_ESCAPE"
FUNCTION_NOT_COMMUTING = "FUNCTION_NOT_COMMUTING"

DEFAULT_BUDGET = 10_000_000


def default_budget() -> int:
    """Node budget for searches: ARCHCALC_SEARCH_BUDGET or 10^7."""
    raw = os.environ.get("ARCHCALC_SEARCH_BUDGET")
    if raw is None or not raw.strip():
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(
            f"ARCHCALC_SEARCH_BUDGET must be a positive integer, got {raw!r}") from None
    if value <= 0:
        raise ValueError(
            f"ARCHCALC_SEARCH_BUDGET must be a positive integer, got {raw!r}")
    return value


def _rel_key(r: Relation):
    return (r.arity, sorted(r.tuples), r.name)


def _fun_key(f: FunctionTable):
    return (f.arity, sorted(f.domain), sorted(f.mapping.items()), f.name)


class Homomorphism:
    """A triple of maps between two architectures.

    The constructor enforces structural well-formedness: each map must be
    total on its domain, land inside the corresponding component of the
    target, and preserve arity.  Whether the triple actually preserves
    structure is a separate question answered by :func:`check_homomorphism`.
    """

    def __init__(self, source: Architecture, target: Architecture,
                 h0: Mapping[str, str],
                 hR: Mapping[Relation, Relation] | None = None,
                 hF: Mapping[FunctionTable, FunctionTable] | None = None):
        self.source = source
        self.target = target

        h0 = dict(h0 or {})
        if set(h0) != source.universe:
            missing = sorted(source.universe - set(h0))
            extra = sorted(set(h0) - source.universe)
            raise ValueError(f"element map must be total on the source universe "
                             f"(missing {missing}, extra {extra})")
        for a, b in h0.items():
            if b not in target.universe:
                raise ValueError(f"element map sends '{a}' to '{b}' which is "
                                 f"not in the target universe")
        self.h0: dict[str, str] = h0

        self.hR = self._normalize(dict(hR or {}), source.relations,
                                  target.relations, "relation")
        self.hF = self._normalize(dict(hF or {}), source.functions,
                                  target.functions, "function")

    @staticmethod
    def _normalize(given: dict, src_items, tgt_items, kind: str) -> dict:
        canonical = {item: item for item in tgt_items}
        out = {}
        for item in src_items:
            if item not in given:
                raise ValueError(f"{kind} map is missing an image for '{item.name}'")
            image = given[item]
            if image not in canonical:
                raise ValueError(f"{kind} map sends '{item.name}' outside the target")
            image = canonical[image]
            if image.arity != item.arity:
                raise ValueError(f"{kind} map does not preserve arity: "
                                 f"'{item.name}'/{item.arity} -> "
                                 f"'{image.name}'/{image.arity}")
            out[item] = image
        if len(given) != len(out):
            raise ValueError(f"{kind} map has keys outside the source")
        return out

    def __eq__(self, other):
        if not isinstance(other, Homomorphism):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.h0 == other.h0 and self.hR == other.hR
                and self.hF == other.hF)

    def __repr__(self):
        return (f"Homomorphism({self.source!r} -> {self.target!r}, "
                f"|h0|={len(self.h0)})")

    def is_injective(self) -> bool:
        return (len(set(self.h0.values())) == len(self.h0)
                and len(frozenset(self.hR.values())) == len(self.hR)
                and len(frozenset(self.hF.values())) == len(self.hF))

    def is_surjective(self) -> bool:
        return (set(self.h0.values()) == self.target.universe
                and frozenset(self.hR.values()) == frozenset(self.target.relations)
                and frozenset(self.hF.values()) == frozenset(self.target.functions))

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "Homomorphism":
        """The inverse triple; only defined for bijective maps."""
        if not self.is_bijective():
            raise ValueError("only bijective homomorphisms can be inverted")
        return Homomorphism(
            self.target, self.source,
            {b: a for a, b in self.h0.items()},
            {img: rel for rel, img in self.hR.items()},
            {img: fn for fn, img in self.hF.items()},
        )


def check_homomorphism(h: Homomorphism) -> list[Violation]:
    """Verify the preservation conditions, returning every violation.

    An empty report means: every source relation tuple maps into its image
    relation, every mapped domain tuple lies in the image function's
    domain, and function application commutes with the element map.
    """
    out: list[Violation] = []
    for rel in h.source.relations:
        image = h.hR[rel]
        for t in sorted(rel.tuples):
            mapped = tuple(h.h0[e] for e in t)
            if mapped not in image.tuples:
                out.append(Violation(
                    RELATION_NOT_PRESERVED,
                    f"tuple {t} of relation '{rel.name}' maps to {mapped}, "
                    f"which is not in '{image.name}'", t))
    for fn in h.source.functions:
        image = h.hF[fn]
        for t in sorted(fn.domain):
            if t not in fn.mapping:
                continue
            mapped = tuple(h.h0[e] for e in t)
            if mapped not in image.mapping:
                out.append(Violation(
                    FUNCTION_DOMAIN_ESCAPE,
                    f"domain tuple {t} of function '{fn.name}' maps to {mapped}, "
                    f"which is outside the domain of '{image.name}'", t))
                continue
            if h.h0[fn.mapping[t]] != image.mapping[mapped]:
                out.append(Violation(
                    FUNCTION_NOT_COMMUTING,
                    f"function '{fn.name}' at {t}: mapping the output gives "
                    f"'{h.h0[fn.mapping[t]]}' but '{image.name}' at {mapped} "
                    f"gives '{image.mapping[mapped]}'", t))
    return out


def is_isomorphism(h: Homomorphism) -> bool:
    """Whether ``h`` is invertible as a structure-preserving map.

    Requires all three maps to be bijections and the explicitly
    constructed inverse triple to pass :func:`check_homomorphism`, which
    makes the relation condition bidirectional and covers functions too.
    """
    if check_homomorphism(h):
        return False
    if not h.is_bijective():
        return False
    return not check_homomorphism(h.inverse())


class _Search:
    """Backtracking search for homomorphisms between two finite
    architectures.  Exact: exhausts the space under canonical orderings,
    pruning only provably impossible branches."""

    def __init__(self, source: Architecture, target: Architecture,
                 surjective: bool, injective: bool, budget: int):
        self.source = source
        self.target = target
        self.surjective = surjective
        self.injective = injective
        self.budget = budget
        self.nodes = 0

        self.src_rels = sorted(source.relations, key=_rel_key)
        self.tgt_rels = sorted(target.relations, key=_rel_key)
        self.src_funs = sorted(source.functions, key=_fun_key)
        self.tgt_funs = sorted(target.functions, key=_fun_key)
        self.tgt_elems = sorted(target.universe)

        degree: dict[str, int] = {e: 0 for e in source.universe}
        self.rel_occ: dict[str, list] = {e: [] for e in source.universe}
        for rel in self.src_rels:
            for t in sorted(rel.tuples):
                for e in set(t):
                    degree[e] += 1
                    self.rel_occ[e].append((rel, t))
        self.fun_occ: dict[str, list] = {e: [] for e in source.universe}
        for fn in self.src_funs:
            for t in sorted(fn.domain):
                if t not in fn.mapping:
                    continue
                for e in set(t) | {fn.mapping[t]}:
                    degree[e] += 1
                    self.fun_occ[e].append((fn, t))
        self.order = sorted(source.universe, key=lambda e: (-degree[e], e))

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchBudgetError(
                f"search exceeded its node budget of {self.budget}")

    def _component_maps(self, src_items, tgt_items, nonempty):
        """All arity-preserving assignments of source components to target
        components, honoring the injective/surjective flags."""
        candidates = []
        for item in src_items:
            cand = [t for t in tgt_items
                    if t.arity == item.arity and (not nonempty(item) or nonempty(t))]
            if not cand:
                return
            candidates.append(cand)

        tgt_all = list(tgt_items)

        def rec(i, chosen):
            if self.surjective:
                missing = sum(1 for t in tgt_all if t not in set(chosen))
                if missing > len(src_items) - i:
                    return
            if i == len(src_items):
                yield dict(zip(src_items, chosen))
                return
            for t in candidates[i]:
                self._tick()
                if self.injective and any(t == c for c in chosen):
                    continue
                yield from rec(i + 1, chosen + [t])

        yield from rec(0, [])

    def solutions(self):
        if self.injective and (len(self.source.universe) > len(self.target.universe)
                               or len(self.src_rels) > len(self.tgt_rels)
                               or len(self.src_funs) > len(self.tgt_funs)):
            return
        if self.surjective and (len(self.source.universe) < len(self.target.universe)
                                or len(self.src_rels) < len(self.tgt_rels)
                                or len(self.src_funs) < len(self.tgt_funs)):
            return
        rel_maps = self._component_maps(self.src_rels, self.tgt_rels,
                                        lambda r: bool(r.tuples))
        for hR in rel_maps:
            fun_maps = self._component_maps(self.src_funs, self.tgt_funs,
                                            lambda f: bool(f.domain))
            for hF in fun_maps:
                yield from self._element_search(hR, hF)

    def _element_search(self, hR, hF):
        order = self.order
        if not order:
            if self.surjective and self.tgt_elems:
                return
            yield Homomorphism(self.source, self.target, {}, hR, hF)
            return

        domains: dict[str, list[str]] = {}
        for e in order:
            allowed = self.tgt_elems
            # Unary pruning: a tuple mentioning only e constrains e's image
            # to elements whose self-tuple is present in the image relation.
            for rel, t in self.rel_occ[e]:
                if set(t) == {e}:
                    image = hR[rel]
                    allowed = [y for y in allowed
                               if tuple(y for _ in t) in image.tuples]
            domains[e] = list(allowed)
            if not allowed:
                return

        yield from self._extend(0, {}, domains, hR, hF)

    def _extend(self, depth, assigned, domains, hR, hF):
        if depth == len(self.order):
            yield Homomorphism(self.source, self.target, dict(assigned), hR, hF)
            return
        x = self.order[depth]
        for y in domains[x]:
            self._tick()
            result = self._propagate(x, y, assigned, domains, hR, hF)
            if result is None:
                continue
            assigned[x] = y
            yield from self._extend(depth + 1, assigned, result, hR, hF)
            del assigned[x]

    def _propagate(self, x, y, assigned, domains, hR, hF):
        """Assign x -> y tentatively; return pruned domains for the rest,
        or None when the assignment is inconsistent."""
        trial = dict(assigned)
        trial[x] = y
        new_domains = {e: d for e, d in domains.items()}

        def restrict(elem, allowed):
            cur = new_domains[elem]
            nxt = [v for v in cur if v in allowed]
            new_domains[elem] = nxt
            return bool(nxt)

        if self.injective:
            for e in new_domains:
                if e != x and e not in trial:
                    if not restrict(e, {v for v in new_domains[e] if v != y}):
                        return None

        if self.surjective:
            hit = set(trial.values())
            missing = sum(1 for v in self.tgt_elems if v not in hit)
            if missing > len(self.order) - len(trial):
                return None

        for rel, t in self.rel_occ[x]:
            image = hR[rel]
            free = [e for e in set(t) if e not in trial]
            if not free:
                if tuple(trial[e] for e in t) not in image.tuples:
                    return None
            elif len(free) == 1:
                z = free[0]
                allowed = set()
                for w in new_domains[z]:
                    candidate = tuple(w if e == z else trial[e] for e in t)
                    if candidate in image.tuples:
                        allowed.add(w)
                if not restrict(z, allowed):
                    return None

        for fn, t in self.fun_occ[x]:
            out = fn.mapping[t]
            image = hF[fn]
            if all(e in trial for e in t):
                mapped = tuple(trial[e] for e in t)
                if mapped not in image.mapping:
                    return None
                required = image.mapping[mapped]
                if out in trial:
                    if trial[out] != required:
                        return None
                elif not restrict(out, {required}):
                    return None

        return new_domains


def find_homomorphism(source: Architecture, target: Architecture, *,
                      surjective: bool = False, injective: bool = False,
                      bijective: bool = False,
                      budget: int | None = None) -> Homomorphism | None:
    """Search for a homomorphism satisfying the requested flags.

    Returns a witness or ``None`` when exhaustive backtracking proves none
    exists.  Deterministic for fixed inputs and budget.  Raises
    :class:`SearchBudgetError` when the node budget runs out, which is an
    inconclusive outcome, not a nonexistence proof.
    """
    if bijective:
        surjective = injective = True
    search = _Search(source, target, surjective, injective,
                     default_budget() if budget is None else budget)
    for h in search.solutions():
        return h
    return None


def find_isomorphism(source: Architecture, target: Architecture,
                     budget: int | None = None) -> Homomorphism | None:
    """Search for an isomorphism: a bijective homomorphism whose inverse
    triple is itself a homomorphism."""
    search = _Search(source, target, True, True,
                     default_budget() if budget is None else budget)
    for h in search.solutions():
        if is_isomorphism(h):
            return h
    return None
