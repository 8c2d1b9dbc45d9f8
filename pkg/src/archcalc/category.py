"""Composition and identities for architecture homomorphisms.

Architectures with homomorphisms as arrows form a category: composition
is componentwise, associative, and has the identity triple as unit.
Composability is decided by extensional equality of the middle
architecture, not object identity, so witnesses that went through a
serialization round-trip still compose.
"""

from __future__ import annotations

from .core import Architecture
from .errors import NotComposableError
from .morphism import Homomorphism


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """The composite ``g after f``; requires target(f) = source(g)."""
    if f.target != g.source:
        raise NotComposableError(
            "cannot compose: target of the first-applied map differs from "
            "the source of the second")
    h0 = {a: g.h0[b] for a, b in f.h0.items()}
    hR = {r: g.hR[img] for r, img in f.hR.items()}
    hF = {fn: g.hF[img] for fn, img in f.hF.items()}
    return Homomorphism(f.source, g.target, h0, hR, hF)


def identity(arch: Architecture) -> Homomorphism:
    """The identity triple on ``arch``."""
    return Homomorphism(
        arch, arch,
        {e: e for e in arch.universe},
        {r: r for r in arch.relations},
        {f: f for f in arch.functions},
    )
