"""Shared helpers: random spaces and bundles for the property suites."""
from __future__ import annotations

import random

from blockcoh import (LineTwist, Space, SpinorTwist, TangentWedge, make_bundle,
                      make_space, validate_on)

FACTOR_POOL = (("P", 1), ("P", 2), ("P", 3), ("Q", 2), ("Q", 3), ("Q", 4))


def random_space(rng: random.Random, max_d: int = 6, pool=FACTOR_POOL,
                 max_factors: int = 3) -> Space:
    while True:
        n = rng.randint(1, max_factors)
        picks = [rng.choice(pool) for _ in range(n)]
        if sum(d for _, d in picks) <= max_d:
            return make_space(picks)


def random_factor_bundle(rng: random.Random, factor, tmin: int, tmax: int,
                         allow_wedge: bool = True):
    t = rng.randint(tmin, tmax)
    if factor.is_quadric and rng.random() < 0.35:
        kind = "S" if factor.dim % 2 else rng.choice(("S1", "S2"))
        return SpinorTwist(kind, t)
    if factor.is_proj and allow_wedge and rng.random() < 0.2:
        return TangentWedge(rng.randint(1, factor.dim), t)
    return LineTwist(t)


def random_bundle(rng: random.Random, X: Space, tmin: int = -6, tmax: int = 6,
                  max_terms: int = 3, allow_wedge: bool = True):
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        fbs = tuple(random_factor_bundle(rng, f, tmin, tmax, allow_wedge)
                    for f in X.factors)
        terms.append((rng.randint(1, 2), fbs))
    return validate_on(make_bundle(terms), X)
