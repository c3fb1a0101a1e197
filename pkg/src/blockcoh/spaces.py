"""Ambient spaces: ordered products of projective spaces P^n and smooth quadrics Q^m."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, SpaceError

PROJ = "P"
QUADRIC = "Q"


@dataclass(frozen=True)
class Factor:
    kind: str  # PROJ or QUADRIC
    dim: int

    def __post_init__(self):
        if self.kind not in (PROJ, QUADRIC):
            raise SpaceError(f"unknown factor kind {self.kind!r}")
        if self.kind == PROJ and self.dim < 1:
            raise SpaceError(f"P^n needs n >= 1, got {self.dim}")
        if self.kind == QUADRIC and self.dim < 2:
            raise SpaceError(f"Q^m needs m >= 2, got {self.dim}")

    @property
    def is_proj(self) -> bool:
        return self.kind == PROJ

    @property
    def is_quadric(self) -> bool:
        return self.kind == QUADRIC

    @property
    def canonical_twist(self) -> int:
        # omega = O(-n-1) on P^n, O(-m) on Q^m
        return -self.dim - 1 if self.is_proj else -self.dim

    def __str__(self) -> str:
        return f"{self.kind}{self.dim}"


@dataclass(frozen=True)
class Space:
    factors: tuple[Factor, ...]

    def __post_init__(self):
        if not self.factors:
            raise SpaceError("a space needs at least one factor")

    @property
    def d(self) -> int:
        return sum(f.dim for f in self.factors)

    @property
    def r(self) -> int:
        return len(self.factors)

    @property
    def canonical_twists(self) -> tuple[int, ...]:
        return tuple(f.canonical_twist for f in self.factors)

    @property
    def max_factor_dim(self) -> int:
        return max(f.dim for f in self.factors)

    def __str__(self) -> str:
        return "x".join(str(f) for f in self.factors)


def make_space(spec) -> Space:
    """Build a Space from (kind, dim) pairs, e.g. [("P", 3), ("Q", 3)]."""
    return Space(tuple(Factor(kind, dim) for kind, dim in spec))


def product_space(*spaces: Space) -> Space:
    return Space(tuple(f for s in spaces for f in s.factors))


_FACTOR_RE = re.compile(r"([PQ])(\d+)", re.IGNORECASE)


def parse_space(text: str) -> Space:
    """Parse a space string like "P3xQ3" (case-insensitive, 'x'-separated)."""
    parts = text.strip().split("x")
    factors = []
    for part in parts:
        m = _FACTOR_RE.fullmatch(part.strip())
        if m is None:
            raise ParseError(f"bad space factor {part!r} in {text!r}")
        factors.append(Factor(m.group(1).upper(), int(m.group(2))))
    return Space(tuple(factors))
