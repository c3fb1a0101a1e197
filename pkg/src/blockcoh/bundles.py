"""Bundle expressions: finite direct sums of box products of factor bundles.

Factor bundles are line twists O(t) on any factor, twisted spinors on
quadrics, twisted wedge powers of the tangent bundle on projective factors,
and symbolic psi bundles on quadrics (dual-collection members whose
cohomology is not computed here).

Spinor convention: the symbols S, S1, S2 denote the classical spinor
bundles twisted by O(1).  With this normalization H^0(S(t)) != 0 exactly
for t >= 0, and the dual rule reads S^ = S'(-1) where S' = S for odd
quadrics, S' = S_i on Q^m with m = 0 (mod 4) and S' = S_{3-i} on Q^m with
m = 2 (mod 4).
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Mapping, Optional, Union

from .errors import BundleError, SymbolicValueError, UnsupportedTensorError
from .spaces import Factor, Space, product_space

SPINOR_KINDS = ("S", "S1", "S2")


@dataclass(frozen=True)
class LineTwist:
    t: int


@dataclass(frozen=True)
class SpinorTwist:
    kind: str
    t: int

    def __post_init__(self):
        if self.kind not in SPINOR_KINDS:
            raise BundleError(f"unknown spinor kind {self.kind!r}")


@dataclass(frozen=True)
class TangentWedge:
    p: int
    t: int

    def __post_init__(self):
        if self.p < 1:
            raise BundleError("TangentWedge needs p >= 1; use LineTwist for p = 0")


@dataclass(frozen=True)
class PsiSym:
    j: int
    t: int

    def __post_init__(self):
        if self.j < 1:
            raise BundleError("psi index must be positive")


FactorBundle = Union[LineTwist, SpinorTwist, TangentWedge, PsiSym]

_TAG_ORDER = {LineTwist: 0, SpinorTwist: 1, TangentWedge: 2, PsiSym: 3}


def wedge(p: int, t: int) -> FactorBundle:
    """Wedge power of the tangent bundle; p = 0 collapses to a line twist."""
    return LineTwist(t) if p == 0 else TangentWedge(p, t)


def _fb_key(fb: FactorBundle):
    if isinstance(fb, LineTwist):
        return (0, 0, fb.t)
    if isinstance(fb, SpinorTwist):
        return (1, SPINOR_KINDS.index(fb.kind), fb.t)
    if isinstance(fb, TangentWedge):
        return (2, fb.p, fb.t)
    return (3, fb.j, fb.t)


def check_on(fb: FactorBundle, factor: Factor) -> None:
    if isinstance(fb, SpinorTwist):
        if not factor.is_quadric:
            raise BundleError(f"spinor {fb} only lives on quadric factors")
        odd = factor.dim % 2 == 1
        if odd and fb.kind != "S":
            raise BundleError(f"{fb.kind} needs an even quadric, factor is {factor}")
        if not odd and fb.kind == "S":
            raise BundleError(f"S needs an odd quadric, factor is {factor}")
    elif isinstance(fb, TangentWedge):
        if not factor.is_proj:
            raise BundleError(f"tangent wedge {fb} only lives on projective factors")
        if fb.p > factor.dim:
            raise BundleError(f"wedge power {fb.p} exceeds dim of {factor}")
    elif isinstance(fb, PsiSym):
        if not factor.is_quadric:
            raise BundleError(f"psi bundle {fb} only lives on quadric factors")


def spinor_rank(m: int) -> int:
    return 2 ** ((m - 1) // 2)


def fb_rank(fb: FactorBundle, factor: Factor,
            psi_ranks: Optional[Mapping[int, int]] = None) -> int:
    if isinstance(fb, LineTwist):
        return 1
    if isinstance(fb, SpinorTwist):
        return spinor_rank(factor.dim)
    if isinstance(fb, TangentWedge):
        return comb(factor.dim, fb.p)
    if psi_ranks is not None and fb.j in psi_ranks:
        return psi_ranks[fb.j]
    raise SymbolicValueError(f"rank of psi_{fb.j} is not determined; supply it explicitly")


Term = tuple[int, tuple[FactorBundle, ...]]


@dataclass(frozen=True)
class BundleExpr:
    """Canonical sum of box-product terms: ((mult, factor bundles), ...)."""

    terms: tuple[Term, ...]

    def __post_init__(self):
        if not self.terms:
            raise BundleError("a bundle expression needs at least one term")


def make_bundle(terms) -> BundleExpr:
    """Canonicalize: merge equal terms, sort deterministically, drop mult-0."""
    counts: dict[tuple[FactorBundle, ...], int] = {}
    for mult, fbs in terms:
        if mult < 0:
            raise BundleError("multiplicities must be positive")
        counts[tuple(fbs)] = counts.get(tuple(fbs), 0) + mult
    out = [(m, fbs) for fbs, m in counts.items() if m > 0]
    out.sort(key=lambda term: tuple(_fb_key(fb) for fb in term[1]))
    return BundleExpr(tuple(out))


def expr_sort_key(e: BundleExpr):
    return tuple((m, tuple(_fb_key(fb) for fb in fbs)) for m, fbs in e.terms)


def validate_on(e: BundleExpr, X: Space) -> BundleExpr:
    """Validate against X and canonicalize the top wedge power
    Wedge^n T(t) = O(t + n + 1)."""
    rewritten = []
    changed = False
    for mult, fbs in e.terms:
        if len(fbs) != X.r:
            raise BundleError(
                f"term has {len(fbs)} factor slots, space {X} has {X.r}")
        out = []
        for fb, factor in zip(fbs, X.factors):
            check_on(fb, factor)
            if isinstance(fb, TangentWedge) and fb.p == factor.dim:
                fb = LineTwist(fb.t + factor.dim + 1)
                changed = True
            out.append(fb)
        rewritten.append((mult, tuple(out)))
    return make_bundle(rewritten) if changed else e


def line_bundle(X: Space, twists) -> BundleExpr:
    twists = tuple(twists)
    if len(twists) != X.r:
        raise BundleError(f"need {X.r} twists for {X}")
    return make_bundle([(1, tuple(LineTwist(t) for t in twists))])


def structure_sheaf(X: Space) -> BundleExpr:
    return line_bundle(X, (0,) * X.r)


def single(X: Space, *fbs: FactorBundle) -> BundleExpr:
    return validate_on(make_bundle([(1, tuple(fbs))]), X)


def is_symbolic(e: BundleExpr) -> bool:
    return any(isinstance(fb, PsiSym) for _, fbs in e.terms for fb in fbs)


def rank_of(e: BundleExpr, X: Space,
            psi_ranks: Optional[Mapping[int, int]] = None) -> int:
    total = 0
    for mult, fbs in e.terms:
        r = mult
        for fb, factor in zip(fbs, X.factors):
            r *= fb_rank(fb, factor, psi_ranks)
        total += r
    return total


def direct_sum(*exprs: BundleExpr) -> BundleExpr:
    return make_bundle([t for e in exprs for t in e.terms])


def spinor_dual_kind(m: int, kind: str) -> str:
    if m % 2 == 1:
        return "S"
    if m % 4 == 0:
        return kind
    return {"S1": "S2", "S2": "S1"}[kind]


def dual_fb(fb: FactorBundle, factor: Factor) -> FactorBundle:
    if isinstance(fb, LineTwist):
        return LineTwist(-fb.t)
    if isinstance(fb, SpinorTwist):
        return SpinorTwist(spinor_dual_kind(factor.dim, fb.kind), -fb.t - 1)
    if isinstance(fb, TangentWedge):
        n = factor.dim
        return wedge(n - fb.p, -fb.t - (n + 1))
    raise SymbolicValueError("dual of a symbolic psi bundle is not supported")


def dual(e: BundleExpr, X: Space) -> BundleExpr:
    return make_bundle(
        [(mult, tuple(dual_fb(fb, f) for fb, f in zip(fbs, X.factors)))
         for mult, fbs in e.terms])


def _shift(fb: FactorBundle, s: int) -> FactorBundle:
    if isinstance(fb, LineTwist):
        return LineTwist(fb.t + s)
    if isinstance(fb, SpinorTwist):
        return SpinorTwist(fb.kind, fb.t + s)
    if isinstance(fb, TangentWedge):
        return TangentWedge(fb.p, fb.t + s)
    return PsiSym(fb.j, fb.t + s)


def twist_by(e: BundleExpr, twists) -> BundleExpr:
    """Twist by the line bundle O(t_1, ..., t_r)."""
    twists = tuple(twists)
    return make_bundle(
        [(mult, tuple(_shift(fb, s) for fb, s in zip(fbs, twists)))
         for mult, fbs in e.terms])


def twist_balanced(e: BundleExpr, t: int) -> BundleExpr:
    nslots = len(e.terms[0][1])
    return twist_by(e, (t,) * nslots)


def canonical_twist(e: BundleExpr, X: Space) -> BundleExpr:
    """Tensor with the canonical line bundle of X."""
    return twist_by(e, X.canonical_twists)


def box_product(a: BundleExpr, X: Space, b: BundleExpr, Y: Space):
    """External tensor product; returns (expr, X x Y)."""
    XY = product_space(X, Y)
    terms = [(ma * mb, fa + fb) for ma, fa in a.terms for mb, fb in b.terms]
    return make_bundle(terms), XY


def tensor_line(e: BundleExpr, X: Space, line_term: tuple[FactorBundle, ...]) -> BundleExpr:
    """Tensor with a single box term all of whose slots are line twists."""
    if not all(isinstance(fb, LineTwist) for fb in line_term):
        raise UnsupportedTensorError("tensor_line needs a pure line term")
    return twist_by(e, tuple(fb.t for fb in line_term))


def restrict_hyperplane(e: BundleExpr, X: Space, factor_index: int):
    """Restrict to a generic hyperplane section of one factor.

    P^n -> P^{n-1} (the factor disappears for n = 1), Q^m -> Q^{m-1} for
    m >= 3.  Line twists restrict unchanged; spinors follow
    S1|, S2| -> S (even m) and S| -> S1 + S2 (odd m), same twist.
    """
    if not 0 <= factor_index < X.r:
        raise BundleError(f"no factor {factor_index} in {X}")
    factor = X.factors[factor_index]
    drop = factor.is_proj and factor.dim == 1
    if factor.is_quadric and factor.dim < 3:
        raise BundleError(f"cannot restrict {factor}: Q1 is not admitted")
    if drop and X.r == 1:
        raise BundleError("cannot restrict the last dimension away")

    new_factors = list(X.factors)
    if drop:
        del new_factors[factor_index]
    else:
        new_factors[factor_index] = Factor(factor.kind, factor.dim - 1)
    newX = Space(tuple(new_factors))

    new_terms = []
    for mult, fbs in e.terms:
        fb = fbs[factor_index]
        if isinstance(fb, (TangentWedge, PsiSym)):
            raise UnsupportedTensorError(f"restriction of {fb} is not supported")
        rest = list(fbs)
        if isinstance(fb, LineTwist):
            if drop:
                del rest[factor_index]
            new_terms.append((mult, tuple(rest)))
        else:
            m = factor.dim
            if m % 2 == 0:
                rest[factor_index] = SpinorTwist("S", fb.t)
                new_terms.append((mult, tuple(rest)))
            else:
                for kind in ("S1", "S2"):
                    r2 = list(rest)
                    r2[factor_index] = SpinorTwist(kind, fb.t)
                    new_terms.append((mult, tuple(r2)))
    return validate_on(make_bundle(new_terms), newX), newX


def twist_extremes(e: BundleExpr) -> tuple[int, int]:
    ts = [fb.t for _, fbs in e.terms for fb in fbs]
    return min(ts), max(ts)
