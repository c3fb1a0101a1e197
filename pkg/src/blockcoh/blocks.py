"""Block collections on factors and products, their right duals, and
exact Ext verification.

Two quadric flavors are provided:

* preset "std": the spinor block leads, (S_*(-m), O(-m+1), ..., O);
* preset "dn": the spinor block sits second, (O(-m+1), S_*(-m+1),
  O(-m+2), ..., O) -- this is the flavor the regularity sweeps use.

On projective factors both presets are (O(-n), ..., O).  Product
collections put in block k every box product of factor-block members whose
indices sum to k, which requires every factor's last block to be {O}.

Verification is by brute force: the implemented vanishing pattern is
ext^*(A, A) = (1, 0,
...), ext^*(A, B) = 0 in all degrees for distinct members of one block or
when A's block comes strictly later than B's, and ext^{>0}(A, B) = 0 when
A's block precedes B's.  Presets are test subjects here, not axioms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Mapping, Optional, Sequence

from .bundles import (BundleExpr, FactorBundle, LineTwist, PsiSym, SpinorTwist,
                      direct_sum, expr_sort_key, is_symbolic, rank_of, single, wedge)
from .cohomology import ext_dims
from .dsl import format_bundle
from .errors import BlockcohError, SpaceError, SymbolicValueError
from .spaces import Factor, Space


def spinor_kinds(m: int) -> tuple[str, ...]:
    return ("S",) if m % 2 == 1 else ("S1", "S2")


def _factor_blocks_std(f: Factor) -> list[list[FactorBundle]]:
    if f.is_proj:
        return [[LineTwist(-f.dim + a)] for a in range(f.dim + 1)]
    m = f.dim
    blocks: list[list[FactorBundle]] = [[SpinorTwist(k, -m) for k in spinor_kinds(m)]]
    blocks += [[LineTwist(-m + a)] for a in range(1, m + 1)]
    return blocks


def _factor_blocks_dn(f: Factor) -> list[list[FactorBundle]]:
    if f.is_proj:
        return _factor_blocks_std(f)
    m = f.dim
    blocks: list[list[FactorBundle]] = [[LineTwist(-m + 1)]]
    blocks.append([SpinorTwist(k, -m + 1) for k in spinor_kinds(m)])
    blocks += [[LineTwist(-m + a)] for a in range(2, m + 1)]
    return blocks


def _factor_blocks_sigma(f: Factor, j: int) -> list[list[FactorBundle]]:
    if not f.is_quadric:
        raise SpaceError("sigma collections live on a single quadric factor")
    n = f.dim
    if not 1 <= j <= n:
        raise BlockcohError(f"sigma index must satisfy 1 <= j <= {n}, got {j}")
    blocks: list[list[FactorBundle]] = [[LineTwist(a)] for a in range(j, n)]
    blocks.append([SpinorTwist(k, n - 1) for k in spinor_kinds(n)])
    blocks += [[LineTwist(a)] for a in range(n, n + j)]
    return blocks


@dataclass(frozen=True)
class BlockCollection:
    space: Space
    blocks: tuple[tuple[BundleExpr, ...], ...]
    name: str = ""
    # per-factor block structure (single-factor member lists), kept so the
    # right dual can be built factorwise
    factor_blocks: tuple[tuple[tuple[FactorBundle, ...], ...], ...] = field(default=())

    @property
    def type_vector(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def member_labels(self) -> list[list[str]]:
        return [[format_bundle(m) for m in block] for block in self.blocks]

    def to_json_dict(self) -> dict:
        return {"space": str(self.space), "name": self.name,
                "type_vector": list(self.type_vector),
                "blocks": self.member_labels()}


def _compose(space: Space, factor_blocks) -> tuple[tuple[BundleExpr, ...], ...]:
    d = space.d
    out: list[list[BundleExpr]] = [[] for _ in range(d + 1)]
    per_factor_sizes = [len(fb) - 1 for fb in factor_blocks]

    def rec(fi: int, acc_indices: tuple[int, ...]):
        if fi == len(factor_blocks):
            k = sum(acc_indices)
            for members in iproduct(*(factor_blocks[i][acc_indices[i]]
                                      for i in range(len(acc_indices)))):
                out[k].append(single(space, *members))
            return
        for idx in range(per_factor_sizes[fi] + 1):
            rec(fi + 1, acc_indices + (idx,))

    rec(0, ())
    return tuple(tuple(sorted(block, key=expr_sort_key)) for block in out)


def _build(space: Space, per_factor, name: str) -> BlockCollection:
    fb = tuple(tuple(tuple(members) for members in blocks) for blocks in per_factor)
    return BlockCollection(space, _compose(space, per_factor), name, fb)


def standard_collection(X: Space) -> BlockCollection:
    return _build(X, [_factor_blocks_std(f) for f in X.factors], "std")


def regularity_collection(X: Space) -> BlockCollection:
    return _build(X, [_factor_blocks_dn(f) for f in X.factors], "dn")


def sigma_collection(m: int, j: int) -> BlockCollection:
    f = Factor("Q", m)
    X = Space((f,))
    return _build(X, [_factor_blocks_sigma(f, j)], f"sigma:{j}")


def collection_preset(X: Space, name: str) -> BlockCollection:
    if name == "std":
        return standard_collection(X)
    if name == "dn":
        return regularity_collection(X)
    if name.startswith("sigma:"):
        j = int(name.split(":", 1)[1])
        if X.r != 1 or not X.factors[0].is_quadric:
            raise SpaceError("sigma presets need a single quadric factor")
        return sigma_collection(X.factors[0].dim, j)
    raise BlockcohError(f"unknown preset {name!r}")


def product_collection(parts: Sequence[BlockCollection]) -> BlockCollection:
    """Combine single-space collections; every last block must be {O}."""
    if len(parts) == 1:
        return parts[0]
    factor_blocks = []
    factors = []
    for c in parts:
        if not c.factor_blocks:
            raise BlockcohError("product inputs must carry factor structure")
        for fb in c.factor_blocks:
            last = fb[-1]
            if len(last) != 1 or last[0] != LineTwist(0):
                raise BlockcohError(
                    f"collection {c.name!r} has last block {last}, not {{O}}")
            factor_blocks.append([list(members) for members in fb])
        factors.extend(c.space.factors)
    space = Space(tuple(factors))
    name = "*".join(c.name for c in parts)
    return _build(space, factor_blocks, name)


def block_sum(c: BlockCollection, j: int) -> BundleExpr:
    return direct_sum(*c.blocks[j])


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    violations: tuple = ()
    pairs_checked: int = 0
    notes: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {"ok": self.ok, "pairs_checked": self.pairs_checked,
                "violations": [
                    {"from": a, "to": b, "degree": i, "dim": dim}
                    for a, b, i, dim in self.violations],
                "notes": list(self.notes)}


def verify_nblock(c: BlockCollection, all_violations: bool = False) -> VerificationReport:
    """Check blockness and the strongly-exceptional vanishing pattern by
    computing every pairwise Ext table."""
    X = c.space
    members = [(bi, m) for bi, block in enumerate(c.blocks) for m in block]
    violations = []
    pairs = 0
    for bi, a in members:
        for bj, b in members:
            pairs += 1
            table = ext_dims(a, b, X).dims
            if a == b and bi == bj:
                expected_ok = table[0] == 1 and not any(table[1:])
            elif bi > bj or bi == bj:
                expected_ok = not any(table)
            else:
                expected_ok = not any(table[1:])
            if not expected_ok:
                bad_i = next(i for i, v in enumerate(table)
                             if v and not (a == b and bi == bj and i == 0 and v == 1))
                violations.append((format_bundle(a), format_bundle(b), bad_i, table[bad_i]))
                if not all_violations:
                    return VerificationReport(False, tuple(violations), pairs)
    return VerificationReport(not violations, tuple(violations), pairs)


# ------------------------------------------------------------- right duals

def _dual_factor_blocks(f: Factor, blocks, flavor: str):
    if f.is_proj:
        n = f.dim
        return [[wedge(k, -k)] for k in range(n + 1)]
    m = f.dim
    if flavor == "std":
        out: list[list[FactorBundle]] = [[LineTwist(0)]]
        out += [[PsiSym(j, 0)] for j in range(1, m)]
        out.append([SpinorTwist(k, 0) for k in spinor_kinds(m)])
        return out
    if flavor == "dn":
        out = [[LineTwist(0)]]
        out += [[PsiSym(j, 0)] for j in range(1, m - 1)]
        out.append([SpinorTwist(k, 0) for k in spinor_kinds(m)])
        out.append([LineTwist(1)])
        return out
    raise BlockcohError(f"no right dual is implemented for preset {flavor!r}")


@dataclass(frozen=True)
class DualCollection:
    space: Space
    blocks: tuple[tuple[BundleExpr, ...], ...]
    primal: BlockCollection

    @property
    def d(self) -> int:
        return self.space.d

    def rank_vector(self, psi_ranks: Optional[Mapping[int, int]] = None):
        """Rank of each dual block sum; None where psi ranks are missing."""
        out = []
        for block in self.blocks:
            try:
                out.append(sum(rank_of(m, self.space, psi_ranks) for m in block))
            except SymbolicValueError:
                out.append(None)
        return tuple(out)

    def member_labels(self) -> list[list[str]]:
        return [[format_bundle(m) for m in block] for block in self.blocks]

    def to_json_dict(self) -> dict:
        return {"space": str(self.space), "blocks": self.member_labels()}


def right_dual(c: BlockCollection) -> DualCollection:
    flavor = "std" if "std" in c.name else ("dn" if "dn" in c.name else None)
    if flavor is None or not c.factor_blocks:
        raise BlockcohError(f"right dual only implemented for std/dn presets, not {c.name!r}")
    duals = [_dual_factor_blocks(f, fb, flavor)
             for f, fb in zip(c.space.factors, c.factor_blocks)]
    return DualCollection(c.space, _compose(c.space, duals), c)


def orthogonality_check(c: BlockCollection, dc: DualCollection,
                        all_violations: bool = False) -> VerificationReport:
    """Check the Ext pairing between dual and primal blocks.

    For x in 'E_k and y in E_j the table ext^*(x, y) must vanish unless
    j = d - k, where only degree k may survive; each computable x must pair
    with exactly one y in E_{d-k}, with a one-dimensional pairing.
    Symbolic (psi) members are skipped with a notice.
    """
    X = c.space
    d = X.d
    violations = []
    skipped = 0
    pairs = 0
    for k, dblock in enumerate(dc.blocks):
        for x in dblock:
            if is_symbolic(x):
                skipped += 1
                continue
            partners = 0
            for j, pblock in enumerate(c.blocks):
                for y in pblock:
                    pairs += 1
                    table = ext_dims(x, y, X).dims
                    if j == d - k:
                        ok = all(v == 0 for i, v in enumerate(table) if i != k) \
                            and table[k] in (0, 1)
                        partners += table[k]
                    else:
                        ok = not any(table)
                    if not ok:
                        bad_i = next(i for i, v in enumerate(table) if v)
                        violations.append((format_bundle(x), format_bundle(y),
                                           bad_i, table[bad_i]))
                        if not all_violations:
                            return VerificationReport(False, tuple(violations), pairs)
            if partners != 1:
                violations.append((format_bundle(x), f"block {d - k}", k, partners))
                if not all_violations:
                    return VerificationReport(False, tuple(violations), pairs)
    notes = (f"{skipped} symbolic members skipped",) if skipped else ()
    return VerificationReport(not violations, tuple(violations), pairs, notes)
