"""Exact cohomology dimension tables.

Factor-level tables, all in exact integer arithmetic:

* line bundles on P^n: h^0(O(t)) = C(n+t, n), h^n(O(t)) = C(-t-1, n),
  nothing in between;
* twisted forms Omega^p(t) on P^n: the full Bott table; wedge powers of the
  tangent bundle enter through Wedge^p T(t) = Omega^{n-p}(t+n+1);
* line bundles on Q^m: pushed through 0 -> O(t-2) -> O(t) -> O_Q(t) -> 0 on
  the ambient P^{m+1}, which leaves h^0 = C(m+1+t, m+1) - C(m-1+t, m+1),
  its Serre-dual top group, and no intermediate cohomology;
* spinor twists on Q^m: supported exactly on {i=0, t >= 0} and
  {i=m, t <= -m-1}; h^0 follows the sequences
  0 -> S_a(t-1) -> O(t)^N -> S_b(t) -> 0 with N = 2^ceil(m/2) upward from
  the empty table of S_*(-1), and the top group is filled by Serre duality;
* products of two spinor twists on Q^m: a long-exact-sequence chase along
  the same sequences, anchored at twist -1 where exceptionality pins the
  tables: H^*((S tensor S)(-1)) = (1,0,...) on odd quadrics, and on even
  quadrics the same for the dual-paired kinds with the complementary pair
  vanishing outright.  Every chase step is rank-determined; a negative
  intermediate dimension would mean the bases were insufficient and raises
  RecursionAmbiguityError instead of guessing.

Tables of box products are Kunneth convolutions of factor tables.  All
tables are memoized; set BLOCKCOH_CACHE_DIR to persist the factor-table
cache as JSON lines across runs (inserts are idempotent, so concurrent
readers/writers only ever duplicate work, never corrupt results).
"""
from __future__ import annotations

import atexit
import json
import os
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

from .bundles import (BundleExpr, LineTwist, PsiSym, SpinorTwist, TangentWedge,
                      dual, spinor_dual_kind)
from .errors import RecursionAmbiguityError, SymbolicValueError, UnsupportedTensorError
from .spaces import Factor, Space


def binom(a: int, b: int) -> int:
    return comb(a, b) if 0 <= b <= a else 0


# ---------------------------------------------------------------- factors

def bott_line(n: int, t: int) -> tuple[int, ...]:
    dims = [0] * (n + 1)
    dims[0] = binom(n + t, n)
    dims[n] += binom(-t - 1, n)
    return tuple(dims)


def bott_forms(n: int, p: int, t: int) -> tuple[int, ...]:
    """Bott table of Omega^p(t) on P^n."""
    if not 0 <= p <= n:
        raise ValueError(f"need 0 <= p <= n, got p={p}, n={n}")
    dims = [0] * (n + 1)
    if t > p:
        dims[0] = binom(t + n - p, n - p) * binom(t - 1, p)
    elif t == 0:
        dims[p] = 1
    if t < p - n:
        dims[n] = binom(p - t, p) * binom(-t - 1, n - p)
    return tuple(dims)


def wedge_table(n: int, p: int, t: int) -> tuple[int, ...]:
    return bott_forms(n, n - p, t + n + 1)


def quadric_h0(m: int, t: int) -> int:
    return binom(m + 1 + t, m + 1) - binom(m - 1 + t, m + 1)


def quadric_line(m: int, t: int) -> tuple[int, ...]:
    dims = [0] * (m + 1)
    dims[0] = quadric_h0(m, t)
    dims[m] += quadric_h0(m, -t - m)
    return tuple(dims)


def spinor_sections_count(m: int) -> int:
    """Size N of the middle term O(t)^N in the spinor sequences."""
    return 2 ** ((m + 1) // 2)


def _other_kind(m: int, kind: str) -> str:
    if m % 2 == 1:
        return "S"
    return {"S1": "S2", "S2": "S1"}[kind]


_H0_SPINOR: dict[tuple[int, str, int], int] = {}


def spinor_h0(m: int, kind: str, t: int) -> int:
    if t < 0:
        return 0
    key = (m, kind, t)
    if key not in _H0_SPINOR:
        n_mid = spinor_sections_count(m)
        _H0_SPINOR[key] = n_mid * quadric_h0(m, t) - spinor_h0(m, _other_kind(m, kind), t - 1)
    return _H0_SPINOR[key]


def spinor_twist(m: int, kind: str, t: int) -> tuple[int, ...]:
    dims = [0] * (m + 1)
    if t >= 0:
        dims[0] = spinor_h0(m, kind, t)
    elif t <= -m - 1:
        # Serre duality with S^ = S'(-1)
        dims[m] = spinor_h0(m, spinor_dual_kind(m, kind), -t - 1 - m)
    return tuple(dims)


def _pair_base(m: int) -> dict[tuple[str, str], bool]:
    """Kind pairs (sorted) whose table at twist -1 is (1, 0, ..., 0).

    These are the exceptionality facts Hom(S_i, S_i) = C, Ext^k(S_i, S_i) = 0
    for k > 0, and (even m) Ext^*(S_1, S_2) = 0, rewritten through
    S_i^ = S_i'(-1).
    """
    if m % 2 == 1:
        return {("S", "S"): True}
    if m % 4 == 0:
        return {("S1", "S1"): True, ("S2", "S2"): True, ("S1", "S2"): False}
    return {("S1", "S1"): False, ("S2", "S2"): False, ("S1", "S2"): True}


_PAIR_TABLES: dict[tuple[int, str, str, int], tuple[int, ...]] = {}


def _pair(m: int, x: str, y: str, u: int) -> tuple[int, ...]:
    x, y = sorted((x, y))
    key = (m, x, y, u)
    cached = _PAIR_TABLES.get(key)
    if cached is not None:
        return cached

    n_mid = spinor_sections_count(m)
    if u == -1:
        dims = [0] * (m + 1)
        if _pair_base(m)[(x, y)]:
            dims[0] = 1
    elif u >= 0:
        # 0 -> (S_x S_y')(u-1) -> S_x(u)^N -> (S_x S_y)(u) -> 0
        kernel = _pair(m, x, _other_kind(m, y), u - 1)
        if any(kernel[1:]):
            raise RecursionAmbiguityError(
                f"upward spinor-pair chase at twist {u} on Q{m} hit a non-sections kernel")
        h0 = n_mid * spinor_h0(m, x, u) - kernel[0]
        if h0 < 0:
            raise RecursionAmbiguityError(
                f"negative rank in spinor-pair chase at twist {u} on Q{m}")
        dims = [0] * (m + 1)
        dims[0] = h0
    else:
        # 0 -> (S_x S_y)(u) -> S_x(u+1)^N -> (S_x S_y')(u+1) -> 0
        coker = _pair(m, x, _other_kind(m, y), u + 1)
        mid_top = n_mid * spinor_twist(m, x, u + 1)[m]
        dims = [0] + [coker[i - 1] for i in range(1, m + 1)]
        dims[m] += mid_top - coker[m]
        if dims[m] < 0:
            raise RecursionAmbiguityError(
                f"negative top rank in spinor-pair chase at twist {u} on Q{m}")
    result = tuple(dims)
    _PAIR_TABLES[key] = result
    return result


def spinor_pair(m: int, kind_a: str, t_a: int, kind_b: str, t_b: int) -> tuple[int, ...]:
    """Table of S_{kind_a}(t_a) tensor S_{kind_b}(t_b) on Q^m."""
    return _pair(m, kind_a, kind_b, t_a + t_b)


# ------------------------------------------------------ atoms and reduction

def _atom_of(fb) -> tuple:
    if isinstance(fb, LineTwist):
        return ("L", fb.t)
    if isinstance(fb, SpinorTwist):
        return ("S", fb.kind, fb.t)
    if isinstance(fb, TangentWedge):
        return ("W", fb.p, fb.t)
    return ("PSI", fb.j, fb.t)


def reduce_atoms(factor: Factor, atoms: Sequence[tuple]) -> tuple:
    """Collapse a slotwise tensor product to a single supported atom.

    Line twists merge into a shift; at most one wedge or psi, or two
    spinors, may remain.  Anything else fails loudly.
    """
    shift = 0
    rest = []
    for atom in atoms:
        if atom[0] == "L":
            shift += atom[1]
        else:
            rest.append(atom)
    if not rest:
        return ("L", shift)
    if len(rest) == 1:
        tag = rest[0]
        return (*tag[:-1], tag[-1] + shift)
    if len(rest) == 2 and rest[0][0] == rest[1][0] == "S":
        (_, k1, t1), (_, k2, t2) = rest
        return ("SS", k1, t1 + shift, k2, t2)
    raise UnsupportedTensorError(
        f"unsupported slotwise product on {factor}: {atoms}")


_FACTOR_TABLES: dict[tuple, tuple[int, ...]] = {}
_CACHE_STATE = {"loaded": False, "new": {}, "registered": False}


def _cache_path() -> Optional[str]:
    cache_dir = os.environ.get("BLOCKCOH_CACHE_DIR")
    if not cache_dir:
        return None
    return os.path.join(cache_dir, "tables.jsonl")


def _load_disk_cache() -> None:
    _CACHE_STATE["loaded"] = True
    path = _cache_path()
    if path is None or not os.path.exists(path):
        return
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
                key = tuple(tuple(k) if isinstance(k, list) else k for k in entry["key"])
                _FACTOR_TABLES.setdefault(key, tuple(entry["dims"]))
            except (ValueError, KeyError):
                continue  # a torn line from a concurrent writer is just skipped


def _flush_disk_cache() -> None:
    path = _cache_path()
    new = _CACHE_STATE["new"]
    if path is None or not new:
        return
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        for key, dims in new.items():
            fh.write(json.dumps({"key": key, "dims": list(dims)}) + "\n")
    new.clear()


def factor_table(factor: Factor, atom: tuple) -> tuple[int, ...]:
    if not _CACHE_STATE["loaded"]:
        _load_disk_cache()
        if _cache_path() is not None and not _CACHE_STATE["registered"]:
            atexit.register(_flush_disk_cache)
            _CACHE_STATE["registered"] = True
    key = (factor.kind, factor.dim, atom)
    cached = _FACTOR_TABLES.get(key)
    if cached is not None:
        return cached

    tag = atom[0]
    n = factor.dim
    if tag == "L":
        dims = bott_line(n, atom[1]) if factor.is_proj else quadric_line(n, atom[1])
    elif tag == "S":
        dims = spinor_twist(n, atom[1], atom[2])
    elif tag == "W":
        dims = wedge_table(n, atom[1], atom[2])
    elif tag == "SS":
        dims = spinor_pair(n, atom[1], atom[2], atom[3], atom[4])
    else:
        raise SymbolicValueError(f"no numeric table for symbolic atom {atom}")
    _FACTOR_TABLES[key] = dims
    _CACHE_STATE["new"][key] = dims
    return dims


# ------------------------------------------------------------ full tables

@dataclass(frozen=True)
class CohomTable:
    dims: Optional[tuple[int, ...]]
    symbolic: bool = False

    @property
    def chi(self) -> int:
        if self.symbolic or self.dims is None:
            raise SymbolicValueError("Euler characteristic of a symbolic table")
        return sum(d if i % 2 == 0 else -d for i, d in enumerate(self.dims))

    def h(self, i: int) -> int:
        if self.symbolic or self.dims is None:
            raise SymbolicValueError("dimensions of a symbolic table")
        return self.dims[i]

    def to_json_dict(self) -> dict:
        return {"dims": list(self.dims) if self.dims is not None else None,
                "symbolic": self.symbolic}


def convolve(tables: Sequence[Sequence[int]]) -> list[int]:
    acc = [1]
    for table in tables:
        out = [0] * (len(acc) + len(table) - 1)
        for i, a in enumerate(acc):
            if a == 0:
                continue
            for j, b in enumerate(table):
                if b:
                    out[i + j] += a * b
        acc = out
    return acc


def cohom_product(X: Space, exprs: Sequence[BundleExpr]) -> CohomTable:
    """Cohomology table of the tensor product of the given expressions."""
    total = [0] * (X.d + 1)
    from itertools import product as iproduct
    for combo in iproduct(*(e.terms for e in exprs)):
        mult = 1
        slot_atoms: list[list[tuple]] = [[] for _ in range(X.r)]
        for m, fbs in combo:
            mult *= m
            for idx, fb in enumerate(fbs):
                slot_atoms[idx].append(_atom_of(fb))
        reduced = [reduce_atoms(f, atoms) for f, atoms in zip(X.factors, slot_atoms)]
        if any(a[0] == "PSI" for a in reduced):
            return CohomTable(None, symbolic=True)
        tables = [factor_table(f, a) for f, a in zip(X.factors, reduced)]
        for i, v in enumerate(convolve(tables)):
            total[i] += mult * v
    return CohomTable(tuple(total))


def cohom(e: BundleExpr, X: Space) -> CohomTable:
    return cohom_product(X, [e])


def euler_char(e: BundleExpr, X: Space) -> int:
    return cohom(e, X).chi


def ext_dims(a: BundleExpr, b: BundleExpr, X: Space) -> CohomTable:
    """Ext^*(a, b) = H^*(a^ tensor b) as a table."""
    return cohom_product(X, [dual(a, X), b])
