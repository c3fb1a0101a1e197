"""Command-line front end.

Exit codes: 0 for pass/holds/regular, 1 for a failing verdict (with a
witness in the report), 2 for usage, parse, or validation errors.  JSON
output is canonical (sorted keys, fixed separators) and therefore
byte-deterministic for fixed inputs.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import blocks as _blocks
from . import criteria as _criteria
from . import regularity as _regularity
from .bundles import restrict_hyperplane
from .cohomology import cohom, ext_dims
from .dsl import format_bundle, parse_bundle
from .errors import BlockcohError
from .spaces import parse_space


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(args, payload: dict, text: str) -> None:
    print(_dump(payload) if args.format == "json" else text)


def _psi_ranks(pairs) -> dict[int, int]:
    out = {}
    for item in pairs or ():
        j, _, r = item.partition("=")
        try:
            out[int(j)] = int(r)
        except ValueError:
            raise BlockcohError(f"bad --psi-rank {item!r}; expected j=r")
    return out


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise BlockcohError(f"bad range {text!r}; expected a..b")
    return range(int(lo), int(hi) + 1)


def _table_text(rows, d: int) -> str:
    header = "t".rjust(5) + "".join(f"h^{i}".rjust(8) for i in range(d + 1))
    lines = [header]
    for t, dims in rows:
        if dims is None:
            lines.append(str(t).rjust(5) + "  (symbolic)")
        else:
            lines.append(str(t).rjust(5) + "".join(str(v).rjust(8) for v in dims))
    return "\n".join(lines)


def cmd_cohom(args) -> int:
    X = parse_space(args.space)
    e = parse_bundle(args.bundle, X)
    rows = []
    from .bundles import twist_balanced
    for t in _parse_range(args.range):
        table = cohom(twist_balanced(e, t), X)
        rows.append((t, list(table.dims) if table.dims is not None else None))
    payload = {"space": str(X), "bundle": format_bundle(e),
               "rows": [{"t": t, "dims": dims, "symbolic": dims is None}
                        for t, dims in rows]}
    _emit(args, payload, _table_text(rows, X.d))
    return 0


def cmd_ext(args) -> int:
    X = parse_space(args.space)
    a = parse_bundle(args.a, X)
    b = parse_bundle(args.b, X)
    table = ext_dims(a, b, X)
    payload = {"space": str(X), "from": format_bundle(a), "to": format_bundle(b),
               "table": table.to_json_dict()}
    _emit(args, payload, _table_text([(0, list(table.dims))], X.d))
    return 0


def _sigma_variants(X, preset: str):
    """On a failing sigma preset, also report nearby spinor-twist variants."""
    j = int(preset.split(":", 1)[1])
    m = X.factors[0].dim
    outcomes = []
    for delta in (-1, 0, 1):
        c = _blocks.sigma_collection(m, j)
        shifted = []
        from .bundles import SpinorTwist, single as _single
        for bi, block in enumerate(c.blocks):
            members = []
            for member in block:
                fbs = member.terms[0][1]
                fb = fbs[0]
                if isinstance(fb, SpinorTwist):
                    members.append(_single(c.space, SpinorTwist(fb.kind, fb.t + delta)))
                else:
                    members.append(member)
            shifted.append(tuple(members))
        variant = _blocks.BlockCollection(c.space, tuple(shifted), c.name)
        rep = _blocks.verify_nblock(variant)
        outcomes.append({"spinorTwistOffset": delta, "ok": rep.ok})
    return outcomes


def cmd_verify(args) -> int:
    X = parse_space(args.space)
    c = _blocks.collection_preset(X, args.preset)
    report = _blocks.verify_nblock(c, all_violations=args.all_violations)
    payload = {"space": str(X), "preset": args.preset,
               "typeVector": list(c.type_vector), **report.to_json_dict()}
    if not report.ok and args.preset.startswith("sigma:"):
        payload["twistVariantOutcomes"] = _sigma_variants(X, args.preset)
    text = (f"{args.preset} on {X}: "
            + ("PASS" if report.ok else f"FAIL {report.violations[0]}")
            + f" (type {c.type_vector}, {report.pairs_checked} pairs)")
    _emit(args, payload, text)
    return 0 if report.ok else 1


def cmd_dual(args) -> int:
    X = parse_space(args.space)
    c = _blocks.collection_preset(X, args.preset)
    dc = _blocks.right_dual(c)
    ranks = dc.rank_vector(_psi_ranks(args.psi_rank))
    payload = {"space": str(X), "preset": args.preset,
               "blocks": dc.member_labels(),
               "rankVector": [r if r is not None else None for r in ranks]}
    lines = [f"right dual of {args.preset} on {X}:"]
    for k, block in enumerate(dc.member_labels()):
        r = ranks[k]
        lines.append(f"  'E_{k}: " + ", ".join(block)
                     + (f"  (rank {r})" if r is not None else "  (rank unknown)"))
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_regular(args) -> int:
    X = parse_space(args.space)
    e = parse_bundle(args.bundle, X)
    p = tuple(int(v) for v in args.at.split(","))
    report = _regularity.is_regular(e, X, p, all_witnesses=args.all_witnesses)
    payload = {"space": str(X), "bundle": format_bundle(e), **report.to_json_dict()}
    text = (f"{format_bundle(e)} on {X} at {p}: "
            + ("regular" if report.regular else f"NOT regular; {report.witnesses[0]}"))
    _emit(args, payload, text)
    return 0 if report.regular else 1


def cmd_reg_index(args) -> int:
    X = parse_space(args.space)
    e = parse_bundle(args.bundle, X)
    t = _regularity.min_balanced_reg(e, X)
    _emit(args, {"space": str(X), "bundle": format_bundle(e), "minBalancedReg": t},
          str(t))
    return 0


def cmd_split(args) -> int:
    X = parse_space(args.space)
    e = parse_bundle(args.bundle, X)
    crit = args.criterion
    if crit == "tpq":
        report = _criteria.tpq_check(e, X, override=args.override_hypotheses,
                                     window_scale=args.window_scale)
    elif crit == "spi":
        report = _criteria.spi_check(e, X, override=args.override_hypotheses,
                                     sum_mode=args.sum_mode, exclusion=args.exclusion,
                                     window_scale=args.window_scale)
    elif crit == "normalized":
        report = _criteria.is_normalized(e, X)
    elif crit == "trivial":
        report = _criteria.trivial_summand_check(e, X)
    elif crit.startswith("char:"):
        j = int(crit.split(":", 1)[1])
        dc = _blocks.right_dual(_blocks.standard_collection(X))
        report = _criteria.characterization_check(
            e, X, j, dc, psi_ranks=_psi_ranks(args.psi_rank),
            exclude_pairing_group=args.exclude_pairing_group)
    else:
        raise BlockcohError(f"unknown criterion {crit!r}")
    payload = {"space": str(X), "bundle": format_bundle(e), **report.to_json_dict()}
    text = (f"{crit} on {format_bundle(e)}: {report.verdict}"
            + (f"; certificate {list(report.certificate)}" if report.holds
               else f"; witness {report.witness}"))
    _emit(args, payload, text)
    return 0 if report.holds else 1


def cmd_restrict(args) -> int:
    X = parse_space(args.space)
    e = parse_bundle(args.bundle, X)
    restricted, newX = restrict_hyperplane(e, X, args.factor)
    payload = {"space": str(X), "bundle": format_bundle(e),
               "restrictedSpace": str(newX), "restricted": format_bundle(restricted)}
    _emit(args, payload, f"{format_bundle(restricted)} on {newX}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blockcoh",
        description="Exact cohomology, block collections, regularity and "
                    "splitting criteria on products of projective spaces and quadrics")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, bundle=True):
        p.add_argument("--space", required=True, help="e.g. P3xQ3")
        if bundle:
            p.add_argument("--bundle", required=True, help="bundle DSL expression")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("cohom", help="cohomology table over a balanced twist range")
    common(p)
    p.add_argument("--range", default="0..0", help="balanced twist range a..b")
    p.set_defaults(func=cmd_cohom)

    p = sub.add_parser("ext", help="ext table between two bundles")
    p.add_argument("--space", required=True)
    p.add_argument("--a", required=True, help="source bundle")
    p.add_argument("--b", required=True, help="target bundle")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_ext)

    p = sub.add_parser("verify", help="verify a preset block collection")
    common(p, bundle=False)
    p.add_argument("--preset", required=True, help="std | dn | sigma:<j>")
    p.add_argument("--all-violations", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dual", help="right dual of a preset collection")
    common(p, bundle=False)
    p.add_argument("--preset", default="std", help="std | dn")
    p.add_argument("--psi-rank", action="append", metavar="j=r")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("regular", help="regularity at an index vector")
    common(p)
    p.add_argument("--at", required=True, help="comma-separated p vector")
    p.add_argument("--all-witnesses", action="store_true")
    p.set_defaults(func=cmd_regular)

    p = sub.add_parser("reg-index", help="minimal balanced regular twist")
    common(p)
    p.set_defaults(func=cmd_reg_index)

    p = sub.add_parser("split", help="splitting / characterization criteria")
    common(p)
    p.add_argument("--criterion", required=True,
                   help="tpq | spi | normalized | trivial | char:<j>")
    p.add_argument("--psi-rank", action="append", metavar="j=r")
    p.add_argument("--override-hypotheses", action="store_true")
    p.add_argument("--sum-mode", choices=("le", "eq"), default="le")
    p.add_argument("--exclusion", choices=("all", "printed"), default="all")
    p.add_argument("--window-scale", type=int, default=1)
    p.add_argument("--exclude-pairing-group", action="store_true")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("restrict", help="restrict to a hyperplane in one factor")
    common(p)
    p.add_argument("--factor", type=int, required=True)
    p.set_defaults(func=cmd_restrict)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except BlockcohError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
