"""Command-line interface.

    scindex eval  'T[su2](a,b,c)' --limit hl --order 4
    scindex compare EXPRA EXPRB [--permute a:c,c:a] [--map v=mono] ...
    scindex symcheck EXPR --slots a,b,c,d ...
    scindex hl-poly su3 --weight 1,0
    scindex norms su2 --level 2 --order 8
    scindex orbit-hs e6 --order 6

Exit codes: 0 success/equal, 1 mismatch, 2 usage or parse error,
3 resource bound or certified-order failure.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys

from . import lie
from .dsl import ParseError, parse, unparse
from .engine import (LimitKind, eval_expr, group_root_system, minimal_orbit_hs)
from .lie import ResourceLimit
from .series import (CertifiedOrderError, RegularityError, TruncatedSeries,
                     compare_to_order, format_series, permute_vars)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


def _write(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _series_output(args, series: TruncatedSeries, decompose_groups=None) -> str:
    if args.format == "json":
        return json.dumps(series.to_json(), indent=None, separators=(",", ":"),
                          sort_keys=True)
    text = format_series(series)
    if getattr(args, "decompose", False) and decompose_groups:
        lines = [text, "", "character decomposition:"]
        for g in sorted(series.terms, key=lambda g: (series.ring.degree(g), g)):
            labels = decompose_characters(series.terms[g], series.ring, decompose_groups)
            pretty = " + ".join(
                (f"{m}*" if m != 1 else "") + "(" + ",".join(str(l) for l in lab) + ")"
                for lab, m in labels)
            gname = "*".join(f"{v}^{e}" if e != 1 else v
                             for v, e in zip(series.ring.grading_vars, g) if e) or "1"
            lines.append(f"[{gname}] {pretty or '0'}")
        text = "\n".join(lines)
    return text


def decompose_characters(poly: dict, ring, slot_groups: dict, max_steps: int = 20000):
    """Write a Weyl-invariant coefficient as a sum of products of irreducible
    characters, one label tuple per slot, by repeated subtraction of the
    highest surviving monomial's character product."""
    groups = [(name, group_root_system(g)) for name, g in slot_groups.items()]
    work = dict(poly)
    out = []
    steps = 0
    while work:
        steps += 1
        if steps > max_steps:
            raise ResourceLimit("character decomposition did not terminate")
        # highest monomial whose per-slot exponents are all dominant
        best = None
        for e in work:
            lam = tuple(tuple(e[i] for i in ring.slot_range(name)) for name, _ in groups)
            if all(all(x >= 0 for x in l) for l in lam):
                key = (sum(sum(l) for l in lam), e)
                if best is None or key > best[0]:
                    best = (key, e, lam)
        if best is None:
            raise ValueError("coefficient is not a sum of characters "
                             "(no dominant leading monomial)")
        _, e, lam = best
        mult = work[e]
        chars = [lie.irrep_character(rs, l) for (_, rs), l in zip(groups, lam)]
        for combo in itertools.product(*(c.items() for c in chars)):
            exp = [0] * ring.frank
            m = mult
            for (name, _), (w, cmult) in zip(groups, combo):
                for i, x in zip(ring.slot_range(name), w):
                    exp[i] = x
                m *= cmult
            exp = tuple(exp)
            v = work.get(exp, 0) - m
            if v:
                work[exp] = v
            elif exp in work:
                del work[exp]
        out.append((lam, mult))
    return out


def _parse_expr(text: str):
    try:
        return parse(text)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _eval(args, expr):
    limit = LimitKind.parse(args.limit)
    return eval_expr(expr, limit, args.order)


def cmd_eval(args) -> int:
    expr = _parse_expr(args.expr)
    series = _eval(args, expr)
    groups = {name: g for name, g in expr.free_slots().items()
              if g and not g.startswith("u1")}
    _write(args, _series_output(args, series, groups))
    return EXIT_OK


def cmd_compare(args) -> int:
    ea = _parse_expr(args.expr_a)
    eb = _parse_expr(args.expr_b)
    sa = _eval(args, ea)
    sb = _eval(args, eb)
    if args.permute:
        mapping = {}
        for pair in args.permute.split(","):
            src, dst = pair.split(":")
            sa_slot = sa.ring.slot(src.strip())
            sb_slot = sa.ring.slot(dst.strip())
            for v1, v2 in zip(sa_slot.vars, sb_slot.vars):
                mapping[v1] = v2
        sa = permute_vars(sa, mapping)
    if args.map:
        sa = _apply_monomial_maps(sa, args.map)
    if sa.ring != sb.ring:
        print("mismatch: the two expressions live in different rings "
              f"({sa.ring!r} vs {sb.ring!r})", file=sys.stderr)
        return EXIT_MISMATCH
    equal, order, diff = compare_to_order(sa, sb)
    if equal:
        _write(args, f"equal to certified order {order}")
        return EXIT_OK
    g, e, ca, cb = diff
    gname = "*".join(f"{v}^{x}" if x != 1 else v
                     for v, x in zip(sa.ring.grading_vars, g) if x) or "1"
    mono = "*".join(f"{v}^{x}" if x != 1 else v
                    for v, x in zip(sa.ring.flavor_vars, e) if x) or "1"
    _write(args, f"MISMATCH at [{gname}] {mono}: {ca} vs {cb} (order {order})")
    return EXIT_MISMATCH


def _apply_monomial_maps(series, specs):
    from .series import FugacityMap, substitute
    mapping = {v: {v: 1} for v in series.ring.flavor_vars}
    for spec in specs:
        var, mono = spec.split("=", 1)
        image: dict[str, int] = {}
        for factor in mono.split("*"):
            factor = factor.strip()
            if "^" in factor:
                name, e = factor.split("^")
                image[name.strip()] = image.get(name.strip(), 0) + int(e)
            else:
                image[factor] = image.get(factor, 0) + 1
        mapping[var.strip()] = image
    fmap = FugacityMap.build(series.ring, series.ring, mapping)
    return substitute(series, fmap)


def cmd_symcheck(args) -> int:
    expr = _parse_expr(args.expr)
    series = _eval(args, expr)
    slots = [s.strip() for s in args.slots.split(",")]
    ranks = {s: series.ring.slot(s).rank for s in slots}
    if len(set(ranks.values())) != 1:
        print("error: symcheck slots must have equal rank", file=sys.stderr)
        return EXIT_USAGE
    failures = []
    for perm in itertools.permutations(slots):
        mapping = {}
        for src, dst in zip(slots, perm):
            for v1, v2 in zip(series.ring.slot(src).vars, series.ring.slot(dst).vars):
                mapping[v1] = v2
        if permute_vars(series, mapping).terms != series.terms:
            failures.append(perm)
    total = 0
    for perm in itertools.permutations(slots):
        total += 1
    if failures:
        _write(args, f"NOT symmetric: {len(failures)}/{total} permutations fail "
               f"(first: {failures[0]})")
        return EXIT_MISMATCH
    _write(args, f"symmetric under all {total} permutations of {','.join(slots)} "
           f"(order {series.order})")
    return EXIT_OK


def _parse_weight(text: str, rank: int):
    lam = tuple(int(x) for x in text.split(","))
    if len(lam) != rank:
        raise SystemExit(EXIT_USAGE)
    return lam


def cmd_hl_poly(args) -> int:
    rs = group_root_system(args.group)
    lam = _parse_weight(args.weight, rs.rank)
    p = lie.hall_littlewood(rs, lam)
    if args.format == "json":
        data = {"group": args.group, "weight": list(lam),
                "terms": [{"exps": list(e), "t_coeffs": [str(c) for c in tp.c]}
                          for e, tp in sorted(p.terms.items())]}
        _write(args, json.dumps(data, sort_keys=True))
        return EXIT_OK
    lines = [f"P_{lam} of {args.group} (coefficients are polynomials in t):"]
    for e, tp in sorted(p.terms.items()):
        mono = "*".join(f"z{i+1}^{x}" if x != 1 else f"z{i+1}"
                        for i, x in enumerate(e) if x) or "1"
        cs = " + ".join(f"{c}*t^{k}" if k else str(c)
                        for k, c in enumerate(tp.c) if c).replace("t^1", "t")
        lines.append(f"  {mono}: {cs}")
    _write(args, "\n".join(lines))
    return EXIT_OK


def cmd_norms(args) -> int:
    rs = group_root_system(args.group)
    lams = [lam for lam in itertools.product(range(args.level + 1), repeat=rs.rank)]
    lines = []
    ok = True
    for lam in lams:
        for mu in lams:
            inner = lie.hl_inner(rs, lam, mu, args.order)
            if lam == mu:
                norm = inner
                nsq = "norm^2 = " + _tau_text(norm)
                lines.append(f"<P{lam}, P{lam}>: {nsq}")
            elif not inner.is_zero():
                ok = False
                lines.append(f"<P{lam}, P{mu}>: NONZERO {_tau_text(inner)}")
    lines.append("orthogonality: " + ("ok" if ok else "VIOLATED"))
    _write(args, "\n".join(lines))
    return EXIT_OK if ok else EXIT_MISMATCH


def _tau_text(series) -> str:
    parts = []
    for g in sorted(series.terms):
        c = series.terms[g].get((), 0)
        parts.append(f"{c}*tau^{g[0]}" if g[0] else str(c))
    return (" + ".join(parts) or "0") + f"  (to order {series.order})"


def cmd_orbit_hs(args) -> int:
    series = minimal_orbit_hs(args.group, args.order)
    if args.format == "json":
        _write(args, json.dumps(series.to_json(), sort_keys=True))
    else:
        _write(args, _tau_text(series))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scindex",
                                 description="Exact superconformal index engine")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, order_default=4):
        p.add_argument("--limit", default="hl",
                       choices=["full", "macdonald", "schur", "hl"])
        p.add_argument("--order", type=int, default=order_default)
        p.add_argument("--format", default="text", choices=["text", "json"])
        p.add_argument("--out", default=None)

    p = sub.add_parser("eval", help="evaluate a theory expression")
    p.add_argument("expr")
    p.add_argument("--decompose", action="store_true",
                   help="also print coefficients as character sums")
    common(p)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("compare", help="compare two expressions coefficient-wise")
    p.add_argument("expr_a")
    p.add_argument("expr_b")
    p.add_argument("--permute", default=None,
                   help="slot permutation applied to the first series, e.g. a:c,c:a")
    p.add_argument("--map", action="append", default=[],
                   help="monomial reparameterization var=mono, e.g. c1=c1^-1")
    common(p)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("symcheck", help="check invariance under slot permutations")
    p.add_argument("expr")
    p.add_argument("--slots", required=True)
    common(p)
    p.set_defaults(fn=cmd_symcheck)

    p = sub.add_parser("hl-poly", help="print a Hall-Littlewood polynomial")
    p.add_argument("group")
    p.add_argument("--weight", required=True, help="fundamental coords, e.g. 1,0")
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_hl_poly)

    p = sub.add_parser("norms", help="Hall-Littlewood Gram matrix up to a level")
    p.add_argument("group")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_norms)

    p = sub.add_parser("orbit-hs", help="minimal nilpotent orbit Hilbert series")
    p.add_argument("group")
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--format", default="text", choices=["text", "json"])
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_orbit_hs)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except (ParseError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ResourceLimit, CertifiedOrderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (RegularityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
