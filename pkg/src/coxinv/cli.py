"""Command-line front end: ``coxinv {basis,restrict,verify,negligible}``.

Exit codes: 0 on success/pass, 1 when a verification suite fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import verify as V
from .errors import CoxinvError, DomainError
from .stiefel import canonical_torsor, evaluate, fingerprint_qs, parse_expr

SUITES = ("reld4", "d4-freeness", "siw0", "h0", "vanishing", "freeness", "fixed-basis", "eq24",
          "generation-dn", "subgroups")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_caps(items: Sequence[str], env: Optional[str] = None) -> V.Caps:
    """Caps from ``COXINV_CAPS="a=1,b=2"`` then ``--cap name=value`` (later wins)."""
    overrides = {}
    pieces = [p for p in (env or "").split(",") if p.strip()] + list(items)
    for piece in pieces:
        name, sep, value = piece.partition("=")
        if not sep:
            raise DomainError(f"cap override {piece!r} is not name=value")
        try:
            overrides[name.strip()] = int(value)
        except ValueError:
            raise DomainError(f"cap {name.strip()!r} needs an integer value") from None
    return V.DEFAULT_CAPS.updated(overrides)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument("--no-minus-one-square", action="store_true", help="do not assume -1 is a square")
    common.add_argument("--no-two-square", action="store_true", help="do not assume 2 is a square")
    common.add_argument("--cap", action="append", default=[], metavar="NAME=VALUE",
                        help=f"override a size cap ({', '.join(V.Caps.names())})")

    p = _Parser(prog="coxinv", description="Mod-2 cohomological invariants of classical Weyl groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("basis", parents=[common], help="list the basis index set")
    b.add_argument("--type", required=True)
    b.add_argument("--rank", type=int, required=True)

    r = sub.add_parser("restrict", parents=[common], help="evaluate an expression on a versal H_q torsor")
    r.add_argument("--type", required=True)
    r.add_argument("--rank", type=int, required=True)
    r.add_argument("--expr", required=True)
    r.add_argument("--q", type=int, default=None)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--type", default=None)
    v.add_argument("--rank", type=int, default=None)
    v.add_argument("--literal-family", action="store_true",
                   help="generation-dn: use the family w_{2r+s-j}*wt_{2j}")
    v.add_argument("--experimental-odd-d", action="store_true", help="allow odd-rank type D fingerprints")

    g = sub.add_parser("negligible", parents=[common], help="decide negligibility for (Z/2)^n")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--poly", required=True)
    return p


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"suite {args.suite} needs --{' --'.join(missing)}")


def run_suite(args, caps: V.Caps) -> V.VerificationReport:
    flags = (not args.no_minus_one_square, not args.no_two_square)
    s = args.suite
    if s == "reld4":
        return V.verify_reld4()
    if s == "d4-freeness":
        return V.verify_d4_basis_freeness()
    if s == "freeness":
        _need(args, "type", "rank")
        return V.verify_freeness(args.type, args.rank, *flags, caps=caps, experimental_odd_d=args.experimental_odd_d)
    _need(args, "rank")
    if s == "vanishing":
        return V.verify_vanishing(args.rank, *flags, caps=caps)
    if s == "h0":
        return V.verify_h0(args.rank, *flags, caps=caps)
    if s == "siw0":
        return V.verify_siw0(args.rank, caps=caps)
    if s == "eq24":
        return V.verify_eq24(args.rank, caps=caps)
    if s == "generation-dn":
        return V.verify_generation_Dn(args.rank, caps=caps, literal=args.literal_family)
    _need(args, "type")
    if s == "fixed-basis":
        t = args.type.upper()
        kind = {"B": "B-H0", "C": "B-H0", "D": "D-Hm"}.get(t, args.type)
        return V.verify_fixed_basis(kind, args.rank, caps=caps)
    return V.verify_subgroups(args.type, args.rank, caps=caps)


def _text_report(rep: V.VerificationReport) -> str:
    d = rep.to_dict()
    lines = [
        f"suite: {rep.suite}",
        f"result: {'PASS' if rep.passed else 'FAIL'}",
        "params: " + json.dumps(d["params"], sort_keys=True),
        f"flags: minus_one_square={rep.minus_one_square} two_square={rep.two_square}",
        "witness: " + json.dumps(d["witness"], sort_keys=True, ensure_ascii=False),
        f"elapsed_ms: {rep.elapsed_ms}",
    ]
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    out = sys.stdout
    try:
        args = parser.parse_args(argv)
        caps = parse_caps(args.cap, os.environ.get("COXINV_CAPS"))
        flags = (not args.no_minus_one_square, not args.no_two_square)
        if args.command == "basis":
            bis = V.basis_index_set(args.type, args.rank)
            if args.json:
                print(_dump({"type": bis.type, "rank": bis.n, "basis": bis.render(), "count": len(bis)}), file=out)
            else:
                for item in bis.render():
                    print(item, file=out)
                print(f"count: {len(bis)}", file=out)
            return EXIT_PASS
        if args.command == "restrict":
            expr = parse_expr(args.expr, args.type, args.rank)
            qs = fingerprint_qs(expr.type, expr.n)
            q = args.q if args.q is not None else qs[-1]
            if q not in qs:
                raise DomainError(f"q must be one of {list(qs)} for {expr.type}{expr.n}")
            T = canonical_torsor(expr.type, expr.n, q, *flags)
            value = evaluate(expr, T)
            if args.json:
                print(_dump({"type": expr.type, "rank": expr.n, "q": q, "expr": str(expr), "torsor": str(T),
                             "value": str(value)}), file=out)
            else:
                print(value, file=out)
            return EXIT_PASS
        if args.command == "negligible":
            poly = V.parse_poly(args.poly, args.n)
            ans = V.negligible_2elementary(poly)
            if args.json:
                print(_dump({"n": args.n, "poly": str(poly), "negligible": ans}), file=out)
            else:
                print("true" if ans else "false", file=out)
            return EXIT_PASS
        rep = run_suite(args, caps)
        print(_dump(rep.to_dict()) if args.json else _text_report(rep), file=out)
        return EXIT_PASS if rep.passed else EXIT_FAIL
    except (UsageError, CoxinvError) as exc:
        print(f"coxinv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
