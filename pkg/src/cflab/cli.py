"""Command line: verify identities, evaluate fractions, H values, Hyper search, constants."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .cf_engine import CFSpec, eval_cf
from .constants import BASE_CONSTANTS, const_value
from .errors import CFLabError
from .hfun import h_anywhere, plan_ladder
from .petkovsek import Recurrence2, hyper_solve
from .polyparse import PolySyntaxError
from .registry import find_entry, load_registry, reports_json, verify, verify_all, verify_safe


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r} (use p/q or an integer)")


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def cmd_verify(args) -> int:
    entries = load_registry(args.registry, extend_builtin=args.registry is not None)
    if args.id:
        entry = find_entry(entries, args.id)
        rep = verify_safe(entry, args.digits) if args.keep_going else verify(entry, args.digits)
        reports, summary = [rep], {"digits": args.digits, "total": 1, "passed": int(rep.passed),
                                   "failed": [] if rep.passed else [rep.id]}
    else:
        reports, summary = verify_all(entries, args.digits, args.parallel)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status} {r.id:<9} matched {r.matched_digits:>3} digits via {', '.join(r.methods_used) or '-'}"
        if r.error:
            line += f"  error: {r.error}"
        print(line)
        for a in r.anomalies:
            print(f"     {a}")
    print(f"{summary['passed']}/{summary['total']} passed at {args.digits} digits")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(reports_json(reports, summary))
    if not args.keep_going and any(r.error for r in reports):
        return 2
    return 0 if summary["passed"] == summary["total"] else 1


def cmd_eval(args) -> int:
    cf = CFSpec.parse(args.a, args.b)
    r = eval_cf(cf, args.digits, max_iter=args.max_iter)
    print(f"{cf} = {r.to_decimal(args.digits)}")
    flag = " (finite)" if r.finite else ""
    print(f"error bound {r.error_bound.to_decimal(3)} after {r.iterations} convergents, {r.decay} decay{flag}")
    return 0


def cmd_h(args) -> int:
    p = (args.alpha, args.beta, args.gamma)
    value = h_anywhere(p, args.digits, route=args.route)
    print(f"H({args.alpha}, {args.beta}; {args.gamma}) = {value.to_decimal(args.digits)}")
    print(f"error bound {value.error_bound.to_decimal(3)}")
    if args.route == "ladder":
        for s in plan_ladder(p, min_steps=1):
            print(f"  step {s.move}: H{s.source} -> H{s.target}")
    return 0


def cmd_hyper(args) -> int:
    cf = CFSpec.parse(args.a, args.b)
    sols = hyper_solve(Recurrence2.from_cf(cf.a, cf.b))
    if not sols:
        print("no hypergeometric solution")
    for t in sols:
        print(f"y(n+1)/y(n) = {t.ratio}    (valid from n = {t.first_valid_index})")
    return 0


def cmd_constants(args) -> int:
    for name in BASE_CONSTANTS:
        print(f"{name:<8} {const_value(name, args.digits).to_decimal(args.digits)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cflab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify catalogued identities")
    who = v.add_mutually_exclusive_group(required=True)
    who.add_argument("--id", help="entry id, e.g. cor2.1")
    who.add_argument("--all", action="store_true")
    v.add_argument("--digits", type=_positive, default=20)
    v.add_argument("--json", metavar="PATH", help="write the report as JSON")
    v.add_argument("--keep-going", action="store_true", help="record errors in the report instead of aborting")
    v.add_argument("--parallel", type=_positive, default=1, metavar="N")
    v.add_argument("--registry", metavar="PATH", help="extra JSON entries overriding/extending the built-ins")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate CF[a, b]")
    e.add_argument("--a", required=True)
    e.add_argument("--b", required=True)
    e.add_argument("--digits", type=_positive, default=20)
    e.add_argument("--max-iter", type=_positive, default=100_000)
    e.set_defaults(func=cmd_eval)

    h = sub.add_parser("h", help="evaluate H(alpha, beta; gamma)")
    h.add_argument("--alpha", type=_rational, required=True)
    h.add_argument("--beta", type=_rational, required=True)
    h.add_argument("--gamma", type=_rational, required=True)
    h.add_argument("--digits", type=_positive, default=20)
    h.add_argument("--route", choices=("auto", "direct", "ladder"), default="auto")
    h.set_defaults(func=cmd_h)

    y = sub.add_parser("hyper", help="hypergeometric solutions of y(n+1) = a(n) y(n) + b(n) y(n-1)")
    y.add_argument("--a", required=True)
    y.add_argument("--b", required=True)
    y.set_defaults(func=cmd_hyper)

    c = sub.add_parser("constants", help="print the base constants")
    c.add_argument("--digits", type=_positive, default=30)
    c.set_defaults(func=cmd_constants)
    return ap


_EXPR_FLAGS = ("--a", "--b", "--alpha", "--beta", "--gamma")


def _glue_expressions(argv: list[str]) -> list[str]:
    """Let ``--b -2n^4`` through: argparse would read the value as an option."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] in _EXPR_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_glue_expressions(argv))
    try:
        return args.func(args)
    except PolySyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CFLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
