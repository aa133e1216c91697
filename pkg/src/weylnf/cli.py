"""Command line driver.

Exit codes: 0 success, 2 parse error, 3 precondition error, 4 the window was
too small, 5 a verified property failed. Failures print a machine-readable
JSON error object.
"""

from __future__ import annotations

import argparse
import json
import sys

from .criterion import BivarPoly, bc_certificate, classify_pair
from .errors import WeylnfError
from .fixtures import named_pair
from .gform import HcpSeries, check_Aqk
from .newton import classify_top_line, e_set, newton_report, render_svg
from .operators import GradedOp, commutator
from .parsing import parse_operator
from .powerform import expand_power, expand_power_oracle, pretty
from .schur import normal_form_report, schur_operator
from .suites import run_all, run_suite


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _emit_op(A: GradedOp, fmt: str):
    if fmt == "json":
        print(_dump(A.to_dict()))
    else:
        print(str(A))


def _pair_from_args(args):
    if getattr(args, "fixture", None):
        return named_pair(args.fixture)
    if not args.p or not args.q:
        raise WeylnfError("either --fixture or both --p and --q are required")
    P = parse_operator(args.p, args.k, args.xcap)
    Q = parse_operator(args.q, args.k, args.xcap)
    return P, Q


def cmd_eval(args) -> int:
    _emit_op(parse_operator(args.expr, args.k, args.xcap), args.format)
    return 0


def cmd_mul(args) -> int:
    A = parse_operator(args.a, args.k, args.xcap)
    B = parse_operator(args.b, args.k, args.xcap)
    _emit_op(A * B, args.format)
    return 0


def cmd_commutator(args) -> int:
    A = parse_operator(args.a, args.k, args.xcap)
    B = parse_operator(args.b, args.k, args.xcap)
    _emit_op(commutator(A, B), args.format)
    return 0


def cmd_schur(args) -> int:
    Q = parse_operator(args.q, args.k, args.xcap)
    sp = schur_operator(Q, depth=args.depth,
                        xcap=args.xcap if args.xcap != 16 else None)
    data = {
        "q": sp.q,
        "depth": sp.depth,
        "xcap": sp.xcap,
        "verified": sp.verified,
        "S": sp.S.to_dict(),
        "Sinv": sp.Sinv.to_dict(),
    }
    print(_dump(data) if args.format == "json" else
          f"S (verified={sp.verified}, depth={sp.depth}):\n{sp.S}")
    return 0


def cmd_normal_form(args) -> int:
    P, Q = _pair_from_args(args)
    res = normal_form_report(P, Q, depth=args.depth)
    data = {
        "k": res.series.k,
        "p": res.series.top_order(),
        "series": res.series.to_dict(),
        "aqk": {"ok": res.aqk.ok, "clause": res.aqk.clause, "detail": res.aqk.detail},
        "belowWindowNonzero": res.below_window_nonzero,
        "schur": {"depth": res.schur.depth, "xcap": res.schur.xcap,
                  "verified": res.schur.verified},
    }
    text = _dump(data)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_newton(args) -> int:
    with open(args.input) as fh:
        data = json.load(fh)
    series = HcpSeries.from_dict(data["series"] if "series" in data else data)
    nd = e_set(series)
    cls = classify_top_line(series) if check_Aqk(
        series, 0, enforce_growth=series.floor is not None).ok else None
    report = newton_report(nd, cls)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(_dump(report) + "\n")
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(render_svg(nd, cls))
    if not args.json_out and not args.svg:
        print(_dump(report))
    return 0


def cmd_classify(args) -> int:
    P, Q = _pair_from_args(args)
    candidate = BivarPoly.from_list(json.loads(args.candidate)) if args.candidate else None
    rep = classify_pair(P, Q, depth=args.depth, wmax=args.wmax, candidate_F=candidate)
    if args.format == "json":
        print(_dump(rep.to_dict()))
    else:
        print(f"commutes: {rep.commutes}")
        print(f"classification: {rep.classification.variant} "
              f"(sigma={rep.classification.sigma}, tentative={rep.classification.tentative})")
        if rep.certificate:
            print(f"certificate: {rep.certificate.poly}")
        print(f"verdict: {rep.verdict}")
    return 0


def cmd_bc_find(args) -> int:
    P, Q = _pair_from_args(args)
    res = bc_certificate(P, Q, wmax=args.wmax, depth=args.depth)
    if args.format == "json":
        if res is None:
            print(_dump({"certificate": None,
                         "note": "no certificate within bounds (bounded evidence only)"}))
        else:
            print(_dump({"certificate": {"poly": res.poly.to_list(),
                                         "text": str(res.poly),
                                         "weight": res.weight,
                                         "reverified": res.reverified}}))
    else:
        print("none" if res is None else str(res.poly))
    return 0


def cmd_expand_power(args) -> int:
    e = expand_power(args.k)
    if args.oracle:
        o = expand_power_oracle(args.k)
        match = e == o
        print(f"(D+L)^{args.k} closed form: {pretty(e)}")
        print(f"(D+L)^{args.k} oracle:      {pretty(o)}")
        print(f"match: {match}")
        if not match:
            raise WeylnfError("closed form and oracle disagree")
    else:
        print(f"(D+L)^{args.k} = {pretty(e)}")
    return 0


def cmd_verify(args) -> int:
    results = (run_all(args.cases, args.seed, args.workers)
               if args.suite == "all"
               else [run_suite(args.suite, args.cases, args.seed, args.workers)])
    bad = False
    for r in results:
        status = "ok" if r.passed else f"FAILED ({len(r.failures)} violations)"
        print(f"suite {r.name}: {r.cases} cases: {status}")
        for f in r.failures[:20]:
            print(f"  {f}")
        bad = bad or not r.passed
    if bad:
        sys.exit(5)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weylnf",
                                 description="exact normal-form calculus for "
                                             "ordinary differential operators")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=None,
                        help="cyclotomic order for xi and G-form literals")
    common.add_argument("--xcap", type=int, default=16,
                        help="x-degree window for infinite expansions")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=1)

    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate and print an operator")
    p.add_argument("expr")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("mul", parents=[common], help="product of two operators")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_mul)

    p = sub.add_parser("commutator", parents=[common], help="[A, B]")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_commutator)

    p = sub.add_parser("schur", parents=[common], help="Schur operator for Q")
    p.add_argument("--q", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_schur)

    p = sub.add_parser("normal-form", parents=[common],
                       help="normal form of P with respect to Q")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--fixture")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", help="write the JSON result to a file")
    p.set_defaults(func=cmd_normal_form)

    p = sub.add_parser("newton", parents=[common],
                       help="Newton region report from a normal-form JSON file")
    p.add_argument("--input", required=True)
    p.add_argument("--svg")
    p.add_argument("--json", dest="json_out")
    p.set_defaults(func=cmd_newton)

    p = sub.add_parser("classify", parents=[common], help="full pipeline on a pair")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--fixture")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--wmax", type=int, default=None)
    p.add_argument("--candidate", help="JSON [[u,v,coeff],...] to tabulate identities")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bc-find", parents=[common],
                       help="search for a Burchnall-Chaundy certificate")
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--fixture")
    p.add_argument("--wmax", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_bc_find)

    p = sub.add_parser("expand-power", help="standard form of (D+L)^k")
    p.add_argument("--k", type=int, required=True,
                   help="the power (this subcommand's --k is the exponent)")
    p.add_argument("--oracle", action="store_true",
                   help="also run the rewriting oracle and compare")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_expand_power)

    p = sub.add_parser("verify", parents=[common], help="run the property suites")
    p.add_argument("--suite", choices=("appendix", "filtration", "powerform", "all"),
                   required=True)
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args) or 0
    except WeylnfError as exc:
        payload = {"error": {"kind": type(exc).__name__,
                             "message": str(exc),
                             "code": exc.exit_code}}
        if hasattr(exc, "required") and exc.required:
            payload["error"]["required"] = exc.required
        print(json.dumps(payload, sort_keys=True))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
