"""Command-line interface.  Exit status: 0 pass, 1 verdict failure, 2 usage error."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .classes import ClassId, check_class
from .compactness import HMNC_TARGETS, compactness_verdict
from .config import FORMATS, RunConfig
from .duals import DUAL_PARTS, check_beta_conditions, dual_membership
from .numerics import (
    HorizonError,
    LambdaHorizonError,
    Verdict,
    cassini_residual,
    fib,
    fib_sum_residual,
    golden_ratio_gap,
    parse_rational,
    render_decimal,
    render_rational,
)
from .report import Report, render
from .selftest import CORRUPTIONS, run_selftest
from .spaces import (
    FbarStream,
    InverseStream,
    Space,
    expand_in_basis,
    fhat_transform,
    membership,
    space_norm,
)
from .specs import SpecError, load_lambda, load_matrix, load_sequence

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _config(args: argparse.Namespace) -> RunConfig:
    try:
        return RunConfig(depth=args.depth, window=args.window, tol=args.tol,
                         threshold=args.threshold, horizon=args.horizon,
                         row_budget=args.row_budget, lam=args.lam, format=args.format)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _holds(v: Verdict) -> bool:
    return v.holds is True


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_fib(args, cfg: RunConfig) -> Report:
    if args.n < 0:
        raise UsageError("n must be >= 0")
    return Report("fib", cfg, {"n": args.n, "f_n": str(fib(args.n))})


def cmd_identities(args, cfg: RunConfig) -> Report:
    lo, hi = args.min, args.max
    if lo < 0 or hi < lo:
        raise UsageError("need 0 <= --min <= --max")
    rows, ok, prev = [], True, None
    for n in range(lo, hi + 1):
        row = {"n": n, "f_n": str(fib(n)),
               "sum_residual": render_rational(fib_sum_residual(n))}
        ok &= fib_sum_residual(n) == 0
        if n >= 1:
            row["cassini_residual"] = render_rational(cassini_residual(n))
            ok &= cassini_residual(n) == 0
            gap = golden_ratio_gap(n)
            row["golden_gap"] = [render_rational(gap.lo), render_rational(gap.hi)]
            row["golden_gap_decimal"] = render_decimal(gap.hi)
            if n >= 3 and prev is not None and not gap.hi < prev.lo:
                ok = False
            prev = gap
        rows.append(row)
    return Report("identities", cfg, {"rows": rows}, ok=bool(ok))


def cmd_transform(args, cfg: RunConfig) -> Report:
    lam = load_lambda(cfg.lam)
    x = load_sequence(args.seq, lam)
    if args.direction == "fhat":
        terms = [fhat_transform(x, n) for n in range(cfg.depth + 1)]
    elif args.direction == "fbar":
        stream = FbarStream(x, lam)
        terms = [stream(n) for n in range(cfg.depth + 1)]
    else:
        stream = InverseStream(x, lam)
        terms = [stream(n) for n in range(cfg.depth + 1)]
    return Report("transform", cfg, {"direction": args.direction,
                                     "terms": [render_rational(t) for t in terms],
                                     "terms_decimal": [render_decimal(t) for t in terms]})


def cmd_member(args, cfg: RunConfig) -> Report:
    lam = load_lambda(cfg.lam)
    x = load_sequence(args.seq, lam)
    space = Space.parse(args.space, args.p)
    v = membership(x, space, lam, cfg.limit_depth, cfg.window, cfg.tol, cfg.threshold)
    return Report("member", cfg, {"space": str(space), "verdict": v.to_json()}, ok=_holds(v))


def cmd_norm(args, cfg: RunConfig) -> Report:
    lam = load_lambda(cfg.lam)
    x = load_sequence(args.seq, lam)
    v = space_norm(x, lam, cfg.depth, cfg.threshold)
    return Report("norm", cfg, {"norm_lower_bound": render_rational(v.value),
                                "verdict": v.to_json()}, ok=_holds(v))


def cmd_basis(args, cfg: RunConfig) -> Report:
    lam = load_lambda(cfg.lam)
    x = load_sequence(args.seq, lam)
    if args.m < 0:
        raise UsageError("m must be >= 0")
    exp = expand_in_basis(x, lam, args.m, args.space, cfg.limit_depth, cfg.window, cfg.tol,
                          cfg.threshold)
    return Report("basis", cfg, exp.to_json(), ok=_holds(exp.verdict))


def cmd_dual(args, cfg: RunConfig) -> Report:
    lam = load_lambda(cfg.lam)
    a = load_sequence(args.seq, lam)
    if args.dual == "all":
        rep = check_beta_conditions(a, lam, cfg.limit_depth, cfg.window, cfg.tol,
                                    cfg.threshold, cfg.horizon)
        return Report("dual", cfg, rep.to_json())
    v = dual_membership(a, lam, args.dual, args.space, cfg.limit_depth, cfg.window, cfg.tol,
                        cfg.threshold, cfg.horizon)
    return Report("dual", cfg, {"dual": args.dual, "space": args.space,
                                "verdict": v.to_json()}, ok=_holds(v))


def cmd_classify(args, cfg: RunConfig) -> Report:
    lam = load_lambda(cfg.lam)
    A = load_matrix(args.matrix, lam)
    cid = ClassId.parse(args.class_id, args.p)
    rep = check_class(A, lam, cid, depth=cfg.limit_depth, window=cfg.window, tol=cfg.tol,
                      threshold=cfg.threshold, horizon=cfg.horizon, row_budget=cfg.row_budget)
    return Report("classify", cfg, rep.to_json(), ok=_holds(rep.overall))


def cmd_compact(args, cfg: RunConfig) -> Report:
    lam = load_lambda(cfg.lam)
    A = load_matrix(args.matrix, lam)
    if args.m_max < 2:
        raise UsageError("--m-max must be >= 2")
    verdict, est = compactness_verdict(A, lam, args.target, range(args.m_max + 1),
                                       cfg.limit_depth, cfg.window, cfg.tol, cfg.threshold,
                                       cfg.horizon)
    hmnc = {"kind": est.kind,
            "lower": None if est.lower is None else render_rational(est.lower),
            "upper": None if est.upper is None else render_rational(est.upper)}
    result = {"target": args.target,
              "tail_norms": [[m, render_rational(v)] for m, v in est.samples],
              "hmnc": hmnc,
              "compact": verdict.holds,
              "verdict": verdict.to_json()}
    return Report("compact", cfg, result, ok=_holds(verdict))


def cmd_selftest(args, cfg: RunConfig) -> Report:
    results = run_selftest(cfg.depth, args.corrupt)
    return Report("selftest", cfg, {"checks": [r.to_json() for r in results]},
                  ok=all(r.passed for r in results))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lambda", dest="lam", default="linear",
                        help="lambda spec: family name, inline JSON or file (default: linear)")
    common.add_argument("--depth", type=int, default=200)
    common.add_argument("--window", type=int, default=16)
    common.add_argument("--tol", type=_rational, default=Fraction(1, 10 ** 6))
    common.add_argument("--threshold", type=_rational, default=Fraction(10 ** 9))
    common.add_argument("--horizon", type=int, default=10, help="subset horizon (<= 16)")
    common.add_argument("--row-budget", type=int, default=32)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", type=Path, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="fibspace", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fib", parents=[common], help="the Fibonacci number f_n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_fib)

    p = sub.add_parser("identities", parents=[common], help="Fibonacci identity residuals")
    p.add_argument("--min", type=int, default=0)
    p.add_argument("--max", type=int, default=100)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("transform", parents=[common], help="first depth+1 transform terms")
    p.add_argument("--seq", required=True)
    p.add_argument("--direction", choices=("fhat", "fbar", "inverse"), default="fbar")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("member", parents=[common], help="membership of a sequence in a space")
    p.add_argument("--seq", required=True)
    p.add_argument("--space", required=True)
    p.add_argument("--p", default=None, help="exponent for lp")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("norm", parents=[common], help="norm lower bound in the weighted space")
    p.add_argument("--seq", required=True)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("basis", parents=[common], help="basis coefficients and residual")
    p.add_argument("--seq", required=True)
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--space", choices=("c0_lambda_fhat", "c_lambda_fhat"),
                   default="c0_lambda_fhat")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("dual", parents=[common], help="dual-set conditions for a sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--dual", choices=("alpha", "beta", "gamma", "all"), default="all")
    p.add_argument("--space", choices=sorted({s for _, s in DUAL_PARTS}),
                   default="c0_lambda_fhat")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("classify", parents=[common], help="class membership of a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--class", dest="class_id", required=True,
                   help='e.g. "c_lambda_fhat->c" or "lp(2)->c0_lambda_fhat"')
    p.add_argument("--p", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("compact", parents=[common], help="tail norms and compactness")
    p.add_argument("--matrix", required=True)
    p.add_argument("--target", choices=tuple(HMNC_TARGETS), required=True)
    p.add_argument("--m-max", type=int, default=16)
    p.set_defaults(func=cmd_compact)

    p = sub.add_parser("selftest", parents=[common], help="run the built-in verification suite")
    p.add_argument("--corrupt", choices=CORRUPTIONS, default=None, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _config(args)
        report = args.func(args, cfg)
    except (UsageError, SpecError, HorizonError, LambdaHorizonError, ValueError) as exc:
        print(f"fibspace {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, cfg.format)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
