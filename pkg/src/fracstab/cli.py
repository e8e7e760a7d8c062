"""Command-line front end: evaluation, classification, solving, constants, audit.

Inputs are JSON files (system and initial-data schemas documented in the
README), outputs are JSON on stdout and CSV trajectories/margin curves on
disk.  Numeric results are never conveyed through exit codes alone; the codes
only classify the outcome:

  0 success                    5 no acceptable similarity transform
  1 argument or input parse    6 trajectory blow-up (escape time on stderr)
  2 evaluation non-convergence 7 contraction/hypothesis failure
  3 stability inconclusive     8 audited quantity did not settle
  4 unstable mode present
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    Blowup,
    ContractionFailed,
    HypothesisFailed,
    IllConditioned,
    NonConvergence,
    Unstabilized,
)
from .flaw_audit import audit
from .mittag_leffler import MLParams, evaluate
from .perron import build_constants, iterate_perron
from .solvers import solve_pc, solve_voc
from .stability import (
    ASYMPTOTICALLY_STABLE,
    HAS_UNSTABLE_MODE,
    FractionalOrder,
    classify,
)
from .systems import InitialData, SystemSpec

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_NONCONVERGENCE = 2
EXIT_INCONCLUSIVE = 3
EXIT_UNSTABLE = 4
EXIT_ILL_CONDITIONED = 5
EXIT_BLOWUP = 6
EXIT_CONTRACTION = 7
EXIT_UNSTABILIZED = 8


class CLIParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIParseError(message)


def _emit(payload: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)


def cmd_ml(args) -> int:
    p = MLParams(args.alpha, args.beta)
    r = evaluate(p, complex(args.re, args.im), tol=args.tol)
    _emit(
        json.dumps(
            {
                "re": r.value.real,
                "im": r.value.imag,
                "abs_error_estimate": r.abs_error_estimate,
                "regime": r.regime,
            }
        ),
        None,
    )
    return EXIT_OK


def cmd_stability(args) -> int:
    spec = SystemSpec.from_json(args.system)
    report = classify(spec.A, spec.order)
    _emit(report.to_json(), args.out)
    if report.overall == ASYMPTOTICALLY_STABLE:
        return EXIT_OK
    if report.overall == HAS_UNSTABLE_MODE:
        return EXIT_UNSTABLE
    return EXIT_INCONCLUSIVE


def cmd_solve(args) -> int:
    spec = SystemSpec.from_json(args.system)
    init = InitialData.from_json(args.init)
    if args.method == "pc":
        traj = solve_pc(spec, init, args.h, args.t_end)
    elif args.method == "voc":
        traj = solve_voc(spec, init, args.h, args.t_end)
    else:
        pc = build_constants(spec)
        traj = iterate_perron(spec, init, pc, args.h, args.t_end, args.iters)
    traj.write_csv(args.out)
    print(json.dumps({"method": traj.method, "points": len(traj.times), "out": args.out}))
    return EXIT_OK


def cmd_constants(args) -> int:
    spec = SystemSpec.from_json(args.system)
    pc = build_constants(spec, t_max=args.t_max, h=args.quad_h)
    _emit(pc.to_json(), args.out)
    return EXIT_OK


def cmd_audit(args) -> int:
    report = audit(args.alpha, args.lam, t_max=args.t_max)
    if args.out:
        _emit(report.to_json(include_curve=True), args.out)
    print(report.to_json(include_curve=False))
    if args.margin_csv:
        labels = {0: "beta1", 1: "beta_alpha", 2: "beta2"}
        for i, case in enumerate(report.beta_cases):
            case.write_csv(f"{args.margin_csv}-{labels[i]}.csv")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="fracstab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ml", help="evaluate E_{alpha,beta}(z)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--re", type=float, required=True)
    p.add_argument("--im", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_ml)

    p = sub.add_parser("stability", help="sector classification of a system matrix")
    p.add_argument("--system", required=True, help="system JSON path")
    p.add_argument("--out", default=None, help="write the report JSON here")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("solve", help="integrate the system, write trajectory CSV")
    p.add_argument("--system", required=True)
    p.add_argument("--init", required=True, help="initial-data JSON path")
    p.add_argument("--method", choices=("pc", "voc", "perron"), default="pc")
    p.add_argument("--h", type=float, required=True, help="grid step")
    p.add_argument("--t-end", type=float, required=True, dest="t_end")
    p.add_argument("--iters", type=int, default=30, help="perron iterations")
    p.add_argument("--out", required=True, help="trajectory CSV path")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("constants", help="contraction-constant ledger")
    p.add_argument("--system", required=True)
    p.add_argument("--t-max", type=float, default=200.0, dest="t_max")
    p.add_argument("--quad-h", type=float, default=0.25, dest="quad_h")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("audit", help="refute exponential Mittag-Leffler bounds")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--t-max", type=float, default=1e3, dest="t_max")
    p.add_argument("--out", default=None, help="full report JSON with curves")
    p.add_argument("--margin-csv", default=None, help="prefix for per-case CSVs")
    p.set_defaults(func=cmd_audit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except CLIParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except NonConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except IllConditioned as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ILL_CONDITIONED
    except Blowup as exc:
        print(f"error: {exc} (escape time {exc.escape_time:.6g})", file=sys.stderr)
        return EXIT_BLOWUP
    except (ContractionFailed, HypothesisFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACTION
    except Unstabilized as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSTABILIZED
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
