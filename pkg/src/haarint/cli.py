"""Command-line entry point: ``haarint eval | gen | verify | mc``.

Exit codes: 0 when every requested check passes, 1 on a numerical failure,
2 when the problem file does not parse or validate.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import runner, verify
from .haar_mc import RngStream


def _emit(report, output, csv_path):
    text = runner.to_json(report)
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            fh.write(runner.report_csv(report))


def _cmd_eval(args):
    report, code = runner.run_file(args.spec)
    _emit(report, args.output, args.csv)
    if code == 2:
        print(report["error"], file=sys.stderr)
    return code


def _cmd_mc(args):
    try:
        with open(args.spec) as fh:
            data = json.load(fh)
        data["routes"] = ["mc"]
        spec = runner.ProblemSpec.from_dict(data)
    except (OSError, json.JSONDecodeError, runner.SpecError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    report, code = runner.run(spec, mc_samples=args.samples, seed=args.seed)
    _emit(report, args.output, args.csv)
    return code


def _cmd_gen(args):
    if args.n < 1 or args.rho <= 0:
        print("need --n >= 1 and --rho > 0", file=sys.stderr)
        return 2
    M = runner.gen_matrix(args.n, args.rho, RngStream(args.seed, args.stream))
    out = {
        "matrix": [[runner.encode_complex(z) for z in row] for row in M],
        "norm": float(np.linalg.norm(M, 2)),
        "seed": args.seed,
        "stream": args.stream,
    }
    print(json.dumps(out, indent=2))
    return 0


def _cmd_verify(args):
    criteria = None
    if args.criteria:
        criteria = [int(c) for c in args.criteria.split(",")]
        unknown = [c for c in criteria if c not in verify.CRITERIA]
        if unknown:
            print(f"unknown criteria: {unknown}", file=sys.stderr)
            return 2
    report, code = verify.verify_suite(args.level, criteria)
    _emit(report, args.output, args.csv)
    for crit in report["criteria"]:
        status = "PASS" if crit["pass"] else "FAIL"
        print(f"[{status}] criterion {crit['number']}: {crit['title']} ({crit['elapsed']} s)", file=sys.stderr)
    return code


def build_parser():
    p = argparse.ArgumentParser(prog="haarint", description="Unitary group integrals: closed forms, "
                                "character sums and Haar Monte Carlo")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate a problem file on its requested routes")
    e.add_argument("spec")
    e.add_argument("-o", "--output")
    e.add_argument("--csv")
    e.set_defaults(func=_cmd_eval)

    g = sub.add_parser("gen", help="random matrix with a bounded operator norm")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--rho", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--stream", type=int, default=0)
    g.set_defaults(func=_cmd_gen)

    v = sub.add_parser("verify", help="run the acceptance suite")
    v.add_argument("--level", choices=verify.LEVELS, default="quick")
    v.add_argument("--criteria", help="comma-separated criterion numbers (default: all)")
    v.add_argument("-o", "--output")
    v.add_argument("--csv")
    v.set_defaults(func=_cmd_verify)

    m = sub.add_parser("mc", help="Monte Carlo route only, with sample count and seed overrides")
    m.add_argument("spec")
    m.add_argument("--samples", type=int, required=True)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("-o", "--output")
    m.add_argument("--csv")
    m.set_defaults(func=_cmd_mc)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
