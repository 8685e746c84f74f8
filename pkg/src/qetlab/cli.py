"""Command-line interface: ``qetlab sweep | protocol | verify``."""
from __future__ import annotations

import argparse
import os
import sys
from collections import Counter

from . import checks, protocol
from .sweep import QUANTITIES, SweepConfig, format_csv, run_sweep
from .xymodel import ModelParams


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qetlab",
                                     description="Energy teleportation on the two-qubit XY model.")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate quantities on a (T, B) grid and write CSV")
    sw.add_argument("--alpha", type=float, required=True)
    sw.add_argument("--t-min", type=float, default=0.05)
    sw.add_argument("--t-max", type=float, default=2.0)
    sw.add_argument("--t-steps", type=int, default=50)
    sw.add_argument("--b-min", type=float, default=0.05)
    sw.add_argument("--b-max", type=float, default=2.0)
    sw.add_argument("--b-steps", type=int, default=50)
    sw.add_argument("--quantity", action="append", choices=QUANTITIES,
                    help="column to emit; repeat for several (default: extract)")
    sw.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    sw.add_argument("--jobs", type=int, default=None,
                    help="worker processes (default: all CPUs)")

    pr = sub.add_parser("protocol", help="run one protocol and print its energy ledger")
    pr.add_argument("--mode", choices=("thermal", "excited", "qee"), default="thermal")
    pr.add_argument("--b", type=float, required=True)
    pr.add_argument("--alpha", type=float, required=True)
    pr.add_argument("--temp", type=float, default=None)

    ve = sub.add_parser("verify", help="run invariant checks and acceptance criteria")
    ve.add_argument("--tolerance-scale", type=float, default=1.0,
                    help="multiply every tolerance (0 forces failures)")
    ve.add_argument("--jobs", type=int, default=1)
    return parser


def cmd_sweep(args, parser) -> int:
    config = SweepConfig(alpha=args.alpha, t_min=args.t_min, t_max=args.t_max,
                         t_steps=args.t_steps, b_min=args.b_min, b_max=args.b_max,
                         b_steps=args.b_steps, quantities=tuple(args.quantity or ("extract",)),
                         output_path=args.out)
    problems = config.problems()
    if args.jobs is not None and args.jobs < 1:
        problems.append(("--jobs", "must be at least 1"))
    if problems:
        parser.error("; ".join(f"{flag} {msg}" for flag, msg in problems))
    if args.out != "-":
        parent = os.path.dirname(os.path.abspath(args.out))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            parser.error(f"--out: cannot write to {args.out}")
    text = format_csv(config, run_sweep(config, jobs=args.jobs))
    if args.out == "-":
        sys.stdout.write(text)
    else:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            parser.error(f"--out: {exc}")
    return 0


def _emit(pairs):
    for key, value in pairs:
        print(f"{key}={value:.17g}" if isinstance(value, float) else f"{key}={value}")


def cmd_protocol(args, parser) -> int:
    try:
        if args.mode == "thermal":
            if args.temp is None:
                parser.error("--temp is required for --mode thermal")
            params = ModelParams(args.b, args.alpha, args.temp)
        else:
            params = ModelParams(args.b, args.alpha)
    except ValueError as exc:
        parser.error(str(exc))

    if args.mode == "thermal":
        trace = protocol.run_thermal_qet(params)
    elif args.mode == "excited":
        trace = protocol.run_excited_qet(params)
    else:
        if not args.b > args.alpha:
            parser.error(f"--mode qee needs a product ground state, i.e. B > alpha "
                         f"(got --b {args.b}, --alpha {args.alpha})")
        trace, breakdown = protocol.run_product_qee(params)
    _emit([("mode", args.mode), ("B", params.B), ("alpha", params.alpha),
           ("T", params.temperature if params.temperature is not None else "none")])
    _emit(trace.as_dict().items())
    if args.mode == "qee":
        _emit([("site_A", breakdown.e_site_A), ("site_B", breakdown.e_site_B),
               ("interaction", breakdown.e_interaction)])
    return 0


def cmd_verify(args, parser) -> int:
    if args.tolerance_scale < 0:
        parser.error("--tolerance-scale must be non-negative")
    results = []
    for res in checks.run_all(scale=args.tolerance_scale, jobs=args.jobs):
        print(res.line(), flush=True)
        results.append(res)
    passed = Counter(r.module for r in results if r.passed)
    total = Counter(r.module for r in results)
    for module in sorted(total):
        print(f"{module}: {passed[module]}/{total[module]} passed")
    failed = sum(not r.passed for r in results)
    print(f"summary: {len(results) - failed} passed, {failed} failed")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"sweep": cmd_sweep, "protocol": cmd_protocol, "verify": cmd_verify}[args.command]
    return handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
