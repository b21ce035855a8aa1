"""Command-line front end.

Exit status: 0 on success, 1 on runtime or verification failure, 2 on a
usage error (bad flags, out-of-domain parameters).
"""

import argparse
import json
import logging
import sys

import numpy as np

from . import degraded, formats, helper, nondegraded
from . import region as rg
from .core import ChannelParams, DomainError, capacity_awgn, f_delta
from .verify import run_suite

log = logging.getLogger("dirtymac")

BOUNDS = ("thm1", "thm2", "genie", "inner", "cor1", "thm4", "thm5", "prior-deg")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _r1_grid(params, bound, n):
    # bounds without an R1 cap need room up to the full sum capacity
    if bound in ("thm5", "prior-deg"):
        hi = capacity_awgn(params.p1 + params.p2)
    else:
        hi = capacity_awgn(params.p1)
    return rg.default_r1_grid(hi + 0.05, n)


def build_region(params, bound, grid=rg.DEFAULT_GRID):
    r1_grid = _r1_grid(params, bound, grid)
    if bound == "thm1":
        return nondegraded.thm1_region(params, r1_grid=r1_grid)
    if bound == "thm2":
        return nondegraded.thm2_region(params, r1_grid=r1_grid)
    if bound == "genie":
        return nondegraded.genie_outer_region(params, r1_grid=r1_grid)
    if bound == "inner":
        return nondegraded.inner_region_nondeg(params, r1_grid=r1_grid)
    if bound == "cor1":
        reg, ok = nondegraded.cor1_region(params, r1_grid=r1_grid)
        reg.meta["applicable"] = ok
        return reg
    if bound == "thm4":
        return degraded.thm4_region(params, r1_grid=r1_grid)
    if bound == "thm5":
        return degraded.thm5_region(params, r1_grid=r1_grid)
    if bound == "prior-deg":
        return degraded.prior_outer_region_deg(params, r1_grid=r1_grid)
    raise UsageError(f"unknown bound {bound!r}")


def scalars_report(params):
    """Every scalar quantity of interest for one parameter set (bits)."""
    sr = nondegraded.sum_rate_capacity(params)
    bottom, top, _ = nondegraded.corner_points(params)
    cond = helper.condition1_check(params)
    hb = helper.helper_best_upper(params)
    return {
        "units": formats.UNITS,
        "C1": capacity_awgn(params.p1),
        "C2": capacity_awgn(params.p2),
        "C_sum": sr.c_sum,
        "rho_star": sr.rho_star,
        "Rbar1": sr.achieving_pair.r1,
        "Rbar2": sr.achieving_pair.r2,
        "R1_th": nondegraded.r1_threshold(params),
        "corner_bottom": [bottom.r1, bottom.r2],
        "corner_top": [top.r1, top.r2],
        "f0": f_delta(params, 0.0)[0],
        "cond1": {"satisfied": cond.satisfied, "witness_alpha": cond.witness_alpha},
        "helper_upper": {"thm6": hb.thm6, "csum": hb.csum, "c2": hb.c2, "best": hb.value,
                         "tag": hb.tag},
    }


def parse_range(text):
    """``start:stop:step`` (inclusive of ``stop`` up to rounding) as an array."""
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"range must look like start:stop:step, got {text!r}") from exc
    if not step > 0:
        raise UsageError("range step must be positive")
    if b < a:
        raise UsageError("range stop must not be below start")
    n = int(np.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(n)


def _params(args):
    if args.p1 is None or args.p2 is None or args.q is None:
        raise UsageError("--p1, --p2 and --q are required")
    try:
        return ChannelParams(args.p1, args.p2, args.q)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def cmd_region(args):
    params = _params(args)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    reg = build_region(params, args.bound, args.grid)
    fmt = args.format or "csv"
    if fmt == "csv":
        text = formats.region_csv(reg)
    elif fmt == "json":
        text = formats.region_json(reg, args.bound, params, args.grid)
    else:
        text = formats.region_svg(reg, f"{args.bound}: P1={params.p1:g}, P2={params.p2:g}, "
                                       f"Q={params.q:g}")
    _emit(text, args.out)
    return EXIT_OK


def cmd_scalars(args):
    if args.format not in (None, "json"):
        raise UsageError("scalars only supports --format json")
    _emit(json.dumps(scalars_report(_params(args)), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_helper_sweep(args):
    if args.p2 is None or args.q is None:
        raise UsageError("--p2 and --q are required")
    if args.format == "svg":
        raise UsageError("helper-sweep supports csv or json")
    p1s = parse_range(args.sweep_p1)
    if p1s[0] < 0:
        raise UsageError("P1 must be nonnegative")
    try:
        rows = [(p1, helper.helper_best_upper(ChannelParams(float(p1), args.p2, args.q)))
                for p1 in p1s]
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        text = formats.sweep_json(rows, args.p2, args.q)
    else:
        text = formats.sweep_csv(rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args):
    results = run_suite(seed=args.seed)
    ok = all(r.ok for r in results)
    doc = {"seed": args.seed, "ok": ok, "checks": [
        {"name": r.name, "ok": bool(r.ok), "seconds": round(r.seconds, 3), "detail": r.detail}
        for r in results]}
    _emit(json.dumps(doc, indent=2, default=float) + "\n", args.out)
    for r in results:
        log.info("%-20s %s (%.2fs)", r.name, "pass" if r.ok else "FAIL", r.seconds)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p1", type=float)
    common.add_argument("--p2", type=float)
    common.add_argument("--q", type=float)
    common.add_argument("--format", choices=("csv", "json", "svg"))
    common.add_argument("--out", help="output file (default: standard output)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="dirtymac", description="Rate-region bounds for the two-user Gaussian dirty MAC.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("region", parents=[common], help="frontier of one bound")
    p.add_argument("--bound", required=True, choices=BOUNDS)
    p.add_argument("--grid", type=int, default=rg.DEFAULT_GRID, help="R1 samples")
    p.set_defaults(func=cmd_region)
    p = sub.add_parser("scalars", parents=[common], help="capacities, corners, thresholds")
    p.set_defaults(func=cmd_scalars)
    p = sub.add_parser("helper-sweep", parents=[common], help="helper upper bounds over P1")
    p.add_argument("--sweep-p1", required=True, metavar="START:STOP:STEP")
    p.set_defaults(func=cmd_helper_sweep)
    p = sub.add_parser("verify", parents=[common], help="run the numerical check suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"dirtymac: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dirtymac: I/O error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ArithmeticError, DomainError, ValueError) as exc:
        print(f"dirtymac: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
