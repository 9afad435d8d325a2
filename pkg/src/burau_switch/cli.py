"""Command-line entry point: ``burau-switch verify|sweep|extrema|validate``."""
from __future__ import annotations

import argparse
import math
import sys
import time

from . import __version__
from ._accel import backend_name
from .config import ConfigError, RunConfig, load_config
from .device import PLACEMENTS, gap_test
from .numerics import NotPositiveDefinite
from .sweep import (
    CsvFormatError,
    find_max,
    find_min,
    first_sign_change,
    read_csv,
    run_sweep,
    rows_to_csv,
    svg_plot,
    validate_rows,
)
from .verify import FAULTS, run_checks

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _load(args) -> RunConfig:
    cfg = RunConfig() if args.config is None else load_config(args.config)
    if getattr(args, "placement", None):
        cfg = cfg.with_placement(args.placement)
    if getattr(args, "points", None):
        cfg = cfg.with_points(args.points)
    return cfg


def cmd_verify(args) -> int:
    squier = FAULTS[args.inject_fault]() if args.inject_fault else None
    t0 = time.perf_counter()
    checks = run_checks(squier)
    for c in checks:
        tail = f"  ({c.detail})" if c.detail else ""
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}{tail}")
    ok = all(c.passed for c in checks)
    print(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed in {time.perf_counter() - t0:.3f}s")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    cfg = _load(args)
    out = args.out or cfg.output
    if out is None:
        print("error: no output path (use --out or 'output =' in the config)", file=sys.stderr)
        return EXIT_CONFIG
    rows = run_sweep(cfg, jobs=args.jobs)
    text = rows_to_csv(rows)
    try:
        with open(out, "w", newline="") as fh:
            fh.write(text)
        if args.svg:
            with open(args.svg, "w") as fh:
                fh.write(svg_plot(rows))
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(rows)} rows to {out}")
    return EXIT_OK


def extrema_report(cfg: RunConfig, jobs: int = 1) -> dict[str, object]:
    rows = run_sweep(cfg, jobs=jobs)
    step = cfg.device.grid.step
    report: dict[str, object] = {
        "placement": cfg.placement,
        "w_pre": str(cfg.device.w_pre) or "identity",
        "w_post": str(cfg.device.w_post) or "identity",
        "theta": cfg.device.phase_map.describe(),
        "arc": cfg.arc_mode,
        "grid_points": cfg.device.grid.points,
        "grid_step": step,
        "p_fixed": rows[0].p_fixed,
        "backend": backend_name(),
    }
    gmax = find_max(rows, "gap_switch", step)
    gmin = find_min(rows, "gap_test", step)
    for key, ext in (("gap_switch_max", gmax), ("gap_test_min", gmin)):
        if ext is None:
            report[key] = "nan"
            continue
        report[key] = ext.value
        report[f"{key}_omega"] = ext.omega
        report[f"{key}_omega_uncertainty"] = ext.uncertainty
        report[f"{key}_refined"] = ext.refined

    if cfg.arc_mode == "shortest":
        def f(omega):
            try:
                return gap_test(cfg.device, omega)
            except NotPositiveDefinite:
                return math.nan
    else:
        f = None
    crossing = first_sign_change(rows, "gap_test", f)
    report["gap_test_first_sign_change"] = "none" if crossing is None else crossing
    report["gap_test_changes_sign"] = crossing is not None
    return report


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".10g")
    return str(v)


def cmd_extrema(args) -> int:
    cfg = _load(args)
    for key, value in extrema_report(cfg, jobs=args.jobs).items():
        print(f"{key}={_fmt(value)}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        rows = read_csv(args.csv)
    except OSError as exc:
        print(f"error: cannot read {args.csv}: {exc}", file=sys.stderr)
        return EXIT_IO
    except CsvFormatError as exc:
        print(f"FAIL  {exc}")
        return EXIT_FAIL
    problems = validate_rows(rows)
    for p in problems[:50]:
        print(f"FAIL  {p}")
    if problems:
        print(f"{len(problems)} problem(s) in {len(rows)} rows")
        return EXIT_FAIL
    print(f"PASS  {len(rows)} rows satisfy all row invariants")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="burau-switch", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="exact and numeric identity checks")
    p.add_argument("--inject-fault", choices=sorted(FAULTS), help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="write one CSV row per grid point")
    p.add_argument("--config", help="key = value run file (defaults to the reference experiment)")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--points", type=int, help="override grid.points")
    p.add_argument("--placement", choices=PLACEMENTS)
    p.add_argument("--jobs", type=int, default=1, help="worker threads; output is identical for any value")
    p.add_argument("--svg", help="also write a gap-vs-omega chart")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("extrema", help="witness-gap extrema as key=value lines")
    p.add_argument("--config")
    p.add_argument("--points", type=int)
    p.add_argument("--placement", choices=PLACEMENTS)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_extrema)

    p = sub.add_parser("validate", help="re-check the invariants of a sweep CSV")
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
