"""Benchmark command line.

Subcommands:
  run      execute the configured methods, write CSV traces and summary.json
  certify  run, then gate on the convergence-bound certification checks
  plot     read emitted CSVs back and render the gap/bound SVG

Exit codes: 0 success, 2 configuration error, 3 model/oracle error,
4 certification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, InexactnessNotCertified, ModelViolation, OracleError, RejectedInput
from .fgm import fgm_bound_curve
from .gd import gd_bound_curve
from .harness import emit_csv, load_config, read_trace_csv, run_benchmark, write_summary
from .plotting import BoundCurve, emit_plot

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_MODEL = 3
EXIT_CERT = 4


def _add_shared_flags(p: argparse.ArgumentParser):
    p.add_argument("--config", required=True, help="benchmark TOML document")
    p.add_argument("--method", choices=["gd", "fgm", "both"], default=None)
    p.add_argument("--iters", type=int, default=None, metavar="N")
    p.add_argument("--l0", type=float, default=None)
    p.add_argument("--delta", type=float, default=None, help="constant injected model error")
    p.add_argument("--delta-tilde", type=float, default=None, help="constant injected subproblem error")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=None, metavar="DIR")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modelgrad", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "certify"):
        p = sub.add_parser(name)
        _add_shared_flags(p)
    p_plot = sub.add_parser("plot")
    p_plot.add_argument("--out", type=Path, required=True, metavar="DIR",
                        help="directory holding emitted CSVs and summary.json")
    return parser


def _overrides(args) -> dict:
    return {
        "method": args.method,
        "n_iters": args.iters,
        "l0": args.l0,
        "delta": args.delta,
        "delta_tilde": args.delta_tilde,
        "seed": args.seed,
        "out_dir": args.out,
    }


def _run(args, require_certified: bool) -> int:
    try:
        config = load_config(args.config, _overrides(args))
    except (ConfigError, RejectedInput) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        result = run_benchmark(config)
    except (OracleError, ModelViolation, InexactnessNotCertified) as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return EXIT_MODEL

    out_dir = config.out_dir if config.out_dir is not None else Path("results")
    emit_csv(result.traces, out_dir)
    write_summary(result.summary, out_dir)

    failed = []
    for method, run in result.summary["runs"].items():
        gap = run["final_gap"]
        bound = run["realized_bound"]
        cert = run["certified"]
        status = "n/a" if cert is None else ("pass" if cert else "FAIL")
        print(f"{method}: iters={run['iters']} gap={gap:.6e} bound={bound:.6e} certified={status}")
        if cert is False:
            failed.append(method)
    print(f"outputs written to {out_dir}")
    if require_certified and failed:
        print(f"certification failed for: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CERT
    return EXIT_OK


def _plot(args) -> int:
    out_dir = Path(args.out)
    summary_path = out_dir / "summary.json"
    if not summary_path.exists():
        print(f"config error: {summary_path} not found", file=sys.stderr)
        return EXIT_CONFIG
    summary = json.loads(summary_path.read_text(encoding="utf-8"))
    l_eff = max(float(summary["l0"]), float(summary["l_true"]))
    r = float(summary["r"])
    f_star = summary.get("f_star")

    traces = {}
    bounds = []
    for csv_path in sorted(out_dir.glob("trace_*.csv")):
        trace = read_trace_csv(csv_path)
        trace.meta["f_star"] = f_star
        traces[trace.method] = trace
        ks = trace.column("k")
        if trace.method == "gd":
            bounds.append(BoundCurve("gd bound", ks, gd_bound_curve(l_eff, r, trace)))
        elif trace.method == "fgm":
            bounds.append(BoundCurve("fgm bound", ks, fgm_bound_curve(l_eff, r, trace)))
    if not traces:
        print(f"config error: no trace CSVs in {out_dir}", file=sys.stderr)
        return EXIT_CONFIG
    path = emit_plot(traces, bounds, out_dir / "plot.svg")
    print(f"plot written to {path}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return _run(args, require_certified=False)
    if args.command == "certify":
        return _run(args, require_certified=True)
    return _plot(args)


if __name__ == "__main__":
    raise SystemExit(main())
