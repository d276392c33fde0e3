"""Benchmark harness: problem files, runs, bound certification, CSV output.

Config files are TOML.  A problem document holds ``[model]``, optional
``[model.data]``, ``[prox]``, ``[feasible_set]`` and ``[errors]`` sections;
a benchmark document adds ``[run]`` and may either inline the problem
sections or point at a separate file via the top-level ``problem`` key.
Unknown keys are rejected.
"""

from __future__ import annotations

import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .config import TOL
from .errors import ConfigError, RejectedInput
from .fgm import FgmConfig, check_sequence_growth, fgm_bound, fgm_bound_curve, fgm_run
from .gd import GdConfig, gd_bound, gd_bound_curve, gd_run
from .models import DeltaPerturbedModel, bregman_radius_sq, frank_wolfe_deltatilde, make_universal_schedule
from .problems import Problem, build_problem
from .subproblem import AutoPolicy, LmoPolicy, PerturbedPolicy
from .trace import CSV_FIELDS, RunTrace, TraceRow

_RUN_KEYS = {
    "method", "iters", "l0", "seed", "out", "delta", "delta_tilde",
    "delta_schedule", "universal_eps", "solver", "store_iterates", "stop_gap",
}
_MODEL_KEYS = {"kind", "dimension", "seed", "l_max", "lam", "declared_l0", "set",
               "inner_delta", "inject", "l_smooth", "weight", "m"}
_MODEL_DATA_KEYS = {"matrix", "matrix_csv", "linear", "linear_csv", "rhs", "rhs_csv"}
_PROX_KEYS = {"kind", "weights"}
_SET_KEYS = {"kind", "lower", "upper", "center", "radius", "scale"}
_ERROR_KEYS = {"delta", "delta_tilde", "delta_schedule", "universal_eps"}


@dataclass
class BenchmarkConfig:
    problem: Problem
    method: str = "both"           # gd | fgm | both
    n_iters: int = 100
    l0: float | None = None        # default: problem's l_true
    seed: int = 0
    delta: float = 0.0             # constant injected model error
    delta_tilde: float = 0.0       # constant injected subproblem error
    delta_schedule: str = "constant"   # constant | universal
    universal_eps: float = 1e-2
    solver: str = "auto"           # auto | lmo
    out_dir: Path | None = None
    store_iterates: bool = False
    stop_gap: float | None = None

    def __post_init__(self):
        if self.method not in ("gd", "fgm", "both"):
            raise ConfigError(f"method must be gd, fgm or both, got {self.method!r}")
        if self.n_iters < 0:
            raise ConfigError("iters must be nonnegative")
        if self.l0 is not None and self.l0 <= 0:
            raise ConfigError("l0 must be positive")
        if self.delta < 0 or self.delta_tilde < 0:
            raise ConfigError("error injections must be nonnegative")
        if self.delta_schedule not in ("constant", "universal"):
            raise ConfigError(f"unknown delta schedule {self.delta_schedule!r}")
        if self.solver not in ("auto", "lmo"):
            raise ConfigError(f"unknown solver {self.solver!r}")


def _check_keys(table: dict, allowed: set, where: str):
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in [{where}]")


def _load_array(data: dict, key: str, base: Path):
    if key in data:
        return np.asarray(data[key], dtype=float)
    csv_key = f"{key}_csv"
    if csv_key in data:
        path = base / data[csv_key]
        if not path.exists():
            raise ConfigError(f"data file {path} not found")
        return np.loadtxt(path, delimiter=",", ndmin=1)
    return None


def parse_problem_tables(doc: dict, base: Path) -> Problem:
    if "model" not in doc:
        raise ConfigError("problem document needs a [model] section")
    model = dict(doc["model"])
    data = model.pop("data", {})
    _check_keys(model, _MODEL_KEYS, "model")
    _check_keys(data, _MODEL_DATA_KEYS, "model.data")
    prox_tab = doc.get("prox", {})
    _check_keys(prox_tab, _PROX_KEYS, "prox")
    set_tab = doc.get("feasible_set", {})
    _check_keys(set_tab, _SET_KEYS, "feasible_set")

    kind = model.pop("kind", None)
    if kind is None:
        raise ConfigError("[model] needs a 'kind'")
    kwargs = {}
    if "dimension" in model:
        kwargs["n"] = int(model.pop("dimension"))
    for key in ("seed", "m"):
        if key in model:
            kwargs[key] = int(model.pop(key))
    for key in ("l_max", "lam", "declared_l0", "inner_delta", "l_smooth", "weight"):
        if key in model:
            kwargs[key] = float(model.pop(key))
    if "inject" in model:
        kwargs["inject"] = bool(model.pop("inject"))
    if "set" in model:
        kwargs["set_kind"] = str(model.pop("set"))
    if set_tab.get("kind"):
        kwargs["set_kind"] = str(set_tab["kind"])
    if prox_tab.get("kind"):
        kwargs["prox_kind"] = str(prox_tab["kind"])
    if prox_tab.get("weights") is not None:
        kwargs["weights"] = np.asarray(prox_tab["weights"], dtype=float)

    matrix = _load_array(data, "matrix", base)
    if matrix is not None:
        kwargs["matrix"] = matrix
    linear = _load_array(data, "linear", base)
    if linear is not None:
        kwargs["linear"] = linear
    rhs = _load_array(data, "rhs", base)
    if rhs is not None:
        kwargs["rhs"] = rhs
    return build_problem(kind, **kwargs)


def load_config(path, overrides: dict | None = None) -> BenchmarkConfig:
    """Parse a benchmark TOML document; CLI flag overrides win over file values."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    try:
        doc = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc

    top_allowed = {"problem", "model", "prox", "feasible_set", "errors", "run"}
    _check_keys({k: v for k, v in doc.items()}, top_allowed, "top level")

    if "problem" in doc:
        prob_path = path.parent / doc["problem"]
        if not prob_path.exists():
            raise ConfigError(f"problem file {prob_path} not found")
        prob_doc = tomllib.loads(prob_path.read_text(encoding="utf-8"))
        _check_keys(prob_doc, {"model", "prox", "feasible_set", "errors"}, "problem file")
        problem = parse_problem_tables(prob_doc, prob_path.parent)
        errors = prob_doc.get("errors", {})
    else:
        problem = parse_problem_tables(doc, path.parent)
        errors = doc.get("errors", {})
    _check_keys(errors, _ERROR_KEYS, "errors")

    run = dict(doc.get("run", {}))
    _check_keys(run, _RUN_KEYS, "run")
    merged = {
        "method": run.get("method", "both"),
        "n_iters": int(run.get("iters", 100)),
        "l0": float(run["l0"]) if "l0" in run else None,
        "seed": int(run.get("seed", 0)),
        "delta": float(run.get("delta", errors.get("delta", 0.0))),
        "delta_tilde": float(run.get("delta_tilde", errors.get("delta_tilde", 0.0))),
        "delta_schedule": str(run.get("delta_schedule", errors.get("delta_schedule", "constant"))),
        "universal_eps": float(run.get("universal_eps", errors.get("universal_eps", 1e-2))),
        "solver": str(run.get("solver", "auto")),
        "out_dir": Path(run["out"]) if "out" in run else None,
        "store_iterates": bool(run.get("store_iterates", False)),
        "stop_gap": float(run["stop_gap"]) if "stop_gap" in run else None,
    }
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    if merged.get("out_dir") is not None:
        merged["out_dir"] = Path(merged["out_dir"])
    return BenchmarkConfig(problem=problem, **merged)


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------

@dataclass
class BenchmarkResult:
    traces: dict[str, RunTrace]
    summary: dict


def _build_policy(config: BenchmarkConfig):
    if config.solver == "lmo":
        r_q_sq = bregman_radius_sq(config.problem.prox, config.problem.objective.feasible_set)
        return LmoPolicy(frank_wolfe_deltatilde(float(np.sqrt(r_q_sq))))
    if config.delta_tilde > 0.0:
        return PerturbedPolicy(AutoPolicy(), target=config.delta_tilde)
    return AutoPolicy()


def run_benchmark(config: BenchmarkConfig) -> BenchmarkResult:
    """Run the selected methods on the configured problem.

    Deterministic given the config seed: the only randomness is the
    seed-controlled model-error injection.
    """
    prob = config.problem
    l0 = config.l0 if config.l0 is not None else prob.l_true
    oracle = prob.oracle
    if config.delta > 0.0:
        oracle = DeltaPerturbedModel(oracle, config.delta, seed=config.seed)
    policy = _build_policy(config)
    dt_target = config.delta_tilde

    traces: dict[str, RunTrace] = {}
    methods = ("gd", "fgm") if config.method == "both" else (config.method,)
    summary_runs = {}
    for method in methods:
        t0 = time.perf_counter()
        if method == "gd":
            gd_delta = (lambda k: config.universal_eps / 4.0) if config.delta_schedule == "universal" \
                else (lambda k: 0.0)
            cfg = GdConfig(
                x0=prob.x0, n_iters=config.n_iters, l0=l0, prox=prob.prox,
                feasible_set=prob.objective.feasible_set,
                delta_schedule=gd_delta,
                delta_tilde_schedule=lambda k: dt_target,
                policy=policy,
                true_value=prob.objective.true_value,
                known_optimum=prob.objective.known_optimum,
                store_iterates=config.store_iterates,
                stop_gap=config.stop_gap,
            )
            result = gd_run(cfg, oracle)
            trace = result.trace
            final_gap = trace.rows[-1].f_avg - prob.objective.f_star if trace.rows else float("nan")
            realized_bound = gd_bound(max(l0, prob.l_true), prob.r, trace) if trace.rows else float("nan")
        else:
            fgm_delta = make_universal_schedule(config.universal_eps) if config.delta_schedule == "universal" \
                else (lambda k, alpha, big_a: 0.0)
            cfg = FgmConfig(
                x0=prob.x0, n_iters=config.n_iters, l0=l0, prox=prob.prox,
                feasible_set=prob.objective.feasible_set,
                delta_schedule=fgm_delta,
                delta_tilde_schedule=lambda k: dt_target,
                policy=policy,
                true_value=prob.objective.true_value,
                known_optimum=prob.objective.known_optimum,
                store_iterates=config.store_iterates,
                stop_gap=config.stop_gap,
            )
            result = fgm_run(cfg, oracle)
            trace = result.trace
            final_gap = trace.rows[-1].f_point - prob.objective.f_star if trace.rows else float("nan")
            realized_bound = fgm_bound(max(l0, prob.l_true), prob.r, trace) if trace.rows else float("nan")

        trace.meta.update({
            "problem": prob.name,
            "l_true": prob.l_true,
            "r": prob.r,
            "seed": config.seed,
            "delta_injected": config.delta,
            "delta_tilde_injected": config.delta_tilde,
            "solver": config.solver,
        })
        traces[method] = trace
        cert = certify_run(trace, prob.l_true, prob.r) if prob.objective.known_optimum is not None \
            else None
        summary_runs[method] = {
            "iters": trace.n_iters,
            "final_gap": final_gap,
            "realized_bound": realized_bound,
            "certified": None if cert is None else cert.passed,
            "certification": None if cert is None else cert.as_dict(),
            "seconds": time.perf_counter() - t0,
        }

    summary = {
        "problem": prob.name,
        "l_true": prob.l_true,
        "r": prob.r,
        "f_star": prob.objective.f_star,
        "l0": l0,
        "seed": config.seed,
        "delta": config.delta,
        "delta_tilde": config.delta_tilde,
        "delta_schedule": config.delta_schedule,
        "solver": config.solver,
        "runs": summary_runs,
    }
    return BenchmarkResult(traces=traces, summary=summary)


# --------------------------------------------------------------------------
# certification
# --------------------------------------------------------------------------

@dataclass
class CertReport:
    passed: bool
    bound_ok: bool
    l_cap_ok: bool
    a_growth_ok: bool | None    # None = not applicable (gd)
    first_bound_violation: int | None
    first_l_violation: int | None
    first_a_violation: int | None
    max_bound_excess: float

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "bound_ok": self.bound_ok,
            "l_cap_ok": self.l_cap_ok,
            "a_growth_ok": self.a_growth_ok,
            "first_bound_violation": self.first_bound_violation,
            "first_l_violation": self.first_l_violation,
            "first_a_violation": self.first_a_violation,
            "max_bound_excess": self.max_bound_excess,
        }


def certify_run(trace: RunTrace, l_true: float, r: float) -> CertReport:
    """Check the traced run against its guarantees.

    - prefix-wise gap bound (averaged point for gd, final point for fgm);
    - trial-constant cap: accepted L_k <= 2 max(L_0, L);
    - quadratic growth of A_k (fgm only): A_k >= (k+1)^2 / (8 max(L_0, L)).
    """
    f_star = trace.meta.get("f_star")
    if f_star is None:
        raise RejectedInput("certify_run needs a known optimum in the trace metadata")
    l0 = float(trace.meta.get("l0", l_true))
    l_eff = max(l0, l_true)
    slack = TOL.certification_rel * (1.0 + abs(f_star))

    if trace.method == "gd":
        gaps = trace.gaps(averaged=True)
        curve = gd_bound_curve(l_eff, r, trace)
    else:
        gaps = trace.gaps(averaged=False)
        curve = fgm_bound_curve(l_eff, r, trace)
    excess = gaps - curve
    bad = np.where(excess > slack)[0]
    bound_ok = bad.size == 0
    first_bound = int(trace.rows[bad[0]].k) if bad.size else None
    max_excess = float(np.max(excess)) if len(trace.rows) else 0.0

    ls = trace.column("l")
    bad_l = np.where(ls > 2.0 * l_eff * (1.0 + 1e-12))[0]
    l_cap_ok = bad_l.size == 0
    first_l = int(trace.rows[bad_l[0]].k) if bad_l.size else None

    a_growth_ok: bool | None = None
    first_a = None
    if trace.method == "fgm":
        a_growth_ok = True
        for row in trace.rows:
            if row.k >= 1 and row.big_a < (row.k + 1) ** 2 / (8.0 * l_eff) * (1.0 - 1e-9):
                a_growth_ok = False
                first_a = row.k
                break
        # exact-form recheck via the shared helper (no slack) is advisory
        check_sequence_growth(trace, l_eff)

    passed = bound_ok and l_cap_ok and (a_growth_ok is None or a_growth_ok)
    return CertReport(
        passed=passed, bound_ok=bound_ok, l_cap_ok=l_cap_ok, a_growth_ok=a_growth_ok,
        first_bound_violation=first_bound, first_l_violation=first_l,
        first_a_violation=first_a, max_bound_excess=max_excess,
    )


# --------------------------------------------------------------------------
# CSV emission
# --------------------------------------------------------------------------

def _format_value(name: str, value) -> str:
    if name in ("k", "backtracks"):
        return str(int(value))
    return format(float(value), ".17g")


def emit_csv(traces: dict[str, RunTrace], out_dir, basename: str = "trace") -> list[Path]:
    """One CSV per trace (method-tag suffix), UTF-8, LF endings, fixed
    header, floats at 17 significant digits for bit-stable round-trips."""
    if not traces:
        raise RejectedInput("emit_csv needs at least one trace")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for method, trace in traces.items():
        path = out_dir / f"{basename}_{method}.csv"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in trace.rows:
            writer.writerow([_format_value(name, getattr(row, name)) for name in CSV_FIELDS])
        path.write_bytes(buf.getvalue().encode("utf-8"))
        paths.append(path)
    return paths


def read_trace_csv(path, method: str | None = None) -> RunTrace:
    """Parse a file produced by emit_csv back into a RunTrace."""
    path = Path(path)
    if method is None:
        stem = path.stem
        method = stem.rsplit("_", 1)[-1] if "_" in stem else stem
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_FIELDS:
            raise RejectedInput(f"unexpected CSV header in {path}")
        rows = []
        for rec in reader:
            values = dict(zip(CSV_FIELDS, rec))
            rows.append(TraceRow(
                k=int(values["k"]), l=float(values["l"]), alpha=float(values["alpha"]),
                big_a=float(values["big_a"]), backtracks=int(values["backtracks"]),
                delta=float(values["delta"]),
                delta_tilde_target=float(values["delta_tilde_target"]),
                delta_tilde=float(values["delta_tilde"]),
                f_point=float(values["f_point"]), f_avg=float(values["f_avg"]),
                dist_opt=float(values["dist_opt"]),
            ))
    return RunTrace(method=method, rows=rows)


def write_summary(summary: dict, out_dir) -> Path:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / "summary.json"
    path.write_text(json.dumps(summary, indent=2, sort_keys=True, default=float) + "\n",
                    encoding="utf-8")
    return path
