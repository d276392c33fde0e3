"""Adaptive gradient method over a model oracle.

Each step minimizes ``V(x, x_k) + alpha * psi(x)`` inexactly, then checks
the model exit inequality at the candidate; the trial constant doubles on
rejection and halves after every accepted step.  The guaranteed rate for
the alpha-averaged point is ``2 L R^2 / N`` plus the accumulated model and
subproblem errors; :func:`gd_bound` evaluates that guarantee from a trace.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import TOL
from .errors import ModelViolation, RejectedInput
from .geometry import ProxSetup, euclidean_prox
from .oracle import ModelOracle
from .sets import FeasibleSet
from .subproblem import AutoPolicy, SubproblemPolicy
from .trace import RunTrace, TraceRow


def _zero_schedule(k: int) -> float:
    return 0.0


@dataclass
class GdConfig:
    x0: np.ndarray
    n_iters: int
    l0: float
    prox: ProxSetup = field(default_factory=euclidean_prox)
    feasible_set: FeasibleSet | None = None
    delta_schedule: Callable[[int], float] = _zero_schedule          # delta_request per step
    delta_tilde_schedule: Callable[[int], float] = _zero_schedule    # subproblem target per step
    policy: SubproblemPolicy = field(default_factory=AutoPolicy)
    adapt_l: bool = True          # False: keep L fixed at l0 (proximal-point regime)
    true_value: Callable[[np.ndarray], float] | None = None
    known_optimum: tuple[np.ndarray, float] | None = None
    store_iterates: bool = False
    stop_gap: float | None = None  # early stop once the known-optimum gap drops below

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float)
        if self.l0 <= 0.0:
            raise RejectedInput("l0 must be positive")
        if self.n_iters < 0:
            raise RejectedInput("iteration budget must be nonnegative")
        if self.feasible_set is None:
            self.feasible_set = FeasibleSet.unconstrained(self.x0.size)


@dataclass
class GdState:
    k: int
    x: np.ndarray
    l_trial: float               # constant the next step starts from
    big_a: float
    weighted_sum: np.ndarray
    trace: RunTrace


@dataclass
class GdResult:
    trace: RunTrace
    x_final: np.ndarray
    x_avg: np.ndarray


def _init_state(config: GdConfig) -> GdState:
    trace = RunTrace(method="gd", meta={
        "l0": config.l0,
        "adapt_l": config.adapt_l,
        "f_star": None if config.known_optimum is None else float(config.known_optimum[1]),
    })
    return GdState(
        k=0,
        x=config.x0.copy(),
        l_trial=config.l0 / 2.0 if config.adapt_l else config.l0,
        big_a=0.0,
        weighted_sum=np.zeros_like(config.x0),
        trace=trace,
    )


def gd_step(state: GdState, oracle: ModelOracle, config: GdConfig) -> GdState:
    """Run one accepted step (including its backtracking loop) in place."""
    t0 = time.perf_counter()
    k = state.k
    delta_request = config.delta_schedule(k)
    delta_tilde_target = config.delta_tilde_schedule(k)
    ev = oracle.evaluate(state.x, delta_request)
    delta_k = ev.delta

    l_trial = state.l_trial
    backtracks = 0
    while True:
        alpha = 1.0 / l_trial
        cert = config.policy.solve(config.prox, config.feasible_set, state.x, alpha, ev, delta_tilde_target)
        x_new = cert.solution
        f_new = oracle.evaluate(x_new, delta_request).f_value
        rhs = (ev.f_value + ev.psi(x_new)
               + 0.5 * l_trial * config.prox.norm.value(x_new - state.x) ** 2 + delta_k)
        if not config.adapt_l or f_new <= rhs + TOL.exit_test_rel * (1.0 + abs(ev.f_value)):
            break
        backtracks += 1
        if backtracks > TOL.backtrack_cap:
            raise ModelViolation(
                f"gd backtracking exceeded {TOL.backtrack_cap} doublings at step {k}; "
                "the oracle violates its declared model inequality")
        l_trial *= 2.0

    state.big_a += alpha
    state.weighted_sum += alpha * x_new
    x_avg = state.weighted_sum / state.big_a

    f_point = f_avg = dist = float("nan")
    if config.true_value is not None:
        f_point = config.true_value(x_new)
        f_avg = config.true_value(x_avg)
    if config.known_optimum is not None:
        dist = float(np.linalg.norm(x_new - np.asarray(config.known_optimum[0], dtype=float)))

    state.trace.rows.append(TraceRow(
        k=k + 1, l=l_trial, alpha=alpha, big_a=state.big_a, backtracks=backtracks,
        delta=delta_k, delta_tilde_target=delta_tilde_target,
        delta_tilde=cert.certified_delta_tilde,
        f_point=f_point, f_avg=f_avg, dist_opt=dist,
        step_seconds=time.perf_counter() - t0,
    ))
    if config.store_iterates:
        state.trace.xs.append(x_new.copy())
    state.x = x_new
    state.k = k + 1
    state.l_trial = l_trial / 2.0 if config.adapt_l else l_trial
    return state


def gd_run(config: GdConfig, oracle: ModelOracle) -> GdResult:
    """Run N steps (or stop early at ``stop_gap``) and return the trace with
    the alpha-averaged output point."""
    state = _init_state(config)
    f_star = config.known_optimum[1] if config.known_optimum is not None else None
    for _ in range(config.n_iters):
        gd_step(state, oracle, config)
        if config.stop_gap is not None and f_star is not None:
            if state.trace.rows[-1].f_avg - f_star <= config.stop_gap:
                break
    x_avg = state.weighted_sum / state.big_a if state.big_a > 0.0 else config.x0.copy()
    return GdResult(trace=state.trace, x_final=state.x, x_avg=x_avg)


def gd_bound(l: float, r: float, trace: RunTrace) -> float:
    """Guaranteed gap for the averaged point after the traced run:
    ``2 L R^2 / N + (2 L / N) sum delta_tilde_k + (2 / A_N) sum alpha_k delta_k``.
    """
    n = trace.n_iters
    if n == 0:
        return float("inf")
    big_a = trace.rows[-1].big_a
    sum_dt = float(np.sum(trace.column("delta_tilde")))
    sum_ad = float(np.sum(trace.column("alpha") * trace.column("delta")))
    return 2.0 * l * r**2 / n + 2.0 * l * sum_dt / n + 2.0 * sum_ad / big_a


def gd_bound_curve(l: float, r: float, trace: RunTrace) -> np.ndarray:
    """gd_bound evaluated at every prefix of the trace."""
    n = trace.n_iters
    ks = np.arange(1, n + 1, dtype=float)
    big_a = trace.column("big_a")
    cum_dt = np.cumsum(trace.column("delta_tilde"))
    cum_ad = np.cumsum(trace.column("alpha") * trace.column("delta"))
    return 2.0 * l * r**2 / ks + 2.0 * l * cum_dt / ks + 2.0 * cum_ad / big_a
