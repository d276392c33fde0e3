"""Adaptive fast gradient method over a model oracle.

Three coupled sequences: u collects the proximal steps, x the convex
combinations, y the extrapolation centers where the oracle is queried.
The per-step weight alpha solves ``L alpha^2 = A + alpha`` (largest root),
so A grows quadratically and the guaranteed rate is ``8 L R^2 / (N+1)^2``
plus accumulated errors (:func:`fgm_bound`).  Within one backtracking loop
everything that depends on the trial constant (alpha, A, y, the model
evaluation and the per-step inexactness) is recomputed from scratch.
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


def _zero_schedule(k: int, alpha: float, big_a: float) -> float:
    return 0.0


def _zero_target(k: int) -> float:
    return 0.0


def constant_delta_schedule(c: float):
    return lambda k, alpha, big_a: c


def alpha_largest_root(big_a: float, l_trial: float) -> float:
    """Largest root of ``L alpha^2 - alpha - A = 0``."""
    if l_trial <= 0.0:
        raise RejectedInput("trial constant must be positive")
    if big_a < 0.0:
        raise RejectedInput("A must be nonnegative")
    return (1.0 + np.sqrt(1.0 + 4.0 * l_trial * big_a)) / (2.0 * l_trial)


@dataclass
class FgmConfig:
    x0: np.ndarray
    n_iters: int
    l0: float
    prox: ProxSetup = field(default_factory=euclidean_prox)
    feasible_set: FeasibleSet | None = None
    # delta_request as a function of (k, trial alpha_{k+1}, trial A_{k+1}):
    # schedules like the universal one depend on the trial state, not just k
    delta_schedule: Callable[[int, float, float], float] = _zero_schedule
    delta_tilde_schedule: Callable[[int], float] = _zero_target
    policy: SubproblemPolicy = field(default_factory=AutoPolicy)
    adapt_l: bool = True
    true_value: Callable[[np.ndarray], float] | None = None
    known_optimum: tuple[np.ndarray, float] | None = None
    store_iterates: bool = False
    stop_gap: float | None = None

    def __post_init__(self):
        self.x0 = np.asarray(self.x0, dtype=float)
        if self.l0 <= 0.0:
            raise RejectedInput("l0 must be positive")
        if self.n_iters < 0:
            raise RejectedInput("iteration budget must be nonnegative")
        if self.feasible_set is None:
            self.feasible_set = FeasibleSet.unconstrained(self.x0.size)


@dataclass
class FgmState:
    k: int
    x: np.ndarray
    u: np.ndarray
    big_a: float
    l_trial: float
    trace: RunTrace


@dataclass
class FgmResult:
    trace: RunTrace
    x_final: np.ndarray


def _init_state(config: FgmConfig) -> FgmState:
    trace = RunTrace(method="fgm", meta={
        "l0": config.l0,
        "adapt_l": config.adapt_l,
        "f_star": None if config.known_optimum is None else float(config.known_optimum[1]),
    })
    return FgmState(
        k=0,
        x=config.x0.copy(),
        u=config.x0.copy(),
        big_a=0.0,
        l_trial=config.l0 / 2.0 if config.adapt_l else config.l0,
        trace=trace,
    )


def fgm_step(state: FgmState, oracle: ModelOracle, config: FgmConfig) -> FgmState:
    """Run one accepted step (with its backtracking loop) in place."""
    t0 = time.perf_counter()
    k = state.k
    delta_tilde_target = config.delta_tilde_schedule(k)

    l_trial = state.l_trial
    backtracks = 0
    while True:
        alpha = alpha_largest_root(state.big_a, l_trial)
        big_a_new = state.big_a + alpha
        y = (alpha * state.u + state.big_a * state.x) / big_a_new
        delta_request = config.delta_schedule(k, alpha, big_a_new)
        ev = oracle.evaluate(y, delta_request)
        delta_k = ev.delta
        cert = config.policy.solve(config.prox, config.feasible_set, state.u, alpha, ev, delta_tilde_target)
        u_new = cert.solution
        x_new = (alpha * u_new + state.big_a * state.x) / big_a_new
        f_new = oracle.evaluate(x_new, delta_request).f_value
        rhs = (ev.f_value + ev.psi(x_new)
               + 0.5 * l_trial * config.prox.norm.value(x_new - y) ** 2 + delta_k)
        if not config.adapt_l or f_new <= rhs + TOL.exit_test_rel * (1.0 + abs(ev.f_value)):
            break
        backtracks += 1
        if backtracks > TOL.backtrack_cap:
            raise ModelViolation(
                f"fgm backtracking exceeded {TOL.backtrack_cap} doublings at step {k}; "
                "the oracle violates its declared model inequality")
        l_trial *= 2.0

    f_point = dist = float("nan")
    if config.true_value is not None:
        f_point = config.true_value(x_new)
    if config.known_optimum is not None:
        dist = float(np.linalg.norm(x_new - np.asarray(config.known_optimum[0], dtype=float)))

    state.trace.rows.append(TraceRow(
        k=k + 1, l=l_trial, alpha=alpha, big_a=big_a_new, backtracks=backtracks,
        delta=delta_k, delta_tilde_target=delta_tilde_target,
        delta_tilde=cert.certified_delta_tilde,
        f_point=f_point, f_avg=float("nan"), dist_opt=dist,
        step_seconds=time.perf_counter() - t0,
    ))
    if config.store_iterates:
        state.trace.xs.append(x_new.copy())
        state.trace.ys.append(y.copy())
        state.trace.us.append(u_new.copy())

    state.x = x_new
    state.u = u_new
    state.big_a = big_a_new
    state.k = k + 1
    state.l_trial = l_trial / 2.0 if config.adapt_l else l_trial
    return state


def fgm_run(config: FgmConfig, oracle: ModelOracle) -> FgmResult:
    state = _init_state(config)
    f_star = config.known_optimum[1] if config.known_optimum is not None else None
    for _ in range(config.n_iters):
        fgm_step(state, oracle, config)
        if config.stop_gap is not None and f_star is not None:
            if state.trace.rows[-1].f_point - f_star <= config.stop_gap:
                break
    return FgmResult(trace=state.trace, x_final=state.x)


def fgm_bound(l: float, r: float, trace: RunTrace) -> float:
    """Guaranteed gap at the traced run's final point:
    ``8 L R^2 / (N+1)^2 + 2 sum delta_k A_{k+1} / A_N
    + 8 L sum delta_tilde_k / (N+1)^2``."""
    n = trace.n_iters
    if n == 0:
        return float("inf")
    big_a = trace.rows[-1].big_a
    sum_da = float(np.sum(trace.column("delta") * trace.column("big_a")))
    sum_dt = float(np.sum(trace.column("delta_tilde")))
    return 8.0 * l * r**2 / (n + 1) ** 2 + 2.0 * sum_da / big_a + 8.0 * l * sum_dt / (n + 1) ** 2


def fgm_bound_curve(l: float, r: float, trace: RunTrace) -> np.ndarray:
    """fgm_bound evaluated at every prefix of the trace."""
    n = trace.n_iters
    ks = np.arange(1, n + 1, dtype=float)
    big_a = trace.column("big_a")
    cum_da = np.cumsum(trace.column("delta") * big_a)
    cum_dt = np.cumsum(trace.column("delta_tilde"))
    return 8.0 * l * r**2 / (ks + 1) ** 2 + 2.0 * cum_da / big_a + 8.0 * l * cum_dt / (ks + 1) ** 2


def check_sequence_growth(trace: RunTrace, l_eff: float) -> bool:
    """True iff ``A_k >= (k+1)^2 / (8 l_eff)`` for every k >= 1 in the trace."""
    for row in trace.rows:
        if row.k >= 1 and row.big_a < (row.k + 1) ** 2 / (8.0 * l_eff):
            return False
    return True
