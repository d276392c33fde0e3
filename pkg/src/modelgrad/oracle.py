"""The inexact model oracle abstraction.

A model oracle queried at a center ``y`` returns a value ``F_delta(y)`` and
a convex function ``psi(x)`` with ``psi(y) = 0`` such that

    0 <= F(x) - F_delta(y) - psi(x) <= (L / 2) ||x - y||^2 + delta

for every feasible x.  The pair generalizes the gradient linearization:
composite terms, smoothed max-structures and inner-minimization surrogates
all fit the same interface and the methods in :mod:`modelgrad.gd` /
:mod:`modelgrad.fgm` consume them interchangeably.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .config import TOL
from .errors import RejectedInput
from .geometry import NormSpec
from .sets import FeasibleSet


@dataclass(frozen=True)
class ScalarFn:
    """A convex scalar function with a chosen subgradient selection."""

    value: Callable[[float], float]
    subgrad: Callable[[float], float]


@dataclass
class ModelEvaluation:
    """One oracle call: the model of F at ``center``.

    ``psi``/``psi_subgrad`` evaluate the model function and a subgradient in
    its first argument.  ``delta`` is the model's inexactness and ``l_hint``
    a suggested local smoothness constant (advisory; the methods re-validate
    through their exit test).

    Structural hints let subproblem solvers pick closed forms:

    - ``linear_g``: psi(x) = <linear_g, x - center> (plus the l1 term below);
    - ``l1_weight``: adds l1_weight * (||x||_1 - ||center||_1);
    - ``separable_psi``: per-coordinate components summing to psi.
    """

    center: np.ndarray
    f_value: float
    psi: Callable[[np.ndarray], float]
    psi_subgrad: Callable[[np.ndarray], np.ndarray]
    delta: float
    l_hint: float
    linear_g: np.ndarray | None = None
    l1_weight: float = 0.0
    separable_psi: Sequence[ScalarFn] | None = None


class ModelOracle:
    """Base class for model oracles.

    Subclasses implement :meth:`_evaluate`; feasibility checking and the
    shared attributes live here.  Instances are immutable after
    construction and evaluations are re-entrant.
    """

    def __init__(self, norm: NormSpec | None = None, feasible_set: FeasibleSet | None = None):
        self.norm = norm if norm is not None else NormSpec.euclidean()
        self.feasible_set = feasible_set

    def evaluate(self, y, delta_request: float = 0.0) -> ModelEvaluation:
        y = np.asarray(y, dtype=float)
        if delta_request < 0.0:
            raise RejectedInput("delta_request must be nonnegative")
        if self.feasible_set is not None and not self.feasible_set.contains(y):
            raise RejectedInput("oracle queried at an infeasible point")
        return self._evaluate(y, float(delta_request))

    def _evaluate(self, y: np.ndarray, delta_request: float) -> ModelEvaluation:
        raise NotImplementedError


def evaluate_model(oracle: ModelOracle, y, delta_request: float = 0.0) -> ModelEvaluation:
    """Query ``oracle`` at ``y``.

    ``delta_request`` is ignored by exact models; inexactness-controlled
    models (universal, inner-minimization) use it to pick their per-call
    (delta, L) pair.  The returned evaluation's ``delta`` is authoritative.
    """
    return oracle.evaluate(y, delta_request)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Ground-truth description of the optimization problem under test.

    ``true_value`` and ``known_optimum`` exist for verification and
    reporting only; the methods never read them.
    """

    feasible_set: FeasibleSet
    true_value: Callable[[np.ndarray], float] | None = None
    known_optimum: tuple[np.ndarray, float] | None = None

    @property
    def f_star(self) -> float:
        if self.known_optimum is None:
            return float("nan")
        return float(self.known_optimum[1])


@dataclass(frozen=True)
class SandwichReport:
    passed: bool
    max_lower_violation: float
    max_upper_violation: float
    delta: float
    l_true: float
    n_samples: int


def verify_sandwich(
    oracle: ModelOracle,
    objective: ObjectiveSpec,
    l_true: float,
    n_samples: int,
    seed: int,
    delta_request: float = 0.0,
) -> SandwichReport:
    """Sample (x, y) pairs and check the two-sided model inequality.

    Passes iff the lower side never dips below -TOL.sandwich_lower and the
    upper side never exceeds (L/2)||x-y||^2 + delta + TOL.sandwich_upper.
    """
    if objective.true_value is None:
        raise RejectedInput("verify_sandwich needs objective.true_value")
    rng = np.random.default_rng(seed)
    q = objective.feasible_set
    max_low = 0.0
    max_up = 0.0
    delta_seen = 0.0
    for _ in range(n_samples):
        y = q.sample_interior(rng)
        x = q.sample_interior(rng)
        ev = oracle.evaluate(y, delta_request)
        delta_seen = max(delta_seen, ev.delta)
        gap = objective.true_value(x) - ev.f_value - ev.psi(x)
        max_low = max(max_low, -gap)
        overshoot = gap - 0.5 * l_true * oracle.norm.value(x - y) ** 2 - ev.delta
        max_up = max(max_up, overshoot)
    passed = max_low <= TOL.sandwich_lower and max_up <= TOL.sandwich_upper
    return SandwichReport(
        passed=passed,
        max_lower_violation=max_low,
        max_upper_violation=max_up,
        delta=delta_seen,
        l_true=l_true,
        n_samples=n_samples,
    )
