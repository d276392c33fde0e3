"""Norms, prox-functions and Bregman divergences.

A :class:`ProxSetup` bundles a norm with a distance-generating function
``d`` that is 1-strongly convex with respect to that norm.  The induced
Bregman divergence ``V(x, y) = d(x) - d(y) - <grad d(y), x - y>`` is the
generalized squared distance appearing in every proximal subproblem.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .config import TOL
from .errors import RejectedInput, UnsupportedCombination


@dataclass(frozen=True)
class NormSpec:
    """A norm on R^n together with its exact dual.

    kind is one of ``"euclidean"``, ``"p"`` (exponent in [1, inf]) or
    ``"weighted_euclidean"`` (positive weight vector).
    """

    kind: str = "euclidean"
    p: float = 2.0
    weights: np.ndarray | None = None

    @staticmethod
    def euclidean() -> "NormSpec":
        return NormSpec(kind="euclidean")

    @staticmethod
    def p_norm(p: float) -> "NormSpec":
        if not (p >= 1.0):
            raise UnsupportedCombination(f"p-norm exponent must be >= 1, got {p}")
        return NormSpec(kind="p", p=float(p))

    @staticmethod
    def weighted_euclidean(weights) -> "NormSpec":
        w = np.asarray(weights, dtype=float)
        if np.any(w <= 0.0):
            raise RejectedInput("weighted_euclidean requires strictly positive weights")
        return NormSpec(kind="weighted_euclidean", weights=w)

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if self.kind == "euclidean":
            return float(np.linalg.norm(x))
        if self.kind == "p":
            if np.isinf(self.p):
                return float(np.max(np.abs(x))) if x.size else 0.0
            return float(np.linalg.norm(x, ord=self.p))
        if self.kind == "weighted_euclidean":
            return float(np.sqrt(np.sum(self.weights * x * x)))
        raise UnsupportedCombination(f"unknown norm kind {self.kind!r}")

    def dual_value(self, lam) -> float:
        lam = np.asarray(lam, dtype=float)
        if self.kind == "euclidean":
            return float(np.linalg.norm(lam))
        if self.kind == "p":
            if self.p == 1.0:
                return float(np.max(np.abs(lam))) if lam.size else 0.0
            if np.isinf(self.p):
                return float(np.sum(np.abs(lam)))
            q = self.p / (self.p - 1.0)
            return float(np.linalg.norm(lam, ord=q))
        if self.kind == "weighted_euclidean":
            return float(np.sqrt(np.sum(lam * lam / self.weights)))
        raise UnsupportedCombination(f"unknown norm kind {self.kind!r}")


def dual_norm(spec: NormSpec, lam) -> float:
    """Exact dual norm ``max { <lam, v> : ||v|| <= 1 }``."""
    lam = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(lam)):
        raise RejectedInput("dual_norm requires a finite vector")
    return spec.dual_value(lam)


@dataclass(frozen=True)
class ProxSetup:
    """A prox-function ``d`` with its gradient and the norm it is
    1-strongly convex against.

    ``domain_tag`` names the feasible region where ``d`` is valid
    ("any", "simplex_interior", ...); solvers use it to route closed forms.
    """

    norm: NormSpec
    d: Callable[[np.ndarray], float]
    grad_d: Callable[[np.ndarray], np.ndarray]
    domain_tag: str = "any"
    kind: str = "custom"
    weights: np.ndarray | None = field(default=None, compare=False)


def euclidean_prox() -> ProxSetup:
    """d(x) = 0.5 ||x||_2^2, the default geometry."""
    return ProxSetup(
        norm=NormSpec.euclidean(),
        d=lambda x: 0.5 * float(np.dot(x, x)),
        grad_d=lambda x: np.asarray(x, dtype=float),
        domain_tag="any",
        kind="euclidean",
    )


def weighted_euclidean_prox(weights) -> ProxSetup:
    """d(x) = 0.5 sum_i w_i x_i^2 with w_i >= 1.

    The weight floor keeps d 1-strongly convex with respect to the plain
    Euclidean norm, so methods can keep using the unweighted exit test.
    """
    w = np.asarray(weights, dtype=float)
    if np.any(w < 1.0):
        raise RejectedInput("weighted Euclidean prox requires weights >= 1")
    return ProxSetup(
        norm=NormSpec.euclidean(),
        d=lambda x: 0.5 * float(np.sum(w * np.asarray(x) ** 2)),
        grad_d=lambda x: w * np.asarray(x, dtype=float),
        domain_tag="any",
        kind="weighted_euclidean",
        weights=w,
    )


def _clip_interior(x: np.ndarray) -> np.ndarray:
    return np.maximum(np.asarray(x, dtype=float), TOL.entropy_floor)


def entropy_prox() -> ProxSetup:
    """Negative entropy d(x) = sum_i x_i ln x_i on the unit simplex.

    1-strongly convex with respect to the l1 norm on the simplex interior
    (Pinsker).  Arguments of ``d`` are clipped to the interior with floor
    ``TOL.entropy_floor``; the gradient rejects nonpositive coordinates.
    """

    def d(x):
        xc = _clip_interior(x)
        return float(np.sum(xc * np.log(xc)))

    def grad_d(x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0.0):
            raise RejectedInput("entropy prox gradient needs strictly positive coordinates")
        return 1.0 + np.log(x)

    return ProxSetup(
        norm=NormSpec.p_norm(1.0),
        d=d,
        grad_d=grad_d,
        domain_tag="simplex_interior",
        kind="entropy",
    )


def bregman_divergence(setup: ProxSetup, x, y) -> float:
    """V(x, y) = d(x) - d(y) - <grad d(y), x - y>; nonnegative up to rounding."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise RejectedInput("bregman_divergence requires same-shape vectors")
    g = setup.grad_d(y)
    return float(setup.d(x) - setup.d(y) - np.dot(g, x - y))


def bregman_grad(setup: ProxSetup, x, y) -> np.ndarray:
    """Gradient of V(., y) at x: grad d(x) - grad d(y)."""
    return np.asarray(setup.grad_d(x), dtype=float) - np.asarray(setup.grad_d(y), dtype=float)


@dataclass(frozen=True)
class ConvexityReport:
    passed: bool
    worst_violation: float
    n_pairs: int


def strong_convexity_probe(setup: ProxSetup, samples) -> ConvexityReport:
    """Check 1-strong convexity of d on sampled pairs.

    Each sample is a pair (x, y); the probe verifies
    ``d(x) >= d(y) + <grad d(y), x - y> + 0.5 ||x - y||^2`` within
    ``TOL.strong_convexity``.
    """
    samples = list(samples)
    if not samples:
        raise RejectedInput("strong_convexity_probe needs at least one sample pair")
    worst = 0.0
    for x, y in samples:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        lhs = setup.d(x)
        rhs = setup.d(y) + float(np.dot(setup.grad_d(y), x - y)) + 0.5 * setup.norm.value(x - y) ** 2
        worst = max(worst, rhs - lhs)
    return ConvexityReport(passed=worst <= TOL.strong_convexity, worst_violation=worst, n_pairs=len(samples))
