"""Inexact minimization of ``phi(x) = V(x, z) + alpha * psi(x)`` over a
feasible set, with certificates witnessing the achieved inexactness.

A certificate is a subgradient ``h`` of phi at the reported solution
``x_tilde`` such that ``<h, x - x_tilde> >= -delta_tilde`` for every
feasible x.  For boxes, balls and simplices the smallest valid
``delta_tilde`` is computed exactly through the support function of the
set; for unconstrained problems only ``h = 0`` certifies anything, so
solvers must be exact there.

Witness selection at kinks is deterministic: solvers report the minimal
absolute-value element of the per-coordinate subdifferential bracket, which
reproduces the KKT multiplier at active bounds and an exact zero at
soft-threshold kinks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import TOL
from .errors import InexactnessNotCertified, RejectedInput, UnsupportedCombination
from .geometry import ProxSetup, bregman_divergence, bregman_grad
from .oracle import ModelEvaluation, ScalarFn
from .sets import FeasibleSet


@dataclass
class SubproblemCertificate:
    solution: np.ndarray
    witness_subgradient: np.ndarray
    certified_delta_tilde: float
    method_tag: str


# --------------------------------------------------------------------------
# certification
# --------------------------------------------------------------------------

def certify(x_tilde, h, q: FeasibleSet) -> float:
    """Smallest delta_tilde witnessed by ``h`` at ``x_tilde`` over ``q``:
    ``max(0, -min over x in q of <h, x - x_tilde>)``, computed exactly.

    Unbounded sets require h = 0 (exact stationarity); otherwise the
    minimum is -inf and the input is rejected.
    """
    h = np.asarray(h, dtype=float)
    x_tilde = np.asarray(x_tilde, dtype=float)
    if not q.is_bounded:
        if np.all(h == 0.0):
            return 0.0
        raise RejectedInput("certify over an unbounded set requires an exactly zero witness")
    return max(0.0, -q.support_min(h, x_tilde))


def _certificate_value(x_tilde, h, q: FeasibleSet) -> float:
    """certify() that reports inf instead of raising on unbounded sets."""
    h = np.asarray(h, dtype=float)
    if not q.is_bounded:
        return 0.0 if np.all(h == 0.0) else float("inf")
    return max(0.0, -q.support_min(h, np.asarray(x_tilde, dtype=float)))


def _zero_small_witness(h: np.ndarray, scale: float) -> np.ndarray:
    """Zero out a witness that is stationary up to rounding noise."""
    if float(np.max(np.abs(h), initial=0.0)) <= TOL.zero_witness_rel * max(1.0, scale):
        return np.zeros_like(h)
    return h


def _clamp_zero(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Minimal absolute-value element of the bracket [lo, hi] per coordinate."""
    return np.minimum(np.maximum(lo, 0.0), np.maximum(hi, 0.0)) + np.maximum(np.minimum(hi, 0.0), np.minimum(lo, 0.0))


# --------------------------------------------------------------------------
# closed forms
# --------------------------------------------------------------------------

def solve_euclidean_closed_form(
    alpha: float,
    linear_g,
    z,
    q: FeasibleSet,
    l1_weight: float = 0.0,
) -> SubproblemCertificate:
    """Exact minimizer of ``0.5||x - z||^2 + alpha (<g, x> + w ||x||_1)``.

    Supports unconstrained space and boxes (with or without the l1 term),
    and balls / simplices for the purely linear case.  The certificate is
    exact: the support-function value of the reported witness.
    """
    g = np.asarray(linear_g, dtype=float)
    z = np.asarray(z, dtype=float)
    if alpha < 0.0:
        raise RejectedInput("alpha must be nonnegative")
    a = alpha * g
    b = alpha * float(l1_weight)
    scale = max(1.0, float(np.max(np.abs(z), initial=0.0)), float(np.max(np.abs(a), initial=0.0)))

    if q.kind in ("unconstrained", "box"):
        v = z - a
        x = np.sign(v) * np.maximum(np.abs(v) - b, 0.0) if b > 0.0 else v
        if q.kind == "box":
            x = np.clip(x, q.lower, q.upper)
        # per-coordinate subdifferential bracket of phi at x
        smooth = (x - z) + a
        if b > 0.0:
            s = np.sign(x)
            lo = smooth + b * np.where(s == 0.0, -1.0, s)
            hi = smooth + b * np.where(s == 0.0, 1.0, s)
        else:
            lo = hi = smooth
        h = _clamp_zero(lo, hi)
        if q.kind == "unconstrained":
            h = _zero_small_witness(h, scale)
            if np.any(h != 0.0):
                raise RejectedInput("closed-form solve produced a non-stationary witness")
        return SubproblemCertificate(x, h, _certificate_value(x, h, q), "euclidean_closed_form")

    if b > 0.0:
        raise UnsupportedCombination("l1 term supported only on boxes and unconstrained space")
    if q.kind == "ball":
        x = q.project(z - a)
        h = (x - z) + a
        return SubproblemCertificate(x, h, _certificate_value(x, h, q), "euclidean_closed_form")
    if q.kind == "simplex":
        x = q.project(z - a)
        h = (x - z) + a
        return SubproblemCertificate(x, h, _certificate_value(x, h, q), "euclidean_closed_form")
    raise UnsupportedCombination(f"no Euclidean closed form for set kind {q.kind!r}")


def solve_simplex_entropy(alpha: float, linear_g, z, scale: float = 1.0) -> SubproblemCertificate:
    """Entropy-prox mirror step on the simplex: x_i proportional to
    z_i * exp(-alpha g_i), renormalized.  z must be interior."""
    g = np.asarray(linear_g, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(z <= TOL.entropy_floor):
        raise RejectedInput("entropy step requires z in the simplex interior")
    t = np.log(z) - alpha * g
    t -= np.max(t)
    x = np.exp(t)
    x *= scale / float(np.sum(x))
    floor = TOL.entropy_floor * scale
    if np.any(x < floor):
        x = np.maximum(x, floor)
        x *= scale / float(np.sum(x))
    # stationarity witness: grad_x [V(x, z) + alpha <g, x>] = ln(x/z) + alpha g,
    # constant across coordinates at the exact solution
    h = np.log(x / z) + alpha * g
    q = FeasibleSet.simplex(z.size, scale)
    return SubproblemCertificate(x, h, _certificate_value(x, h, q), "simplex_entropy")


def make_euclidean_v_components(z, weights=None) -> list[ScalarFn]:
    """Per-coordinate components of V for (weighted) Euclidean prox."""
    z = np.asarray(z, dtype=float)
    w = np.ones_like(z) if weights is None else np.asarray(weights, dtype=float)
    comps = []
    for zi, wi in zip(z, w):
        comps.append(ScalarFn(
            value=lambda t, zi=zi, wi=wi: 0.5 * wi * (t - zi) ** 2,
            subgrad=lambda t, zi=zi, wi=wi: wi * (t - zi),
        ))
    return comps


def solve_separable_bisection(
    alpha: float,
    psi_components: Sequence[ScalarFn],
    v_components: Sequence[ScalarFn],
    bounds,
    target_accuracy: float = TOL.bisection_accuracy,
) -> SubproblemCertificate:
    """Coordinate-wise bisection on the subgradient sign of
    ``alpha * psi_i(t) + V_i(t)`` over finite intervals.

    Each coordinate costs O(ln(width / target_accuracy)) subgradient
    evaluations.  The certificate is computed over the box formed by
    ``bounds``; callers minimizing over a larger set must account for that.
    """
    if len(psi_components) != len(v_components):
        raise RejectedInput("psi and V component lists must have equal length")
    bounds = [(float(lo), float(hi)) for lo, hi in bounds]
    if len(bounds) != len(psi_components):
        raise RejectedInput("need one (lo, hi) interval per coordinate")
    n = len(psi_components)
    x = np.empty(n)
    h = np.empty(n)
    for i, (psi_i, v_i) in enumerate(zip(psi_components, v_components)):
        lo, hi = bounds[i]
        if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
            raise RejectedInput("bisection requires finite ordered intervals")

        def df(t, psi_i=psi_i, v_i=v_i):
            return alpha * psi_i.subgrad(t) + v_i.subgrad(t)

        d_lo = df(lo)
        if d_lo >= 0.0:
            x[i], h[i] = lo, d_lo
            continue
        d_hi = df(hi)
        if d_hi <= 0.0:
            x[i], h[i] = hi, d_hi
            continue
        while hi - lo > target_accuracy:
            mid = 0.5 * (lo + hi)
            d_mid = df(mid)
            if d_mid > 0.0:
                hi, d_hi = mid, d_mid
            elif d_mid < 0.0:
                lo, d_lo = mid, d_mid
            else:
                lo = hi = mid
                d_lo = d_hi = 0.0
                break
        x[i] = 0.5 * (lo + hi)
        # bracket [d_lo, d_hi] straddles zero: minimal-norm witness
        h[i] = min(max(d_lo, 0.0), max(d_hi, 0.0)) + max(min(d_hi, 0.0), min(d_lo, 0.0))
    box = FeasibleSet.box([b[0] for b in bounds], [b[1] for b in bounds])
    return SubproblemCertificate(x, h, _certificate_value(x, h, box), "separable_bisection")


def solve_linear_minimization(linear_g, q: FeasibleSet) -> SubproblemCertificate:
    """Exact linear minimization oracle over a compact set.

    The certificate is for the *linear* objective (delta_tilde = 0 at the
    returned vertex).  The conditional-gradient reduction that substitutes
    this oracle for the full Bregman subproblem carries its own fixed
    inexactness 2 R_Q^2; see LmoPolicy and models.frank_wolfe_deltatilde.
    """
    g = np.asarray(linear_g, dtype=float)
    if not q.is_bounded:
        raise RejectedInput("linear minimization needs a compact set")
    x = q.lmo(g)
    return SubproblemCertificate(x, g.copy(), _certificate_value(x, g, q), "lmo")


# --------------------------------------------------------------------------
# generic inner solver
# --------------------------------------------------------------------------

def solve_inner_iterative(
    psi_value,
    psi_subgrad,
    alpha: float,
    z,
    prox: ProxSetup,
    q: FeasibleSet,
    target_delta_tilde: float,
    max_inner_iters: int = 50_000,
    epoch: int = 25,
) -> SubproblemCertificate:
    """Projected-gradient inner loop for ``phi = V(., z) + alpha psi``.

    phi is 1-strongly convex through V, so epochs of backtracked projected
    gradient steps converge linearly for smooth psi; the certificate is
    re-checked at the end of each epoch (restart) and the best witness kept.
    Fails with the best achieved inexactness when the budget runs out.
    """
    z = np.asarray(z, dtype=float)
    entropy_guard = prox.kind == "entropy" and q.kind == "simplex"

    def feasible(x):
        x = q.project(x)
        return q.interior_clip(x) if entropy_guard else x

    def phi(x):
        return bregman_divergence(prox, x, z) + alpha * psi_value(x)

    def dphi(x):
        return bregman_grad(prox, x, z) + alpha * np.asarray(psi_subgrad(x), dtype=float)

    x = feasible(z.copy())
    h = dphi(x)
    scale = max(1.0, float(np.max(np.abs(z), initial=0.0)), alpha * float(np.max(np.abs(h), initial=0.0)))
    if not q.is_bounded:
        h = _zero_small_witness(h, scale)
    best_c = _certificate_value(x, h, q)
    best_x, best_h = x.copy(), h.copy()
    if best_c <= target_delta_tilde:
        return SubproblemCertificate(best_x, best_h, best_c, "inner_iterative")

    lam = 1.0
    iters = 0
    while iters < max_inner_iters:
        for _ in range(epoch):
            g = dphi(x)
            fx = phi(x)
            while True:
                xn = feasible(x - g / lam)
                dx = xn - x
                if phi(xn) <= fx + float(np.dot(g, dx)) + 0.5 * lam * float(np.dot(dx, dx)) + 1e-14 * (1.0 + abs(fx)):
                    break
                lam *= 2.0
                if lam > 1e18:
                    break
            x = xn
            lam = max(lam * 0.5, 1e-12)
            iters += 1
            if iters >= max_inner_iters:
                break
        h = dphi(x)
        if not q.is_bounded:
            h = _zero_small_witness(h, scale)
        c = _certificate_value(x, h, q)
        if c < best_c:
            best_c, best_x, best_h = c, x.copy(), h.copy()
        if best_c <= target_delta_tilde:
            return SubproblemCertificate(best_x, best_h, best_c, "inner_iterative")
    raise InexactnessNotCertified(
        f"inner solver exhausted {max_inner_iters} iterations "
        f"(best delta_tilde {best_c:.3e} > target {target_delta_tilde:.3e})",
        best_delta_tilde=best_c,
    )


# --------------------------------------------------------------------------
# solver policies used by the methods
# --------------------------------------------------------------------------

class SubproblemPolicy:
    """Maps one model evaluation to a solved proximal subproblem."""

    def solve(
        self,
        prox: ProxSetup,
        q: FeasibleSet,
        z: np.ndarray,
        alpha: float,
        ev: ModelEvaluation,
        target_delta_tilde: float,
    ) -> SubproblemCertificate:
        raise NotImplementedError


class AutoPolicy(SubproblemPolicy):
    """Route to the cheapest exact solver the structure allows.

    Linear models with Euclidean prox get closed forms (including the
    soft-threshold composite case); entropy prox on the simplex gets the
    multiplicative update; separable structure falls to bisection; anything
    else runs the generic inner loop at ``generic_target``.
    """

    def __init__(self, bisection_accuracy: float = TOL.bisection_accuracy, generic_target: float = 1e-9,
                 max_inner_iters: int = 50_000):
        self.bisection_accuracy = bisection_accuracy
        self.generic_target = generic_target
        self.max_inner_iters = max_inner_iters

    def solve(self, prox, q, z, alpha, ev, target_delta_tilde):
        g = ev.linear_g
        if g is not None:
            if prox.kind == "euclidean":
                if ev.l1_weight == 0.0 and q.kind in ("unconstrained", "box", "ball", "simplex"):
                    return solve_euclidean_closed_form(alpha, g, z, q)
                if ev.l1_weight > 0.0 and q.kind in ("unconstrained", "box"):
                    return solve_euclidean_closed_form(alpha, g, z, q, l1_weight=ev.l1_weight)
            if prox.kind == "entropy" and q.kind == "simplex" and ev.l1_weight == 0.0:
                return solve_simplex_entropy(alpha, g, z, scale=q.scale)
            if prox.kind == "weighted_euclidean" and q.kind in ("box", "unconstrained"):
                comps = _linear_l1_components(g, ev.l1_weight)
                bounds = _bisection_bounds(q, z, alpha, g, prox)
                return solve_separable_bisection(alpha, comps, make_euclidean_v_components(z, prox.weights),
                                                 bounds, self.bisection_accuracy)
        if ev.separable_psi is not None and prox.kind in ("euclidean", "weighted_euclidean") \
                and q.kind in ("box", "unconstrained"):
            g0 = np.asarray(ev.psi_subgrad(z), dtype=float)
            bounds = _bisection_bounds(q, z, alpha, g0, prox)
            weights = prox.weights if prox.kind == "weighted_euclidean" else None
            return solve_separable_bisection(alpha, ev.separable_psi,
                                             make_euclidean_v_components(z, weights),
                                             bounds, self.bisection_accuracy)
        target = target_delta_tilde if target_delta_tilde > 0.0 else self.generic_target
        return solve_inner_iterative(ev.psi, ev.psi_subgrad, alpha, z, prox, q,
                                     target, max_inner_iters=self.max_inner_iters)


def _linear_l1_components(g: np.ndarray, l1_weight: float) -> list[ScalarFn]:
    comps = []
    for gi in np.asarray(g, dtype=float):
        if l1_weight > 0.0:
            comps.append(ScalarFn(
                value=lambda t, gi=gi, w=l1_weight: gi * t + w * abs(t),
                subgrad=lambda t, gi=gi, w=l1_weight: gi + w * np.sign(t),
            ))
        else:
            comps.append(ScalarFn(value=lambda t, gi=gi: gi * t, subgrad=lambda t, gi=gi: gi))
    return comps


def _bisection_bounds(q: FeasibleSet, z: np.ndarray, alpha: float, g: np.ndarray, prox: ProxSetup):
    if q.kind == "box":
        return list(zip(q.lower, q.upper))
    # strong convexity confines the minimizer to a dual-norm ball around z
    r = 2.0 * alpha * prox.norm.dual_value(g) + 1.0
    return [(zi - r, zi + r) for zi in z]


class LmoPolicy(SubproblemPolicy):
    """Conditional-gradient substitution: solve only the linear part.

    The reported inexactness is the fixed a-priori bound
    ``delta_tilde = 2 R_Q^2`` valid whenever the Bregman divergence is
    bounded by R_Q^2 over Q x Q; the witness is the true subgradient of the
    dropped full objective at the returned vertex.
    """

    def __init__(self, delta_tilde_fw: float):
        if delta_tilde_fw < 0.0:
            raise RejectedInput("Frank-Wolfe delta_tilde must be nonnegative")
        self.delta_tilde_fw = float(delta_tilde_fw)

    def solve(self, prox, q, z, alpha, ev, target_delta_tilde):
        if ev.linear_g is None:
            raise UnsupportedCombination("conditional-gradient substitution needs a linear model")
        base = solve_linear_minimization(ev.linear_g, q)
        x = base.solution
        h = bregman_grad(prox, x, z) + alpha * np.asarray(ev.linear_g, dtype=float)
        return SubproblemCertificate(x, h, self.delta_tilde_fw, "frank_wolfe")


class PerturbedPolicy(SubproblemPolicy):
    """Wrap an exact policy and inject a controlled, honestly certified
    inexactness: the exact solution is dragged toward the set's anchor
    point until the support-function certificate reaches the target."""

    def __init__(self, base: SubproblemPolicy | None = None, target: float = 0.0):
        self.base = base if base is not None else AutoPolicy()
        self.target = float(target)

    def solve(self, prox, q, z, alpha, ev, target_delta_tilde):
        target = target_delta_tilde if target_delta_tilde > 0.0 else self.target
        exact = self.base.solve(prox, q, z, alpha, ev, 0.0)
        if target <= 0.0:
            return exact
        if not q.is_bounded:
            raise RejectedInput("positive delta_tilde injection requires a compact set")

        anchor = _set_anchor(q)
        direction = anchor - exact.solution
        nrm = float(np.linalg.norm(direction))
        if nrm < 1e-14:
            direction = np.zeros_like(exact.solution)
            direction[0] = 1.0
            nrm = 1.0
        direction /= nrm

        def witness_at(x):
            return bregman_grad(prox, x, z) + alpha * np.asarray(ev.psi_subgrad(x), dtype=float)

        def candidate(s):
            x = q.project(exact.solution + s * direction)
            h = witness_at(x)
            return x, h, _certificate_value(x, h, q)

        s_hi = max(q.diameter(), 1e-12)
        x_hi, h_hi, c_hi = candidate(s_hi)
        if c_hi <= target:
            return SubproblemCertificate(x_hi, h_hi, c_hi, "perturbed")
        s_lo = 0.0
        best = exact
        for _ in range(80):
            s = 0.5 * (s_lo + s_hi)
            x, h, c = candidate(s)
            if c <= target:
                best = SubproblemCertificate(x, h, c, "perturbed")
                s_lo = s
                if c >= 0.25 * target:
                    break
            else:
                s_hi = s
        return best


def _set_anchor(q: FeasibleSet) -> np.ndarray:
    if q.kind == "box":
        return 0.5 * (q.lower + q.upper)
    if q.kind == "ball":
        return q.center.copy()
    if q.kind == "simplex":
        return np.full(q.dim, q.scale / q.dim)
    raise UnsupportedCombination(f"no anchor for set kind {q.kind!r}")
