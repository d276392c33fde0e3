"""Concrete model-oracle families.

Every class here implements :class:`modelgrad.oracle.ModelOracle`: plain
smooth linearization, the universal model for Holder-continuous gradients,
composite objectives, the proximal-point model, superpositions of smooth
functions, and the three inner-minimization constructions (min-min,
saddle-point smoothing, Moreau envelope).  Module functions cover the
derived quantities: the effective constant L(delta), the per-step
inexactness schedule of the universal method, its iteration bound, and the
fixed subproblem inexactness of the conditional-gradient reduction.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Callable, Sequence

import numpy as np

from .config import TOL
from .errors import OracleError, RejectedInput, UnsupportedCombination
from .geometry import NormSpec, ProxSetup
from .oracle import ModelEvaluation, ModelOracle, ScalarFn
from .sets import FeasibleSet
from .subproblem import _certificate_value


# --------------------------------------------------------------------------
# smooth / universal / composite / prox-point / superposition
# --------------------------------------------------------------------------

class SmoothModel(ModelOracle):
    """Gradient linearization of an L-smooth convex function (exact model)."""

    def __init__(self, value, grad, l_true: float, norm: NormSpec | None = None,
                 feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        self.value = value
        self.grad = grad
        self.l_true = float(l_true)

    def _evaluate(self, y, delta_request):
        g = np.asarray(self.grad(y), dtype=float)
        return ModelEvaluation(
            center=y,
            f_value=float(self.value(y)),
            psi=lambda x, g=g, y=y: float(np.dot(g, np.asarray(x) - y)),
            psi_subgrad=lambda x, g=g: g,
            delta=0.0,
            l_hint=self.l_true,
            linear_g=g,
        )


def holder_effective_l(nu: float, l_nu: float, delta: float) -> float:
    """Effective smoothness constant bought by inexactness delta:
    ``L(delta) = L_nu * [L_nu (1 - nu) / (2 delta (1 + nu))]^((1-nu)/(1+nu))``.

    nu = 1 returns L_nu for any delta; nu = 0 gives L_0^2 / (2 delta).
    """
    if not (0.0 <= nu <= 1.0):
        raise RejectedInput("Holder exponent must lie in [0, 1]")
    if l_nu <= 0.0:
        raise RejectedInput("Holder constant must be positive")
    if nu == 1.0:
        return float(l_nu)
    if delta <= 0.0:
        raise RejectedInput("delta must be positive when nu < 1")
    expo = (1.0 - nu) / (1.0 + nu)
    return float(l_nu * (l_nu * (1.0 - nu) / (2.0 * delta * (1.0 + nu))) ** expo)


class HolderModel(ModelOracle):
    """Universal model for a convex function with nu-Holder (sub)gradients.

    Each call trades the requested inexactness for the effective constant
    L(delta); the exit test of the calling method remains the sole arbiter
    of acceptance.  Requests of zero are rejected for nu < 1.
    """

    def __init__(self, value, subgrad, nu: float, l_nu: float,
                 norm: NormSpec | None = None, feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        self.value = value
        self.subgrad = subgrad
        self.nu = float(nu)
        self.l_nu = float(l_nu)

    def _evaluate(self, y, delta_request):
        l_eff = holder_effective_l(self.nu, self.l_nu, delta_request) if self.nu < 1.0 \
            else self.l_nu
        g = np.asarray(self.subgrad(y), dtype=float)
        return ModelEvaluation(
            center=y,
            f_value=float(self.value(y)),
            psi=lambda x, g=g, y=y: float(np.dot(g, np.asarray(x) - y)),
            psi_subgrad=lambda x, g=g: g,
            delta=float(delta_request),
            l_hint=l_eff,
            linear_g=g,
        )


def universal_delta_schedule(alpha: float, big_a: float, eps: float) -> float:
    """Per-step model inexactness of the universal method:
    ``delta_k = eps * alpha_{k+1} / (4 A_{k+1})`` (trial quantities)."""
    return eps * alpha / (4.0 * big_a)


def make_universal_schedule(eps: float):
    """Schedule callable in the (k, trial alpha, trial A) form FgmConfig takes."""
    return lambda k, alpha, big_a: universal_delta_schedule(alpha, big_a, eps)


def universal_iteration_bound(nu: float, l_nu: float, r: float, eps: float) -> int:
    """Iteration ceiling at smoothness level nu:
    ``ceil(2^((3+5nu)/(1+3nu)) * (L_nu R^(1+nu) / eps)^(2/(1+3nu)))``, at least 1."""
    if l_nu <= 0 or r < 0 or eps <= 0:
        raise RejectedInput("universal_iteration_bound needs positive constants")
    value = 2.0 ** ((3.0 + 5.0 * nu) / (1.0 + 3.0 * nu)) \
        * (l_nu * r ** (1.0 + nu) / eps) ** (2.0 / (1.0 + 3.0 * nu))
    return max(1, int(math.ceil(value)))


class CompositeModel(ModelOracle):
    """Model of F = f + h: the smooth part is linearized, the structured
    nonsmooth part rides inside the model (and hence inside the subproblem).

    ``l1_weight`` marks the prox-friendly case h = w ||.||_1 so subproblem
    solvers can soft-threshold; otherwise h is a black box (value +
    subgradient).
    """

    def __init__(self, f_value, f_grad, l_true: float, h_value, h_subgrad,
                 l1_weight: float = 0.0, norm: NormSpec | None = None,
                 feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        self.f_value = f_value
        self.f_grad = f_grad
        self.l_true = float(l_true)
        self.h_value = h_value
        self.h_subgrad = h_subgrad
        self.l1_weight = float(l1_weight)

    @staticmethod
    def l1(f_value, f_grad, l_true, weight, **kw) -> "CompositeModel":
        return CompositeModel(
            f_value, f_grad, l_true,
            h_value=lambda x, w=weight: w * float(np.sum(np.abs(x))),
            h_subgrad=lambda x, w=weight: w * np.sign(x),
            l1_weight=weight, **kw)

    def _evaluate(self, y, delta_request):
        g = np.asarray(self.f_grad(y), dtype=float)
        hy = float(self.h_value(y))

        def psi(x, g=g, y=y, hy=hy):
            x = np.asarray(x, dtype=float)
            return float(np.dot(g, x - y)) + float(self.h_value(x)) - hy

        return ModelEvaluation(
            center=y,
            f_value=float(self.f_value(y)) + hy,
            psi=psi,
            psi_subgrad=lambda x, g=g: g + np.asarray(self.h_subgrad(x), dtype=float),
            delta=0.0,
            l_hint=self.l_true,
            linear_g=g,
            l1_weight=self.l1_weight,
        )


class ProxPointModel(ModelOracle):
    """psi(x, y) = F(x) - F(y): the full objective inside the model.

    The model inequality holds for every L >= 0, so adaptation is pointless;
    run the methods with ``adapt_l=False`` and a fixed constant, which turns
    the outer iteration into the proximal-point method.  ``components``
    optionally exposes F's coordinate separability to the bisection solver.
    """

    def __init__(self, value, subgrad, fixed_l: float,
                 components: Sequence[ScalarFn] | None = None,
                 norm: NormSpec | None = None, feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        if fixed_l < 0.0:
            raise RejectedInput("prox-point constant must be nonnegative")
        self.value = value
        self.subgrad = subgrad
        self.fixed_l = float(fixed_l)
        self.components = components

    def _evaluate(self, y, delta_request):
        fy = float(self.value(y))
        return ModelEvaluation(
            center=y,
            f_value=fy,
            psi=lambda x, fy=fy: float(self.value(x)) - fy,
            psi_subgrad=lambda x: np.asarray(self.subgrad(x), dtype=float),
            delta=0.0,
            l_hint=self.fixed_l,
            separable_psi=self.components,
        )


class SuperpositionModel(ModelOracle):
    """F(x) = f(f_1(x), ..., f_m(x)) with smooth convex inner functions and
    a monotone M-Lipschitz (w.r.t. l1) convex outer function.

    The model linearizes every inner function and re-applies the outer one;
    the constant is M * sum(L_i).  Outer forms shipped: coordinate-wise
    maximum (minimax special case) and nonnegative weighted sums.
    """

    def __init__(self, inners: Sequence[tuple], outer: str = "max",
                 weights=None, norm: NormSpec | None = None,
                 feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        if outer not in ("max", "weighted_sum"):
            raise UnsupportedCombination("outer function must be 'max' or 'weighted_sum'")
        self.inners = list(inners)  # (value, grad, l_i) triples
        self.outer = outer
        if outer == "weighted_sum":
            w = np.asarray(weights, dtype=float)
            if np.any(w < 0):
                raise RejectedInput("weighted_sum outer needs nonnegative weights")
            self.weights = w
            self.m_lip = float(np.max(w)) if w.size else 0.0
        else:
            self.weights = None
            self.m_lip = 1.0
        self.sum_l = float(sum(l for _, _, l in self.inners))
        self.l_true = self.m_lip * self.sum_l

    def _outer(self, vals: np.ndarray) -> float:
        if self.outer == "max":
            return float(np.max(vals))
        return float(np.dot(self.weights, vals))

    def _evaluate(self, y, delta_request):
        vals = np.array([v(y) for v, _, _ in self.inners], dtype=float)
        grads = [np.asarray(g(y), dtype=float) for _, g, _ in self.inners]
        fy = self._outer(vals)

        def linearized(x):
            x = np.asarray(x, dtype=float)
            return np.array([vals[i] + float(np.dot(grads[i], x - y)) for i in range(len(grads))])

        def psi(x):
            return self._outer(linearized(x)) - fy

        if self.outer == "weighted_sum":
            g_lin = np.sum([w * g for w, g in zip(self.weights, grads)], axis=0) \
                if grads else np.zeros_like(y)

            def psi_subgrad(x, g_lin=g_lin):
                return g_lin
            linear_g = g_lin
        else:
            def psi_subgrad(x):
                # lowest maximizing index: deterministic tie-break
                return grads[int(np.argmax(linearized(x)))]
            linear_g = None

        return ModelEvaluation(
            center=y, f_value=fy, psi=psi, psi_subgrad=psi_subgrad,
            delta=0.0, l_hint=self.l_true, linear_g=linear_g,
        )


# --------------------------------------------------------------------------
# inner-minimization models
# --------------------------------------------------------------------------

def _certified_inner_min(value, grad, q: FeasibleSet, y0, target: float,
                         max_iters: int = 200_000) -> tuple[np.ndarray, float]:
    """Minimize a smooth convex function over q until the first-order
    certificate ``<grad(y), z - y> >= -target for all z in q`` is verifiable.

    Unbounded sets certify only through a vanishing gradient.  Returns the
    point and the certified residual; raises OracleError on budget exhaustion.
    """
    y = q.project(np.asarray(y0, dtype=float))
    lam = 1.0

    def residual(point, g):
        if not q.is_bounded:
            n = float(np.linalg.norm(g))
            return 0.0 if n <= 1e-11 * max(1.0, float(np.max(np.abs(point), initial=0.0))) else float("inf")
        return _certificate_value(point, g, q)

    g = np.asarray(grad(y), dtype=float)
    best_y, best_res = y.copy(), residual(y, g)
    if best_res <= target:
        return best_y, best_res
    for it in range(max_iters):
        fy = float(value(y))
        while True:
            yn = q.project(y - g / lam)
            dy = yn - y
            if float(value(yn)) <= fy + float(np.dot(g, dy)) + 0.5 * lam * float(np.dot(dy, dy)) + 1e-14 * (1 + abs(fy)):
                break
            lam *= 2.0
            if lam > 1e18:
                break
        y = yn
        lam = max(lam * 0.5, 1e-12)
        g = np.asarray(grad(y), dtype=float)
        if (it + 1) % 5 == 0 or it == max_iters - 1:
            res = residual(y, g)
            if res < best_res:
                best_y, best_res = y.copy(), res
            if best_res <= target:
                return best_y, best_res
    raise OracleError(
        f"inner minimization failed to certify {target:.3e} within {max_iters} iterations",
        inner_residual=best_res)


def _inject_inner_perturbation(y_exact, grad, q: FeasibleSet, target: float):
    """Drag an exact inner solution toward the set anchor until the
    first-order residual sits in (0, target]; certificates stay exact."""
    from .subproblem import _set_anchor
    anchor = _set_anchor(q)
    direction = anchor - y_exact
    n = float(np.linalg.norm(direction))
    if n < 1e-14:
        direction = np.zeros_like(y_exact)
        direction[0] = 1.0
        n = 1.0
    direction /= n

    def at(s):
        y = q.project(y_exact + s * direction)
        g = np.asarray(grad(y), dtype=float)
        return y, _certificate_value(y, g, q)

    s_lo, s_hi = 0.0, max(q.diameter(), 1e-12)
    y_best, res_best = y_exact, 0.0
    y_hi, res_hi = at(s_hi)
    if res_hi <= target:
        return y_hi, res_hi
    for _ in range(80):
        s = 0.5 * (s_lo + s_hi)
        y, res = at(s)
        if res <= target:
            y_best, res_best = y, res
            s_lo = s
            if res >= 0.25 * target:
                break
        else:
            s_hi = s
    return y_best, res_best


class MinMinModel(ModelOracle):
    """Model of ``f(x) = min over y in Q_y of F(y, x)`` for a jointly convex
    F with jointly L-Lipschitz gradient.

    The inner solve must witness ``<grad_y F(y~, x), y - y~> >= -delta_in``
    over Q_y; the emitted model then carries (6 delta_in, 2 L).  The model
    value is shifted down by 2 delta_in and the linearization uses the
    x-block gradient at (y~, x).
    """

    def __init__(self, joint_value, grad_y, grad_x, l_joint: float,
                 inner_set: FeasibleSet, inner_delta: float = 0.0,
                 inner_solver: Callable | None = None, inject_inexactness: bool = False,
                 norm: NormSpec | None = None, feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        self.joint_value = joint_value
        self.grad_y = grad_y
        self.grad_x = grad_x
        self.l_joint = float(l_joint)
        self.inner_set = inner_set
        self.inner_delta = float(inner_delta)
        self.inner_solver = inner_solver
        self.inject_inexactness = inject_inexactness

    def _solve_inner(self, x, target):
        if self.inner_solver is not None:
            return self.inner_solver(x, target)
        y0 = np.zeros(self.inner_set.dim)
        solve_to = 1e-12 if self.inject_inexactness else max(target, 1e-12)
        y, res = _certified_inner_min(
            lambda y: float(self.joint_value(y, x)),
            lambda y: np.asarray(self.grad_y(y, x), dtype=float),
            self.inner_set, y0, solve_to)
        if self.inject_inexactness and target > 0.0:
            y, res = _inject_inner_perturbation(
                y, lambda yy: np.asarray(self.grad_y(yy, x), dtype=float), self.inner_set, target)
        return y, res

    def _evaluate(self, x, delta_request):
        # declared model delta is 6x the inner accuracy
        delta_in = delta_request / 6.0 if delta_request > 0.0 else self.inner_delta
        y_t, achieved = self._solve_inner(x, delta_in)
        declared_in = max(delta_in, achieved)
        f_at = float(self.joint_value(y_t, x))
        g = np.asarray(self.grad_x(y_t, x), dtype=float)
        return ModelEvaluation(
            center=x,
            f_value=f_at - 2.0 * declared_in,
            psi=lambda z, g=g, x=x: float(np.dot(g, np.asarray(z) - x)),
            psi_subgrad=lambda z, g=g: g,
            delta=6.0 * declared_in,
            l_hint=2.0 * self.l_joint,
            linear_g=g,
        )


def minmin_model_eval(model: MinMinModel, x) -> ModelEvaluation:
    return model.evaluate(x)


class SaddleModel(ModelOracle):
    """Model of ``f(x) = max over y of <x, b - A y> - phi(y)`` with phi
    mu-strongly convex w.r.t. the p-norm (p in {1, 2}).

    f is smooth with constant ``L = max over ||y||_p <= 1 of ||A y||_2^2 / mu``
    and the model emitted from a delta-accurate inner maximization is
    (delta, 2 L).  The inner problem is driven to function accuracy
    delta / 2, which is what the two-sided inequality actually needs.
    """

    def __init__(self, a_matrix, b, phi_value, phi_grad, mu: float, p: float = 2.0,
                 inner_set: FeasibleSet | None = None, inner_delta: float = 0.0,
                 inner_solver: Callable | None = None,
                 norm: NormSpec | None = None, feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        self.a_matrix = np.asarray(a_matrix, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.phi_value = phi_value
        self.phi_grad = phi_grad
        if mu <= 0.0:
            raise RejectedInput("inner function must be strongly convex (mu > 0)")
        self.mu = float(mu)
        if p not in (1.0, 2.0):
            raise UnsupportedCombination("saddle constant implemented for p in {1, 2}")
        self.p = float(p)
        self.inner_set = inner_set
        self.inner_delta = float(inner_delta)
        self.inner_solver = inner_solver

    @property
    def l_smooth(self) -> float:
        a = self.a_matrix
        if self.p == 2.0:
            smax = float(np.linalg.svd(a, compute_uv=False)[0]) if a.size else 0.0
            return smax**2 / self.mu
        col = float(np.max(np.linalg.norm(a, axis=0))) if a.size else 0.0
        return col**2 / self.mu

    def _inner_objective(self, x):
        # maximize g(y) = <x, b - A y> - phi(y): concave, mu-strongly
        atx = self.a_matrix.T @ x
        xb = float(np.dot(x, self.b))

        def g_val(y):
            return xb - float(np.dot(atx, y)) - float(self.phi_value(y))

        def g_grad(y):
            return -atx - np.asarray(self.phi_grad(y), dtype=float)

        return g_val, g_grad

    def _solve_inner(self, x, gap_target):
        if self.inner_solver is not None:
            return self.inner_solver(x, gap_target)
        g_val, g_grad = self._inner_objective(x)
        m = self.a_matrix.shape[1]
        q = self.inner_set if self.inner_set is not None else FeasibleSet.unconstrained(m)

        def gap_bound(y, g):
            if not q.is_bounded:
                return float(np.dot(g, g)) / (2.0 * self.mu)
            return max(0.0, -q.support_min(-g, y))  # Frank-Wolfe gap of the ascent

        y = q.project(np.zeros(m))
        lam = 1.0
        g = g_grad(y)
        best_y, best_gap = y.copy(), gap_bound(y, g)
        target = max(gap_target, 1e-15)
        for it in range(200_000):
            if best_gap <= target:
                return best_y, best_gap
            gy = g_val(y)
            while True:
                yn = q.project(y + g / lam)
                dy = yn - y
                if g_val(yn) >= gy + float(np.dot(g, dy)) - 0.5 * lam * float(np.dot(dy, dy)) - 1e-14 * (1 + abs(gy)):
                    break
                lam *= 2.0
                if lam > 1e18:
                    break
            y = yn
            lam = max(lam * 0.5, 1e-12)
            g = g_grad(y)
            gap = gap_bound(y, g)
            if gap < best_gap:
                best_y, best_gap = y.copy(), gap
        raise OracleError("saddle inner maximization failed to certify its gap",
                          inner_residual=best_gap)

    def _evaluate(self, x, delta_request):
        delta = delta_request if delta_request > 0.0 else self.inner_delta
        y_t, gap = self._solve_inner(x, delta / 2.0)
        g = self.b - self.a_matrix @ y_t
        f_delta = float(np.dot(x, g)) - float(self.phi_value(y_t))
        return ModelEvaluation(
            center=x,
            f_value=f_delta,
            psi=lambda z, g=g, x=x: float(np.dot(g, np.asarray(z) - x)),
            psi_subgrad=lambda z, g=g: g,
            delta=float(delta),
            l_hint=2.0 * self.l_smooth,
            linear_g=g,
        )


def saddle_model_eval(model: SaddleModel, x) -> ModelEvaluation:
    return model.evaluate(x)


class MoreauModel(ModelOracle):
    """Model of the Moreau envelope ``f(x) = min_y { phi(y) + (L/2)||y - x||^2 }``
    for separable l1-type phi (weight * ||y||_1).

    The inner stop rule is the exact gap condition
    ``max_y { Lam(x, y0) - Lam(x, y) + (L/2)||y - y0||^2 } <= delta``; for
    the l1 kernel that maximum has a closed form, so both the exact solve
    and the injected-inexactness mode certify it exactly.  The emitted model
    is (delta, L) with gradient ``L (x - y0)``.
    """

    def __init__(self, l_smooth: float, l1_weight: float = 1.0,
                 inject_inexactness: bool = False,
                 norm: NormSpec | None = None, feasible_set: FeasibleSet | None = None):
        super().__init__(norm, feasible_set)
        if l_smooth <= 0.0:
            raise RejectedInput("Moreau smoothing constant must be positive")
        self.l_smooth = float(l_smooth)
        self.l1_weight = float(l1_weight)
        self.inject_inexactness = inject_inexactness

    def phi(self, y) -> float:
        return self.l1_weight * float(np.sum(np.abs(y)))

    def envelope_value(self, x) -> float:
        """True f(x): the Huber-type closed form via the exact prox point."""
        y = self._exact_prox(np.asarray(x, dtype=float))
        return self.phi(y) + 0.5 * self.l_smooth * float(np.sum((y - x) ** 2))

    def _exact_prox(self, x):
        t = self.l1_weight / self.l_smooth
        return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)

    def _gap_condition(self, x, y0) -> float:
        """Exact value of max_y { Lam(x,y0) - Lam(x,y) + (L/2)||y-y0||^2 }.

        With m(y) = Lam(x,y) - (L/2)||y - y0||^2 = phi(y) + L<y, y0 - x> + c,
        the maximum is Lam(x, y0) - min m; the per-coordinate min of
        w|t| + a t is 0 when |a| <= w and -inf otherwise.
        """
        L, w = self.l_smooth, self.l1_weight
        a = L * (np.asarray(y0) - np.asarray(x))
        if np.any(np.abs(a) > w + 1e-12):
            return float("inf")
        lam0 = self.phi(y0) + 0.5 * L * float(np.sum((np.asarray(y0) - np.asarray(x)) ** 2))
        m_min = 0.5 * L * (float(np.sum(np.asarray(x) ** 2)) - float(np.sum(np.asarray(y0) ** 2)))
        return lam0 - m_min

    def _evaluate(self, x, delta_request):
        target = float(delta_request)
        y0 = self._exact_prox(x)
        achieved = max(0.0, self._gap_condition(x, y0))
        if self.inject_inexactness and target > 0.0:
            y0, achieved = self._inject(x, y0, target)
        if achieved > target + 1e-12 and target > 0.0:
            raise OracleError("Moreau inner gap condition not met", inner_residual=achieved)
        delta = max(achieved, target)
        lam0 = self.phi(y0) + 0.5 * self.l_smooth * float(np.sum((y0 - x) ** 2))
        g = self.l_smooth * (x - y0)
        return ModelEvaluation(
            center=x,
            f_value=lam0 - delta,
            psi=lambda z, g=g, x=x: float(np.dot(g, np.asarray(z) - x)),
            psi_subgrad=lambda z, g=g: g,
            delta=delta,
            l_hint=self.l_smooth,
            linear_g=g,
        )

    def _inject(self, x, y_exact, target):
        # drag y0 toward x: L(x - y(s)) = (1-s) L(x - y_exact) stays within
        # the weight bound, so the gap condition remains finite
        x = np.asarray(x, dtype=float)
        direction = x - y_exact
        if float(np.linalg.norm(direction)) < 1e-14:
            return y_exact, 0.0
        s_lo, s_hi = 0.0, 1.0
        best_y, best_gap = y_exact, 0.0
        for _ in range(80):
            s = 0.5 * (s_lo + s_hi)
            y = y_exact + s * direction
            gap = self._gap_condition(x, y)
            if gap <= target:
                best_y, best_gap = y, gap
                s_lo = s
                if gap >= 0.25 * target:
                    break
            else:
                s_hi = s
        return best_y, best_gap


def moreau_model_eval(model: MoreauModel, x) -> ModelEvaluation:
    return model.evaluate(x)


class DeltaPerturbedModel(ModelOracle):
    """Wrap an exact oracle into a (delta, L)-model with a genuine constant
    model error: the reported value is lowered by a deterministic,
    seed-controlled amount in [0, delta], which keeps the two-sided
    inequality valid at the enlarged delta."""

    def __init__(self, inner: ModelOracle, delta_const: float, seed: int = 0):
        super().__init__(inner.norm, inner.feasible_set)
        if delta_const < 0.0:
            raise RejectedInput("delta_const must be nonnegative")
        self.inner = inner
        self.delta_const = float(delta_const)
        rng = np.random.default_rng(seed)
        self._w = rng.standard_normal(16)
        self._b = float(rng.uniform(0, 2 * np.pi))

    def _shift(self, y: np.ndarray) -> float:
        w = self._w[: y.size] if y.size <= 16 else np.resize(self._w, y.size)
        return self.delta_const * 0.5 * (1.0 + math.sin(float(np.dot(w, y)) + self._b))

    def _evaluate(self, y, delta_request):
        ev = self.inner.evaluate(y, 0.0)
        return replace(ev, f_value=ev.f_value - self._shift(y), delta=ev.delta + self.delta_const)


# --------------------------------------------------------------------------
# conditional-gradient reduction
# --------------------------------------------------------------------------

def frank_wolfe_deltatilde(r_q: float) -> float:
    """Fixed subproblem inexactness of the conditional-gradient
    substitution: ``2 R_Q^2`` where ``V(x, y) <= R_Q^2`` over Q x Q."""
    if not np.isfinite(r_q) or r_q < 0.0:
        raise RejectedInput("R_Q must be finite and nonnegative")
    return 2.0 * r_q**2


def bregman_radius_sq(prox: ProxSetup, q: FeasibleSet) -> float:
    """Upper bound R_Q^2 on the Bregman divergence over Q x Q, per set kind."""
    if not q.is_bounded:
        raise RejectedInput("Bregman radius undefined for unbounded sets")
    if prox.kind in ("euclidean", "weighted_euclidean"):
        wmax = 1.0 if prox.weights is None else float(np.max(prox.weights))
        if q.kind == "box":
            w = np.ones(q.dim) if prox.weights is None else prox.weights
            return 0.5 * float(np.sum(w * (q.upper - q.lower) ** 2))
        if q.kind == "ball":
            return 2.0 * q.radius**2 * wmax
        if q.kind == "simplex":
            return q.scale**2 * wmax
    if prox.kind == "entropy" and q.kind == "simplex":
        # KL is jointly convex: the max over the clipped simplex sits at
        # clipped vertex pairs
        floor = TOL.entropy_floor * q.scale
        n = q.dim
        best = 0.0
        for i in range(n):
            for j in range(n):
                x = np.full(n, floor)
                x[i] = q.scale - (n - 1) * floor
                y = np.full(n, floor)
                y[j] = q.scale - (n - 1) * floor
                best = max(best, float(np.sum(x * np.log(x / y))))
        return best
    raise UnsupportedCombination(f"no Bregman radius for prox {prox.kind!r} over {q.kind!r}")
