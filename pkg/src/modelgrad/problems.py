"""Shipped benchmark problems: one per model family.

Each builder returns a :class:`Problem` bundling the oracle, the ground
truth needed for certification (true objective, known optimum, smoothness
constant in the prox norm, Bregman radius of the start point) and the
geometry the methods should run with.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, RejectedInput
from .geometry import ProxSetup, bregman_divergence, entropy_prox, euclidean_prox, weighted_euclidean_prox
from .models import (
    CompositeModel,
    HolderModel,
    MinMinModel,
    MoreauModel,
    SaddleModel,
    SmoothModel,
)
from .oracle import ModelOracle, ObjectiveSpec
from .sets import FeasibleSet


@dataclass
class Problem:
    name: str
    oracle: ModelOracle
    objective: ObjectiveSpec
    prox: ProxSetup
    l_true: float          # smoothness constant in the prox norm
    r: float               # sqrt of the V(x_star, x0) bound used in certificates
    x0: np.ndarray
    extras: dict = field(default_factory=dict)

    @property
    def known_optimum(self):
        return self.objective.known_optimum


def _make_prox(prox_kind: str, dim: int, weights=None) -> ProxSetup:
    if prox_kind == "euclidean":
        return euclidean_prox()
    if prox_kind == "entropy":
        return entropy_prox()
    if prox_kind == "weighted_euclidean":
        w = np.ones(dim) if weights is None else np.asarray(weights, dtype=float)
        return weighted_euclidean_prox(w)
    raise ConfigError(f"unknown prox kind {prox_kind!r}")


def _psd_matrix(n: int, rng: np.random.Generator, l_max: float, kappa: float = 50.0) -> np.ndarray:
    """Random PSD matrix with exactly known top eigenvalue l_max."""
    if n == 1:
        return np.array([[l_max]])
    eigs = np.geomspace(l_max / kappa, l_max, n)
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return (q * eigs) @ q.T


def quadratic_problem(
    n: int = 10,
    seed: int = 0,
    set_kind: str = "unconstrained",
    prox_kind: str = "euclidean",
    l_max: float = 2.0,
    matrix=None,
    linear=None,
    weights=None,
) -> Problem:
    """Convex quadratic 0.5 x'Px + q'x with a known interior optimum.

    Constrained variants place the unconstrained minimizer inside the set
    so the optimum stays known exactly.
    """
    rng = np.random.default_rng(seed)
    if matrix is not None:
        p_mat = np.asarray(matrix, dtype=float)
        n = p_mat.shape[0]
        q_vec = np.zeros(n) if linear is None else np.asarray(linear, dtype=float)
        x_star = np.linalg.solve(p_mat, -q_vec)
        fs = FeasibleSet.unconstrained(n) if set_kind == "unconstrained" else None
        if fs is None:
            raise ConfigError("explicit quadratic data supports only the unconstrained set")
        x0 = x_star + rng.standard_normal(n)
    else:
        p_mat = _psd_matrix(n, rng, l_max)
        if set_kind == "simplex":
            fs = FeasibleSet.simplex(n)
            x_star = rng.dirichlet(np.full(n, 5.0))
            x0 = np.full(n, 1.0 / n)
        elif set_kind == "box":
            x_star = rng.standard_normal(n)
            fs = FeasibleSet.box(x_star - 1.0, x_star + 1.0)
            x0 = x_star + rng.uniform(-0.9, 0.9, size=n)
        elif set_kind == "ball":
            x_star = rng.standard_normal(n)
            fs = FeasibleSet.ball(x_star, 2.0)
            d = rng.standard_normal(n)
            x0 = x_star + 1.5 * d / float(np.linalg.norm(d))
        elif set_kind == "unconstrained":
            fs = FeasibleSet.unconstrained(n)
            x_star = rng.standard_normal(n)
            x0 = x_star + rng.standard_normal(n)
        else:
            raise ConfigError(f"unknown set kind {set_kind!r}")
        q_vec = -p_mat @ x_star

    def value(x):
        return 0.5 * float(x @ (p_mat @ x)) + float(q_vec @ x)

    def grad(x):
        return p_mat @ x + q_vec

    prox = _make_prox(prox_kind, n, weights)
    if prox_kind == "entropy":
        if set_kind != "simplex":
            raise ConfigError("entropy prox requires the simplex set")
        l_true = float(np.max(np.abs(p_mat)))   # l1 -> linf operator-norm bound
        x0 = fs.interior_clip(x0)
    else:
        l_true = float(np.max(np.linalg.eigvalsh(p_mat)))

    f_star = value(x_star)
    r = float(np.sqrt(max(bregman_divergence(prox, x_star, x0), 0.0)))
    oracle = SmoothModel(value, grad, l_true, norm=prox.norm, feasible_set=fs)
    objective = ObjectiveSpec(feasible_set=fs, true_value=value, known_optimum=(x_star, f_star))
    return Problem(
        name=f"quadratic_n{n}_{set_kind}_{prox_kind}_s{seed}",
        oracle=oracle, objective=objective, prox=prox,
        l_true=l_true, r=r, x0=x0,
        extras={"matrix": p_mat, "linear": q_vec},
    )


def _ista_reference(a_mat, b, lam, x0, iters=200_000, tol=1e-14):
    """Independent proximal-gradient reference solve for the lasso optimum."""
    l_smooth = float(np.linalg.svd(a_mat, compute_uv=False)[0]) ** 2
    step = 1.0 / l_smooth
    x = np.asarray(x0, dtype=float).copy()
    for _ in range(iters):
        g = a_mat.T @ (a_mat @ x - b)
        x_new = x - step * g
        x_new = np.sign(x_new) * np.maximum(np.abs(x_new) - step * lam, 0.0)
        if float(np.max(np.abs(x_new - x))) < tol:
            x = x_new
            break
        x = x_new
    return x


def lasso_problem(n: int = 10, seed: int = 0, lam: float = 0.1, m: int | None = None,
                  matrix=None, rhs=None) -> Problem:
    """l1-regularized least squares 0.5||Ax - b||^2 + lam ||x||_1."""
    rng = np.random.default_rng(seed)
    if matrix is not None:
        a_mat = np.asarray(matrix, dtype=float)
        b = np.asarray(rhs, dtype=float)
        n = a_mat.shape[1]
    else:
        m = 2 * n if m is None else m
        a_mat = rng.standard_normal((m, n)) / np.sqrt(m)
        x_sparse = np.zeros(n)
        idx = rng.choice(n, size=max(1, n // 3), replace=False)
        x_sparse[idx] = rng.standard_normal(idx.size)
        b = a_mat @ x_sparse + 0.01 * rng.standard_normal(m)

    l_true = float(np.linalg.svd(a_mat, compute_uv=False)[0]) ** 2

    def f_value(x):
        res = a_mat @ x - b
        return 0.5 * float(res @ res)

    def f_grad(x):
        return a_mat.T @ (a_mat @ x - b)

    def full_value(x):
        return f_value(x) + lam * float(np.sum(np.abs(x)))

    fs = FeasibleSet.unconstrained(n)
    x0 = np.zeros(n)
    x_star = _ista_reference(a_mat, b, lam, x0)
    f_star = full_value(x_star)
    prox = euclidean_prox()
    r = float(np.sqrt(max(bregman_divergence(prox, x_star, x0), 0.0)))
    oracle = CompositeModel.l1(f_value, f_grad, l_true, lam, feasible_set=fs)
    objective = ObjectiveSpec(feasible_set=fs, true_value=full_value, known_optimum=(x_star, f_star))
    return Problem(
        name=f"lasso_n{n}_s{seed}", oracle=oracle, objective=objective, prox=prox,
        l_true=l_true, r=r, x0=x0, extras={"lam": lam, "matrix": a_mat, "rhs": b},
    )


def abs_value_problem(declared_l0: float = 1.0) -> Problem:
    """F(x) = |x| in one dimension: the nu = 0 universal-model test case."""

    def value(x):
        return float(np.sum(np.abs(x)))

    def subgrad(x):
        return np.sign(np.asarray(x, dtype=float))

    fs = FeasibleSet.unconstrained(1)
    oracle = HolderModel(value, subgrad, nu=0.0, l_nu=declared_l0, feasible_set=fs)
    x0 = np.array([1.0])
    x_star = np.array([0.0])
    objective = ObjectiveSpec(feasible_set=fs, true_value=value, known_optimum=(x_star, 0.0))
    return Problem(
        name="abs_value", oracle=oracle, objective=objective, prox=euclidean_prox(),
        l_true=declared_l0, r=1.0, x0=x0, extras={"nu": 0.0},
    )


def minmin_problem(seed: int = 0, inner_delta: float = 0.0, inject: bool = False) -> Problem:
    """f(x) = min over y in a box of 0.5||y - Bx||^2 + 0.5||x||^2."""
    rng = np.random.default_rng(seed)
    nx, ny = 2, 2
    b_mat = 0.5 * rng.standard_normal((ny, nx))
    inner_set = FeasibleSet.box(np.full(ny, -2.0), np.full(ny, 2.0))

    def joint_value(y, x):
        ry = y - b_mat @ x
        return 0.5 * float(ry @ ry) + 0.5 * float(x @ x)

    def grad_y(y, x):
        return y - b_mat @ x

    def grad_x(y, x):
        return -b_mat.T @ (y - b_mat @ x) + x

    hess = np.block([
        [np.eye(ny), -b_mat],
        [-b_mat.T, b_mat.T @ b_mat + np.eye(nx)],
    ])
    l_joint = float(np.max(np.linalg.eigvalsh(hess)))

    def true_value(x):
        y_free = b_mat @ x
        y_clip = inner_set.project(y_free)
        return joint_value(y_clip, x)

    fs = FeasibleSet.unconstrained(nx)
    oracle = MinMinModel(joint_value, grad_y, grad_x, l_joint, inner_set,
                         inner_delta=inner_delta, inject_inexactness=inject,
                         feasible_set=fs)
    x0 = np.full(nx, 0.5)
    x_star = np.zeros(nx)
    prox = euclidean_prox()
    r = float(np.sqrt(max(bregman_divergence(prox, x_star, x0), 0.0)))
    objective = ObjectiveSpec(feasible_set=fs, true_value=true_value, known_optimum=(x_star, 0.0))
    return Problem(
        name=f"minmin_s{seed}", oracle=oracle, objective=objective, prox=prox,
        l_true=2.0 * l_joint, r=r, x0=x0, extras={"l_joint": l_joint},
    )


def saddle_problem(seed: int = 0, inner_delta: float = 0.0, inject: bool = False) -> Problem:
    """f(x) = max over y of <x, b - Ay> - 0.5||y||^2 (smoothed bilinear)."""
    rng = np.random.default_rng(seed)
    n = 3
    a_mat = rng.standard_normal((n, n)) / 2.0
    b = rng.standard_normal(n)

    def phi_value(y):
        return 0.5 * float(y @ y)

    def phi_grad(y):
        return np.asarray(y, dtype=float)

    def inner_solver(x, gap_target, inject=inject):
        y_star = -(a_mat.T @ x)
        if not inject or gap_target <= 0.0:
            return y_star, 0.0
        # unit curvature: a perturbation of size s costs exactly s^2 / 2
        s = np.sqrt(2.0 * 0.9 * gap_target)
        e = np.zeros(n)
        e[0] = s
        return y_star + e, 0.5 * s * s

    fs = FeasibleSet.unconstrained(n)
    oracle = SaddleModel(a_mat, b, phi_value, phi_grad, mu=1.0, p=2.0,
                         inner_delta=inner_delta, inner_solver=inner_solver,
                         feasible_set=fs)

    def true_value(x):
        atx = a_mat.T @ x
        return float(x @ b) + 0.5 * float(atx @ atx)

    gram = a_mat @ a_mat.T
    x_star = np.linalg.solve(gram, -b)
    f_star = true_value(x_star)
    x0 = np.zeros(n)
    prox = euclidean_prox()
    r = float(np.sqrt(max(bregman_divergence(prox, x_star, x0), 0.0)))
    objective = ObjectiveSpec(feasible_set=fs, true_value=true_value, known_optimum=(x_star, f_star))
    return Problem(
        name=f"saddle_s{seed}", oracle=oracle, objective=objective, prox=prox,
        l_true=2.0 * oracle.l_smooth, r=r, x0=x0, extras={"l_saddle": oracle.l_smooth},
    )


def moreau_problem(n: int = 3, l_smooth: float = 1.0, weight: float = 1.0,
                   inject: bool = False) -> Problem:
    """Moreau envelope of weight * ||.||_1 with smoothing constant l_smooth."""
    fs = FeasibleSet.unconstrained(n)
    oracle = MoreauModel(l_smooth, weight, inject_inexactness=inject, feasible_set=fs)
    x0 = np.full(n, 2.0)
    x_star = np.zeros(n)
    prox = euclidean_prox()
    r = float(np.sqrt(max(bregman_divergence(prox, x_star, x0), 0.0)))
    objective = ObjectiveSpec(feasible_set=fs, true_value=oracle.envelope_value,
                              known_optimum=(x_star, 0.0))
    return Problem(
        name="moreau_l1", oracle=oracle, objective=objective, prox=prox,
        l_true=l_smooth, r=r, x0=x0, extras={"weight": weight},
    )


PROBLEM_BUILDERS = {
    "quadratic": quadratic_problem,
    "lasso": lasso_problem,
    "abs_value": abs_value_problem,
    "minmin": minmin_problem,
    "saddle": saddle_problem,
    "moreau": moreau_problem,
}


def build_problem(kind: str, **kwargs) -> Problem:
    if kind not in PROBLEM_BUILDERS:
        raise ConfigError(f"unknown problem kind {kind!r}; known: {sorted(PROBLEM_BUILDERS)}")
    try:
        return PROBLEM_BUILDERS[kind](**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad arguments for problem kind {kind!r}: {exc}") from exc
    except RejectedInput as exc:
        raise ConfigError(str(exc)) from exc
