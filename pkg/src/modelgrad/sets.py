"""Feasible sets: membership, projection, sampling and exact linear minimization.

Supported kinds are unconstrained space, boxes, Euclidean balls and scaled
simplices.  Boxes and simplices additionally expose their vertices so that
inexactness certificates can be validated by enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import RejectedInput, UnsupportedCombination


@dataclass(frozen=True)
class FeasibleSet:
    kind: str  # "unconstrained" | "box" | "ball" | "simplex"
    dim: int
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    center: np.ndarray | None = None
    radius: float = 0.0
    scale: float = 1.0

    # ---------------------------------------------------------------- factories
    @staticmethod
    def unconstrained(dim: int) -> "FeasibleSet":
        return FeasibleSet(kind="unconstrained", dim=dim)

    @staticmethod
    def box(lower, upper) -> "FeasibleSet":
        lo = np.asarray(lower, dtype=float)
        up = np.asarray(upper, dtype=float)
        if lo.shape != up.shape or lo.ndim != 1:
            raise RejectedInput("box bounds must be 1-d arrays of equal length")
        if np.any(lo > up):
            raise RejectedInput("box lower bound exceeds upper bound")
        return FeasibleSet(kind="box", dim=lo.size, lower=lo, upper=up)

    @staticmethod
    def ball(center, radius: float) -> "FeasibleSet":
        c = np.asarray(center, dtype=float)
        if radius < 0:
            raise RejectedInput("ball radius must be nonnegative")
        return FeasibleSet(kind="ball", dim=c.size, center=c, radius=float(radius))

    @staticmethod
    def simplex(dim: int, scale: float = 1.0) -> "FeasibleSet":
        if scale <= 0:
            raise RejectedInput("simplex scale must be positive")
        return FeasibleSet(kind="simplex", dim=dim, scale=float(scale))

    # ---------------------------------------------------------------- predicates
    @property
    def is_bounded(self) -> bool:
        return self.kind in ("box", "ball", "simplex")

    def contains(self, x, tol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            return False
        if self.kind == "unconstrained":
            return True
        if self.kind == "box":
            return bool(np.all(x >= self.lower - tol) and np.all(x <= self.upper + tol))
        if self.kind == "ball":
            return float(np.linalg.norm(x - self.center)) <= self.radius + tol
        if self.kind == "simplex":
            return bool(np.all(x >= -tol) and abs(float(np.sum(x)) - self.scale) <= tol)
        raise UnsupportedCombination(f"unknown set kind {self.kind!r}")

    # ---------------------------------------------------------------- projection
    def project(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.kind == "unconstrained":
            return x.copy()
        if self.kind == "box":
            return np.clip(x, self.lower, self.upper)
        if self.kind == "ball":
            d = x - self.center
            n = float(np.linalg.norm(d))
            if n <= self.radius:
                return x.copy()
            return self.center + d * (self.radius / n)
        if self.kind == "simplex":
            return _project_simplex(x, self.scale)
        raise UnsupportedCombination(f"unknown set kind {self.kind!r}")

    def interior_clip(self, x, floor: float = TOL.entropy_floor) -> np.ndarray:
        """Nudge a simplex point into the interior (entropy-prox guard)."""
        if self.kind != "simplex":
            return np.asarray(x, dtype=float).copy()
        z = np.maximum(np.asarray(x, dtype=float), floor * self.scale)
        return z * (self.scale / float(np.sum(z)))

    # ---------------------------------------------------------------- sampling
    def sample(self, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "unconstrained":
            return rng.standard_normal(self.dim)
        if self.kind == "box":
            return rng.uniform(self.lower, self.upper)
        if self.kind == "ball":
            v = rng.standard_normal(self.dim)
            n = float(np.linalg.norm(v))
            if n == 0.0:
                return self.center.copy()
            r = self.radius * rng.uniform() ** (1.0 / max(self.dim, 1))
            return self.center + v * (r / n)
        if self.kind == "simplex":
            return self.scale * rng.dirichlet(np.ones(self.dim))
        raise UnsupportedCombination(f"unknown set kind {self.kind!r}")

    def sample_interior(self, rng: np.random.Generator, margin: float = 1e-6) -> np.ndarray:
        x = self.sample(rng)
        if self.kind == "simplex":
            u = np.full(self.dim, self.scale / self.dim)
            return (1.0 - margin) * x + margin * u
        if self.kind == "box":
            mid = 0.5 * (self.lower + self.upper)
            return (1.0 - margin) * x + margin * mid
        if self.kind == "ball":
            return self.center + (1.0 - margin) * (x - self.center)
        return x

    # ---------------------------------------------------------------- geometry
    def diameter(self) -> float:
        """Euclidean diameter; inf for unconstrained space."""
        if self.kind == "unconstrained":
            return float("inf")
        if self.kind == "box":
            return float(np.sqrt(np.sum((self.upper - self.lower) ** 2)))
        if self.kind == "ball":
            return 2.0 * self.radius
        if self.kind == "simplex":
            return self.scale * float(np.sqrt(2.0)) if self.dim > 1 else 0.0
        raise UnsupportedCombination(f"unknown set kind {self.kind!r}")

    def support_min(self, h, x0) -> float:
        """Exact ``min over x in Q of <h, x - x0>``.

        Raises for unbounded sets with a nonzero h (the minimum is -inf).
        """
        h = np.asarray(h, dtype=float)
        x0 = np.asarray(x0, dtype=float)
        if self.kind == "unconstrained":
            if float(np.max(np.abs(h), initial=0.0)) == 0.0:
                return 0.0
            raise RejectedInput("support_min over unconstrained space requires h = 0")
        if self.kind == "box":
            terms = np.minimum(h * (self.lower - x0), h * (self.upper - x0))
            return float(np.sum(terms))
        if self.kind == "ball":
            return float(np.dot(h, self.center - x0)) - self.radius * float(np.linalg.norm(h))
        if self.kind == "simplex":
            return float(self.scale * np.min(h) - np.dot(h, x0))
        raise UnsupportedCombination(f"unknown set kind {self.kind!r}")

    def lmo(self, g) -> np.ndarray:
        """argmin over Q of <g, x>; vertex / boundary point for compact sets.

        Tie-breaks are deterministic: boxes resolve g_i = 0 to the lower
        corner and simplices pick the lowest minimizing index.
        """
        g = np.asarray(g, dtype=float)
        if not self.is_bounded:
            raise RejectedInput("linear minimization oracle undefined on unbounded sets")
        if self.kind == "box":
            # g_i = 0 resolves to the lower corner
            return np.where(g < 0.0, self.upper, self.lower).astype(float)
        if self.kind == "ball":
            n = float(np.linalg.norm(g))
            if n == 0.0:
                return self.center.copy()
            return self.center - g * (self.radius / n)
        if self.kind == "simplex":
            i = int(np.argmin(g))
            v = np.zeros(self.dim)
            v[i] = self.scale
            return v
        raise UnsupportedCombination(f"unknown set kind {self.kind!r}")

    def vertices(self) -> np.ndarray:
        """All vertices (boxes and simplices only; boxes limited to dim <= 16)."""
        if self.kind == "simplex":
            return self.scale * np.eye(self.dim)
        if self.kind == "box":
            if self.dim > 16:
                raise RejectedInput("box vertex enumeration limited to dim <= 16")
            corners = np.empty((2**self.dim, self.dim))
            for j in range(2**self.dim):
                bits = (j >> np.arange(self.dim)) & 1
                corners[j] = np.where(bits == 1, self.upper, self.lower)
            return corners
        raise UnsupportedCombination(f"vertices unavailable for set kind {self.kind!r}")


def _project_simplex(x: np.ndarray, scale: float) -> np.ndarray:
    """Euclidean projection onto { x >= 0, sum x = scale } (sort-based)."""
    n = x.size
    u = np.sort(x)[::-1]
    css = np.cumsum(u) - scale
    ind = np.arange(1, n + 1)
    cond = u - css / ind > 0
    rho = int(np.count_nonzero(cond))
    theta = css[rho - 1] / rho
    return np.maximum(x - theta, 0.0)
