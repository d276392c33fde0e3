"""Per-iteration run records shared by the methods and the harness."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TraceRow:
    k: int
    l: float                    # accepted trial constant for this step
    alpha: float
    big_a: float                # cumulative sum of alphas
    backtracks: int
    delta: float                # model inexactness reported by the oracle
    delta_tilde_target: float   # requested subproblem inexactness
    delta_tilde: float          # certified subproblem inexactness
    f_point: float              # true F at the method's point (nan if unknown)
    f_avg: float                # true F at the averaged point (nan if n/a)
    dist_opt: float             # Euclidean distance to the optimum (nan if unknown)
    step_seconds: float = 0.0   # wall clock; kept out of the CSV contract


# fixed CSV column order (wall clock excluded so that runs with equal seeds
# emit byte-identical files)
CSV_FIELDS = (
    "k", "l", "alpha", "big_a", "backtracks", "delta",
    "delta_tilde_target", "delta_tilde", "f_point", "f_avg", "dist_opt",
)


@dataclass
class RunTrace:
    method: str
    rows: list[TraceRow] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    # optional iterate storage (enabled via store_iterates)
    xs: list[np.ndarray] = field(default_factory=list)
    ys: list[np.ndarray] = field(default_factory=list)
    us: list[np.ndarray] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows], dtype=float)

    @property
    def n_iters(self) -> int:
        return len(self.rows)

    def gaps(self, averaged: bool = False) -> np.ndarray:
        """F - F_star per iteration (nan when the optimum is unknown)."""
        f_star = self.meta.get("f_star")
        if f_star is None:
            return np.full(len(self.rows), np.nan)
        col = self.column("f_avg" if averaged else "f_point")
        return col - float(f_star)
