"""Centralized numeric tolerances and iteration caps.

Every magic constant used by the library lives here so that geometry,
subproblem and method modules agree on what "exact" and "violated" mean.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # slack for checking 1-strong convexity / Bregman lower bounds
    strong_convexity: float = 1e-10
    # lower / upper slacks for model sandwich verification
    sandwich_lower: float = 1e-9
    sandwich_upper: float = 1e-9
    # relative slack added to the backtracking exit test (guards against
    # float cancellation near convergence; see gd/fgm modules)
    exit_test_rel: float = 1e-13
    # dual-norm threshold below which a witness counts as an exact zero,
    # relative to the subproblem's data scale (unconstrained certificates)
    zero_witness_rel: float = 1e-11
    # default per-coordinate interval width for the bisection solver
    bisection_accuracy: float = 1e-12
    # floor used when clipping simplex iterates into the interior before
    # evaluating entropy terms
    entropy_floor: float = 1e-16
    # relative slack for convergence-bound certification
    certification_rel: float = 1e-9
    # backtracking safety cap: 60 doublings traverse the double exponent range
    backtrack_cap: int = 60


TOL = Tolerances()
