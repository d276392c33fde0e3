"""Gradient and fast-gradient methods driven by inexact model oracles.

The optimization methods in :mod:`modelgrad.gd` and :mod:`modelgrad.fgm`
never touch the objective directly: every piece of first-order information
flows through a model oracle (:mod:`modelgrad.oracle`), and every step is an
inexact Bregman proximal subproblem solved with a verifiable inexactness
certificate (:mod:`modelgrad.subproblem`).  Concrete model families live in
:mod:`modelgrad.models`; the benchmark harness and CLI in
:mod:`modelgrad.harness` and :mod:`modelgrad.cli`.
"""

from .config import Tolerances, TOL
from .geometry import NormSpec, ProxSetup, bregman_divergence, dual_norm
from .sets import FeasibleSet
from .oracle import ModelEvaluation, ModelOracle, ObjectiveSpec, evaluate_model, verify_sandwich
from .subproblem import SubproblemCertificate, certify
from .gd import GdConfig, gd_run, gd_bound
from .fgm import FgmConfig, fgm_run, fgm_bound, alpha_largest_root, check_sequence_growth
from .trace import RunTrace, TraceRow

__all__ = [
    "Tolerances",
    "TOL",
    "NormSpec",
    "ProxSetup",
    "bregman_divergence",
    "dual_norm",
    "FeasibleSet",
    "ModelEvaluation",
    "ModelOracle",
    "ObjectiveSpec",
    "evaluate_model",
    "verify_sandwich",
    "SubproblemCertificate",
    "certify",
    "GdConfig",
    "gd_run",
    "gd_bound",
    "FgmConfig",
    "fgm_run",
    "fgm_bound",
    "alpha_largest_root",
    "check_sequence_growth",
    "RunTrace",
    "TraceRow",
]

__version__ = "0.1.0"
