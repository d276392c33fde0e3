"""Exception types shared across the package."""


class RejectedInput(ValueError):
    """An argument violates a documented precondition."""


class UnsupportedCombination(ValueError):
    """The requested (prox, set, model-structure) combination has no solver."""


class ConfigError(ValueError):
    """A benchmark or problem configuration failed validation."""


class OracleError(RuntimeError):
    """A model oracle failed to produce a valid evaluation.

    ``inner_residual`` carries the best inner-solver accuracy achieved when
    the failure came from an inner minimization (min-min / saddle / Moreau).
    """

    def __init__(self, message, inner_residual=None):
        super().__init__(message)
        self.inner_residual = inner_residual


class InexactnessNotCertified(RuntimeError):
    """An inner solver exhausted its budget before certifying the target.

    ``best_delta_tilde`` is the smallest certified inexactness achieved.
    """

    def __init__(self, message, best_delta_tilde=None):
        super().__init__(message)
        self.best_delta_tilde = best_delta_tilde


class ModelViolation(RuntimeError):
    """Backtracking exceeded its cap: the oracle does not satisfy its
    declared model inequality, so the method would diverge."""


class CertificationFailure(RuntimeError):
    """A convergence-bound certification check failed."""
