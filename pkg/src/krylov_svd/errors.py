"""Exception and warning types shared across the package."""


class KrylovSvdError(Exception):
    """Base class for all package errors."""


class InvalidParameterError(KrylovSvdError, ValueError):
    """A caller-supplied parameter is outside its allowed range."""


class NumericInputError(KrylovSvdError, ValueError):
    """Numeric input contains NaN/Inf or is otherwise unusable."""


class ContractViolationError(KrylovSvdError, ValueError):
    """An input violates a structural precondition (e.g. non-Hermitian matrix)."""


class DecompositionError(KrylovSvdError):
    """A matrix decomposition failed beyond the documented fallbacks."""


class InsufficientDataError(KrylovSvdError, ValueError):
    """Not enough data points for the requested statistic."""


class InvalidMomentsError(KrylovSvdError, ValueError):
    """Moment sequence does not define a positive measure (or precision is exhausted)."""


class DomainError(KrylovSvdError, ValueError):
    """Argument lies outside the validated accuracy domain of a special function."""


class FitFailureError(KrylovSvdError):
    """An optimizer failed to converge; carries the residual history."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class EquivalenceError(KrylovSvdError):
    """A moment-identity cross-check exceeded its tolerance."""


class PartialResultError(KrylovSvdError):
    """A parallel run failed part-way; lists the realizations that completed."""

    def __init__(self, message, completed, failed):
        super().__init__(message)
        self.completed = sorted(completed)
        self.failed = sorted(failed)


class PoorFitWarning(UserWarning):
    """Least-squares fit residual is above the quality threshold."""


class SpliceMismatchWarning(UserWarning):
    """Edge and bulk Lanczos coefficients disagree at the padding splice."""
