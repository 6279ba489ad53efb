"""Typed error families shared across the package.

Each family maps to a distinct CLI exit status; library code raises these
directly and the command layer translates.
"""


class QcycleError(Exception):
    """Base class for all package errors."""


class ConfigError(QcycleError):
    """Invalid run configuration; carries the offending field path."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class RankDeficientError(QcycleError):
    """A state required to be full rank has eigenvalues below the rank cutoff."""

    def __init__(self, effective_rank: int, dim: int):
        super().__init__(f"rank deficient: effective rank {effective_rank} < dimension {dim}")
        self.effective_rank = effective_rank
        self.dim = dim


class DegenerateFixedPointError(QcycleError):
    """More than one channel eigenvalue sits on the unit circle.

    Carries every near-unit eigenvalue and, when available, the (arbitrary)
    candidate result so callers can inspect the degenerate sector instead of
    silently trusting one of many fixed points.
    """

    def __init__(self, eigenvalues, result=None):
        super().__init__(
            f"{len(eigenvalues)} eigenvalues within tolerance of unit modulus; "
            "the fixed point is not unique"
        )
        self.eigenvalues = eigenvalues
        self.result = result


class NotCPError(QcycleError):
    """Choi matrix has a significantly negative eigenvalue (broken channel)."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(f"Choi matrix is not PSD: min eigenvalue {min_eigenvalue:.3e}")
        self.min_eigenvalue = min_eigenvalue


class NotFixedPointError(QcycleError):
    """Channel reversal requested around a state the channel does not fix."""

    def __init__(self, residual: float, tolerance: float, what: str = "conjugating state"):
        super().__init__(
            f"channel moves the {what} by {residual:.3e} (allowed {tolerance:.3e}); "
            "reversal is defined only at a fixed point"
        )
        self.residual = residual
        self.tolerance = tolerance


class ZeroProbabilityError(QcycleError):
    """Conditional post-interaction state requested on a zero-weight branch."""

    def __init__(self, probability: float):
        super().__init__(f"branch probability {probability:.3e} too small; conditional state undefined")
        self.probability = probability


class CriteriaViolatedError(QcycleError):
    """Closed-form fixed-point ansatz requested outside its validity regime."""

    def __init__(self, mismatch: float):
        super().__init__(
            f"bath criteria violated: |beta1*E_1 - beta2*E_N| = {mismatch:.3e} exceeds 1e-9"
        )
        self.mismatch = mismatch


class ZeroHeatError(QcycleError):
    """Hot-side heat vanished, so the efficiency ratio is undefined.

    Carries the otherwise-complete report (with ``eta`` set to NaN) so callers
    can still emit every well-defined quantity.
    """

    def __init__(self, report):
        super().__init__("hot-side heat is numerically zero; efficiency undefined")
        self.report = report


class ClosureViolationError(QcycleError):
    """Replaying the strokes from a claimed fixed point did not close the loop."""

    def __init__(self, distance: float, tolerance: float):
        super().__init__(
            f"cycle closure violated: distance {distance:.3e} exceeds {tolerance:.3e}"
        )
        self.distance = distance
        self.tolerance = tolerance
