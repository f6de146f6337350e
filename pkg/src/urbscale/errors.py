"""Exception hierarchy with stable machine-readable codes.

Every error that can surface through the CLI or the HTTP service carries a
``code`` string that stays fixed across releases, so clients can switch on it.
"""

from __future__ import annotations


class UrbscaleError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(UrbscaleError):
    """Malformed input file. ``row`` is the 1-based data row when known."""

    code = "parse-error"

    def __init__(self, message: str, row: int | None = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ExtrapolationUndefinedError(UrbscaleError):
    code = "extrapolation-undefined"


class InfeasibleClusteringError(UrbscaleError):
    code = "infeasible-clustering"


class NonConvergenceError(UrbscaleError):
    code = "non-convergence"


class InsufficientClassesError(UrbscaleError):
    code = "insufficient-classes"


class DegenerateSpectrumError(UrbscaleError):
    code = "degenerate-spectrum"


class InsufficientDataError(UrbscaleError):
    code = "insufficient-data"


class ZeroVarianceError(UrbscaleError):
    code = "zero-variance"


class SingularSystemError(UrbscaleError):
    code = "singular-system"


class DeltaError(UrbscaleError):
    """Invalid scenario delta (unknown id, id collision, negative population)."""

    code = "invalid-delta"


class NonFiniteQueryError(UrbscaleError):
    code = "non-finite-query"
