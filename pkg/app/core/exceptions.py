"""
Error hierarchy shared by the algebra, geometry and CLI layers.
"""

from typing import Any, Dict, Optional


class TripleError(Exception):
    """Base class for toolkit errors."""

    code = "error"

    def __init__(self, message: str, context: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.context = context or {}

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable form used in reports."""
        return {"code": self.code, "message": self.message, **self.context}


class UsageError(TripleError, ValueError):
    """Malformed call: shape mismatch, bad parameters, wrong subspace."""

    code = "usage"


class ParseError(TripleError, ValueError):
    """Descriptor or JSON input could not be parsed."""

    code = "parse"


class PreconditionError(TripleError):
    """An input violates a structural requirement of the operation."""

    code = "precondition"


class NumericRangeError(TripleError, OverflowError):
    """Exact value outside double precision range."""

    code = "numeric-range"


class FiltrationUnsupportedError(TripleError):
    """Radical filtration requested for an unsupported algebra class."""

    code = "filtration-unsupported"


class UnsupportedError(TripleError):
    """Check not implemented for this input shape."""

    code = "unsupported"


class DegeneracyError(TripleError):
    """Induced metric is numerically degenerate."""

    code = "degenerate"


class ConvergenceError(TripleError):
    """Iterative projection did not converge."""

    code = "no-convergence"
