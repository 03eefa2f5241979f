"""Exception hierarchy for the degree lab.

Every error carries the exit code the command line reports for it.
"""
from __future__ import annotations

from typing import Any

from .const import EXIT_CONFIG, EXIT_INTERNAL, EXIT_RESOLUTION


class DegreeLabError(Exception):
    """Base class of all errors raised by the package."""

    exit_code = EXIT_INTERNAL


# =============================================================================
# Configuration errors (exit 2)
# =============================================================================

class ConfigurationError(DegreeLabError):
    """Invalid descriptor, parameter or input document."""

    exit_code = EXIT_CONFIG


class RegularValueError(ConfigurationError):
    """Target value is not usable as a regular value; pick another one."""


class YoungFunctionError(ConfigurationError):
    """A Young function violates P(0)=0, monotonicity or convexity."""


class DomainError(ConfigurationError):
    """Argument outside the domain of a function."""


# =============================================================================
# Resolution errors (exit 3)
# =============================================================================

class ResolutionError(DegreeLabError):
    """Mesh too coarse for the requested computation.

    Attributes:
        partial: Results computed before the failure, if any
    """

    exit_code = EXIT_RESOLUTION

    def __init__(self, message: str, partial: Any = None) -> None:
        super().__init__(message)
        self.partial = partial


class NonIntegralDegreeError(ResolutionError):
    """Jacobian quadrature did not land near an integer."""

    def __init__(self, raw: float, residual: float) -> None:
        super().__init__(
            f"Degree quadrature {raw:.6f} is {residual:.4f} away from an integer; "
            "mesh is likely under-resolved"
        )
        self.raw = raw
        self.residual = residual


class UnderResolutionError(ResolutionError):
    """Preimage scan could not resolve a candidate cell."""


# =============================================================================
# Internal errors (exit 4)
# =============================================================================

class EvaluationError(DegreeLabError):
    """Non-finite value produced during evaluation.

    Attributes:
        index: Node or sample index of the first offending value, if known
    """

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class SingularLocusError(DegreeLabError):
    """Differential requested on the non-smooth locus of a map."""


class ChainComplexError(DegreeLabError):
    """Boundary maps do not compose to zero or have the wrong shape."""


class InternalConsistencyError(DegreeLabError):
    """Two computations that must agree do not."""
