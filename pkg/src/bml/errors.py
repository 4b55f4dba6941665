"""Exception hierarchy.

Numerical routines in this package refuse to return silently wrong answers:
anything that cannot be certified raises one of these.  The CLI maps the
hierarchy onto exit codes (ConfigError/CoverageError -> 2, everything else
that reaches the top -> 1).
"""


class BmlError(Exception):
    """Base class for all package errors."""


class DomainError(BmlError, ValueError):
    """Mathematically invalid input: poles, non-coprime pairs, arguments
    outside the strip or window a formula is valid on."""


class ToleranceError(BmlError, ArithmeticError):
    """An internal cross-check failed: two independent routes to the same
    quantity disagree beyond the advertised tolerance."""


class RefinementError(ToleranceError):
    """Adaptive quadrature failed to converge under grid refinement."""


class CalibrationError(ToleranceError):
    """A calibrated surrogate disagrees with its reference beyond the
    calibration budget."""


class RegimeError(BmlError, ValueError):
    """Arguments lie outside the certified asymptotic regime; the answer
    would carry no usable error bound."""


class BudgetError(BmlError, RuntimeError):
    """Refused to start a computation whose projected cost exceeds the
    configured budget, or whose cutoff is too small to certify the tail."""


class CoverageError(BmlError, RuntimeError):
    """Spectral data does not cover the window a computation needs.  The
    message lists what is missing."""


class ConfigError(BmlError, ValueError):
    """Malformed configuration, command line, or data file."""
