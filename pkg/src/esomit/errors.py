"""Exception and warning types shared across the package."""


class EsOmitError(Exception):
    """Base class for all package errors."""


class ParameterError(EsOmitError, ValueError):
    """Invalid or inconsistent input parameters."""


class NegativeRate(ParameterError):
    """A decay/coupling rate that must be positive is not."""


class T0OutOfRange(ParameterError):
    """Fiber transmission magnitude outside [0, 1]."""


class MissingField(ParameterError):
    """A required parameter key is absent."""


class NonPositiveFrequency(ParameterError):
    """Drive frequency must be > 0."""


class UnitParseError(ParameterError):
    """A quantity string could not be parsed."""


class ZeroModeVolume(ParameterError):
    """Mode volume must be > 0."""


class SingularDenominator(EsOmitError):
    """Steady-state denominator vanished (degenerate optical response)."""


class SingularSystem(EsOmitError):
    """The linearized response matrix is numerically singular."""


class NoConvergence(EsOmitError):
    """Iterative solver exhausted its budget without meeting tolerance."""


class NonConvergentDerivative(EsOmitError):
    """Finite-difference derivative failed to converge under step halving."""


class ZeroProbe(EsOmitError):
    """Transmission is undefined for zero probe amplitude."""


class ZeroDenominator(EsOmitError):
    """Closed-form response denominator vanished."""


class UnknownPreset(EsOmitError, KeyError):
    """Requested preset name is not in the catalog."""


class NoExtremum(EsOmitError):
    """No transparency extremum found in the search range."""


class OutOfFigureRange(UserWarning):
    """Input lies outside the range the line fit was established on."""
