"""
Numerical error hierarchy shared by the calculation modules
"""


class NumericalError(Exception):
    """Base class for numerical failures"""
    pass


class QuadratureError(NumericalError):
    """Adaptive integration did not converge to tolerance"""
    pass


class DivergentMomentError(NumericalError):
    """Requested jump-measure integral is infinite"""
    pass


class NonIntegrableError(NumericalError):
    """Jump measure fails the (1 ^ x^2) integrability condition"""
    pass


class BoundedVariationError(NumericalError):
    """Model has bounded variation (sigma = 0 and finite first moment near zero)"""
    pass


class UnsupportedError(NumericalError):
    """Operation not available for this jump family"""
    pass


class EnvelopeRangeError(NumericalError):
    """Query lies outside the range of a monotone envelope"""
    pass


class NoBracketError(NumericalError):
    """No sign change found on the scan range"""
    pass


class PoleAtThetaError(NumericalError):
    """Ladder exponent evaluated at its removable pole"""
    pass


class OutOfRangeError(NumericalError):
    """No saddle point exists for the requested (t, x)"""
    pass


class NoConvergenceError(NumericalError):
    """Iteration or node budget exhausted"""
    pass


class NegativeDensityError(NumericalError):
    """Inversion produced a clearly negative density"""
    pass
