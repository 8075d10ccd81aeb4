"""Exceptions raised by the spectral toolkit"""


class SpectralToolkitError(Exception):
    """Base class for every error raised by the services package"""


class InvalidProblemError(SpectralToolkitError, ValueError):
    """A parameter or parameter combination is outside the supported range"""


class QuadratureError(SpectralToolkitError):
    """Adaptive quadrature could not reach the requested tolerance"""


class TailBoundError(SpectralToolkitError):
    """No analytic tail bound is available or it cannot be met"""


class SymmetryError(SpectralToolkitError):
    """The operation relies on t -> -t symmetry the input does not have"""


class ModeCutoffError(SpectralToolkitError):
    """The Fourier mode loop cannot be closed with the given settings"""


class NonPositiveWeightError(SpectralToolkitError):
    """The mass matrix of a pencil has a nonpositive entry"""
