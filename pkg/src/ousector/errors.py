"""Exception hierarchy.

Input problems derive from :class:`ValueError`; failures of a numerical
procedure (search, iteration, sampling) derive from :class:`RuntimeError`.
"""


class OUSectorError(Exception):
    """Base class for every error raised by this package."""


class InvalidExponentError(OUSectorError, ValueError):
    pass


class InvalidDomainSpecError(OUSectorError, ValueError):
    pass


class PoleProximityError(OUSectorError, ValueError):
    pass


class DomainError(OUSectorError, ValueError):
    """Input lies outside the region where the operation is defined or claimed."""


class ResolutionError(OUSectorError, ValueError):
    """The requested evaluation cannot be resolved on the given grid."""


class DegenerateInputError(OUSectorError, ValueError):
    pass


class DivergentIntegralError(OUSectorError, ValueError):
    pass


class QuadratureOrderError(OUSectorError, ValueError):
    pass


class SizeError(OUSectorError, ValueError):
    pass


class TrialInvalidError(OUSectorError, ValueError):
    """A Gaussian trial function (or its image) is not in L^p(mu)."""


class SearchFailureError(OUSectorError, RuntimeError):
    pass


class SamplingError(OUSectorError, RuntimeError):
    pass


class InconclusiveProbeError(OUSectorError, RuntimeError):
    pass


class ConvergenceError(OUSectorError, RuntimeError):
    def __init__(self, message, last_iterate=None, estimate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.estimate = estimate
