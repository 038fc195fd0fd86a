"""Exception hierarchy shared by every module of the package."""


class EtaMuError(Exception):
    """Base class for all errors raised by :mod:`etamu`."""


class ParameterOutOfRange(EtaMuError, ValueError):
    """A channel or modulation parameter lies outside its admissible interval."""

    def __init__(self, field, value, allowed):
        self.field = field
        self.value = value
        self.allowed = allowed
        super().__init__(f"{field}={value!r} is outside the allowed range {allowed}")


class DegenerateParameters(EtaMuError, ValueError):
    pass


class PoleAtNonPositiveInteger(EtaMuError, ValueError):
    pass


class ZeroBase(EtaMuError, ValueError):
    pass


class NonPositiveShape(EtaMuError, ValueError):
    pass


class InvalidOrder(EtaMuError, ValueError):
    pass


class EvaluationAtBranchPoint(EtaMuError, ValueError):
    pass


class ConvergenceFailure(EtaMuError, ArithmeticError):
    """Raised when an error estimate stays above tolerance at the node budget."""

    def __init__(self, message, value=None, abs_err_est=None):
        self.value = value
        self.abs_err_est = abs_err_est
        super().__init__(message)


class ContourCrossesSingularity(EtaMuError, ValueError):
    pass


class InvalidAbscissa(EtaMuError, ValueError):
    pass


class NonIntegerClusterCount(EtaMuError, ValueError):
    pass


class TruncationBoundNotMet(EtaMuError, ArithmeticError):
    pass
