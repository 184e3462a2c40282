"""Exception types raised by the knr package."""


class KnrError(Exception):
    """Base class for every error raised by this package."""


class PoleError(KnrError, ValueError):
    """Argument sits on a pole of the Gamma function (a non-positive integer)."""


class NonConvergence(KnrError, ArithmeticError):
    """A series did not meet its stop rule within the allowed number of terms."""


class InvalidParams(KnrError, ValueError):
    pass


class SingularDenominator(KnrError, ZeroDivisionError):
    pass


class VacuumState(KnrError, ArithmeticError):
    """g2(0) requested for a state with (numerically) zero mean photon number."""


class TruncationNotConverged(KnrError, RuntimeError):
    """The Fock-space truncation could not be certified as converged."""


class SingularSystem(KnrError, RuntimeError):
    pass


class DegenerateWindow(KnrError, ValueError):
    pass


class UnknownPreset(KnrError, KeyError):
    pass
