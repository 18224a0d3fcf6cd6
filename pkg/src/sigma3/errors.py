"""Exception hierarchy for sigma3."""


class Sigma3Error(Exception):
    """Base class for all library errors."""


class RepeatedRoots(Sigma3Error, ValueError):
    pass


class PoleAtPoint(Sigma3Error, ZeroDivisionError):
    pass


class InfinityNotSupported(Sigma3Error, ValueError):
    pass


class TooFarFromInfinity(Sigma3Error, ValueError):
    pass


class RootFindFailure(Sigma3Error, ArithmeticError):
    pass


class DegenerateGeometry(Sigma3Error):
    pass


class QuadratureNonConvergence(Sigma3Error, ArithmeticError):
    pass


class IllConditionedOmega(Sigma3Error, ArithmeticError):
    pass


class DegenerateNormalization(Sigma3Error, ArithmeticError):
    pass


class OnThetaDivisor(Sigma3Error, ArithmeticError):
    pass


class InconsistentChi(Sigma3Error, ArithmeticError):
    pass


class PathNearBranchPoint(Sigma3Error):
    pass


class AtOrigin(Sigma3Error, ArithmeticError):
    pass


class DegenerateConfiguration(Sigma3Error, ValueError):
    pass
