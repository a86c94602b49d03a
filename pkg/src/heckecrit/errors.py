"""Exception types.  Each carries the CLI exit code it maps to."""


class HeckeError(Exception):
    exit_code = 2


# input and mathematical preconditions (exit code 2)
class NonMonic(HeckeError):
    pass


class ReduciblePolynomial(HeckeError):
    pass


class PrecisionTooLow(HeckeError):
    pass


class NoCMSubfield(HeckeError):
    pass


class InconsistentTower(HeckeError):
    pass


class SingularMatrix(HeckeError):
    pass


class IndexDivisor(HeckeError):
    pass


class ModulusTooLarge(HeckeError):
    pass


class NotTotallyImaginary(HeckeError):
    pass


class UnknownPrincipality(HeckeError):
    pass


class FiberInconstant(HeckeError):
    pass


class PurityViolation(HeckeError):
    pass


class NoCharacterExists(HeckeError):
    pass


class NotCoprime(HeckeError):
    pass


class PoleAtS(HeckeError):
    pass


class NotCritical(HeckeError):
    pass


class NotTowerCompatible(HeckeError):
    pass


class IndexMismatch(HeckeError):
    pass


class SingularInput(HeckeError):
    pass


class ZeroBottomRow(HeckeError):
    pass


class Ramified(HeckeError):
    pass


class RestrictionLValueZero(HeckeError):
    pass


# numerical convergence (exit code 4)
class NotConverged(HeckeError):
    exit_code = 4


class RootNumberInconsistent(HeckeError):
    exit_code = 4


class QuadratureFailed(HeckeError):
    exit_code = 4


# certification (exit code 3)
class HeightExceeded(HeckeError):
    exit_code = 3


class CovarianceViolation(HeckeError):
    exit_code = 3

    def __init__(self, message, sigma=None, discrepancy=None, report=None):
        super().__init__(message)
        self.sigma = sigma
        self.discrepancy = discrepancy
        self.report = report
