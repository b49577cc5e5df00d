"""Exception hierarchy.

Every error class carries an ``exit_code`` used by the command-line front end,
so that each class maps to exactly one process exit status.
"""


class DRWError(Exception):
    exit_code = 1

    def __init__(self, message="", **witness):
        super().__init__(message)
        self.witness = witness

    def to_json(self):
        return {
            "error": type(self).__name__,
            "message": str(self),
            "witness": {k: repr(v) if not isinstance(v, (int, str, list, type(None))) else v
                        for k, v in self.witness.items()},
        }


# exactalg
class NotSublattice(DRWError):
    pass


class NotDivisible(DRWError):
    pass


class NotAFrobeniusLift(DRWError):
    exit_code = 3


class InvalidJob(DRWError):
    exit_code = 3


class ParseError(DRWError):
    exit_code = 3

    def __init__(self, message, position=None, text=None):
        super().__init__(message, position=position, text=text)
        self.position = position


# witt
class MismatchedParameters(DRWError):
    pass


class TorsionCoefficients(DRWError):
    pass


class NotCharP(DRWError):
    pass


class NotInVImage(DRWError):
    pass


class DworkDivisionFailure(DRWError):
    exit_code = 3


# derham
class MismatchedRing(DRWError):
    pass


class RelationViolated(DRWError):
    exit_code = 4


# crystal
class CrystalValidationError(DRWError):
    exit_code = 3


class NotIntegrable(CrystalValidationError):
    pass


class NotHorizontal(CrystalValidationError):
    pass


class NotUnitRoot(CrystalValidationError):
    pass


class NotHomogeneous(CrystalValidationError):
    pass


class MismatchedBase(CrystalValidationError):
    pass


class WindowOverflow(DRWError):
    exit_code = 5


# dieudonne
class NotInjective(DRWError):
    exit_code = 3


class ImageOutsideEta(DRWError):
    exit_code = 4


class WindowIncoherent(DRWError):
    exit_code = 5


class NotStabilized(DRWError):
    exit_code = 2


class AxiomViolation(DRWError):
    exit_code = 4


# drw
class ActionOverflow(DRWError):
    exit_code = 5


class QuasiIsoFailure(DRWError):
    exit_code = 4


class Mismatch(DRWError):
    exit_code = 4


class BaseChangeMismatch(DRWError):
    exit_code = 4
