"""Exception hierarchy shared by every stage of the pipeline."""


class GpsThinError(Exception):
    """Base class for all library errors."""


# numfield
class NotSquarefree(GpsThinError):
    pass


class NotTotallyReal(GpsThinError):
    pass


class NotIrreducible(GpsThinError):
    pass


class RadicandIsSquare(GpsThinError):
    pass


class NotTotallyRealExtension(GpsThinError):
    pass


class LevelMismatch(GpsThinError):
    pass


class ZeroElement(GpsThinError, ZeroDivisionError):
    """Raised for division by zero and for sign queries on zero."""


DivisionByZero = ZeroElement


class BaseLevelElement(GpsThinError):
    pass


# forms
class DimensionMismatch(GpsThinError):
    pass


class IsotropicVector(GpsThinError):
    pass


class NoneFound(GpsThinError):
    pass


class NotAnIsometry(GpsThinError):
    pass


# gps
class InvalidParameters(GpsThinError):
    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record


class NotJ2Isometry(GpsThinError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# bending
class NoUnitFound(GpsThinError):
    pass


class DegreeOne(GpsThinError):
    pass


class SignConditionFailed(GpsThinError):
    pass


class NotAStabilizer(GpsThinError):
    pass


class MemberNotUnitary(GpsThinError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# certify
class EmptyGenerators(GpsThinError):
    pass


class DimensionTooLarge(GpsThinError):
    pass


class MissingStage(GpsThinError):
    pass


# cli
class SchemaViolation(GpsThinError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(f"{p or '/'}: {m}" for p, m in self.errors))


class UnknownKey(SchemaViolation):
    pass
