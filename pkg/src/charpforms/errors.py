"""Exception hierarchy shared by all charpforms modules."""


class CharpError(Exception):
    """Base class for all library errors."""


class ContextMismatch(CharpError):
    pass


class FrameMismatch(CharpError):
    pass


class UnknownVariable(CharpError):
    pass


class ZeroElement(CharpError):
    pass


class InvalidSubfield(CharpError):
    pass


class NotPIndependent(CharpError):
    pass


class DegreeOverflow(CharpError):
    pass


class DegreeZero(CharpError):
    pass


class NotTopDegree(CharpError):
    pass


class NotPrimeToP(CharpError):
    pass


class NotInNu(CharpError):
    pass


class IsExact(CharpError):
    pass


class BadCodimension(CharpError):
    pass


class UnsupportedExtension(CharpError):
    """A prime-to-p extension that cannot be realized as a constant-field
    extension was required."""


class NotInWedgeIdeal(CharpError):
    pass


class ZeroPolynomial(CharpError):
    pass


class NotPMonic(CharpError):
    pass


class Reducible(CharpError):
    pass


class NotGeometricallyNonreduced(CharpError):
    pass


class MissingFunctionField(CharpError):
    pass


class ParseError(CharpError):
    def __init__(self, message, position):
        super().__init__(f"{message} (column {position + 1})")
        self.position = position
