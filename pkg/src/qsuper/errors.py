"""Exception hierarchy shared by all qsuper modules."""


class QSuperError(Exception):
    """Base class for errors raised by qsuper."""


class ParseError(QSuperError, ValueError):
    pass


class NotSymmetrizable(QSuperError):
    pass


class DegeneratePairing(QSuperError):
    pass


class IndexOutOfRange(QSuperError, IndexError):
    pass


class UnknownName(QSuperError, KeyError):
    pass


class PoleAtZero(QSuperError, ArithmeticError):
    pass


class PoleAtOne(QSuperError, ArithmeticError):
    pass


class DegreeCutExceeded(QSuperError):
    pass


class DepthCutTooSmall(QSuperError):
    pass


class PathCollision(QSuperError):
    pass


class ToleranceNotMet(QSuperError):
    pass


class CounitViolation(QSuperError):
    pass


class NotInvertible(QSuperError, ArithmeticError):
    pass


class TruncationWarning(UserWarning):
    """A truncated module computation is only trustworthy below its depth cut."""
