"""Exception hierarchy shared across the package."""


class MonoaddError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteValue(MonoaddError):
    pass


class DomainError(MonoaddError):
    pass


class InvalidOperand(MonoaddError):
    pass


class DivideByZero(MonoaddError):
    pass


class ShapeError(MonoaddError):
    pass


class ParseError(MonoaddError):
    pass


class DegenerateFormat(MonoaddError):
    pass


class PivotBreakdown(MonoaddError):
    pass
