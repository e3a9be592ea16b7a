"""Exception hierarchy shared by every module of the package."""


class RaagEmbedError(Exception):
    """Base class for all package errors."""


class DivisionByZero(RaagEmbedError, ZeroDivisionError):
    pass


class NegativeRadicand(RaagEmbedError, ValueError):
    pass


class DimensionMismatch(RaagEmbedError, ValueError):
    pass


class Singular(RaagEmbedError, ArithmeticError):
    pass


class NonIntegralEntry(RaagEmbedError, ValueError):
    pass


class TooSmall(RaagEmbedError, ValueError):
    pass


class UnsupportedExtension(RaagEmbedError, ArithmeticError):
    """A value would need a radical outside the multiquadratic field."""


class NotCommuting(RaagEmbedError, ValueError):
    pass


class NotUnit(RaagEmbedError, ValueError):
    """Rotation parameters with cos^2 + sin^2 != 1."""


class DegenerateInput(RaagEmbedError, ValueError):
    pass


class ClosureFailed(RaagEmbedError, ArithmeticError):
    pass


class NotInvertibleModP(RaagEmbedError, ArithmeticError):
    pass
