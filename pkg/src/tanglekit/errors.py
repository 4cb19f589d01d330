"""Exception hierarchy shared by every tanglekit module."""


class TangleError(Exception):
    """Base class for all errors raised by tanglekit."""


class ZeroVector(TangleError, ValueError):
    pass


class BadDimension(TangleError, ValueError):
    pass


class BadSubset(TangleError, ValueError):
    pass


class BadIndex(TangleError, ValueError):
    pass


class BadWord(TangleError, ValueError):
    pass


class BadArity(TangleError, ValueError):
    pass


class BadPair(TangleError, ValueError):
    pass


class BadParam(TangleError, ValueError):
    pass


class NotOrthonormal(TangleError, ValueError):
    pass


class RankOverflow(TangleError, ValueError):
    """Density matrix rank is outside the regime the roof optimizer supports."""


class SpectralFailure(TangleError, ArithmeticError):
    """A spectrum that must be real and nonnegative is not, beyond tolerance."""


class NoConvergence(TangleError, RuntimeError):
    pass
