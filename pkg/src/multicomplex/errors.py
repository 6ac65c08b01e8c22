"""Exception hierarchy shared by every layer of the package."""


class MulticomplexError(Exception):
    """Base class for all errors raised by this package."""


class LevelError(MulticomplexError, ValueError):
    """A level is outside the supported range, or two operands disagree on it."""


class IndexRangeError(MulticomplexError, IndexError):
    pass


class ShapeError(MulticomplexError, ValueError):
    pass


class FlavorError(MulticomplexError, ValueError):
    """An ideal flavor or a multiperplex precondition does not hold."""


class NullConeError(MulticomplexError, ArithmeticError):
    """An operation needs every idempotent component to be nonzero, and some vanish.

    ``indices`` holds the 0-based positions of the vanishing components.
    """

    def __init__(self, message, indices):
        super().__init__(message)
        self.indices = tuple(int(i) for i in indices)


class SingularMatrixError(NullConeError):
    pass


class NotSelfAdjointError(MulticomplexError, ValueError):
    pass
