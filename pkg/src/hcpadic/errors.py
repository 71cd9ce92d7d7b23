"""Exception hierarchy shared across the package."""


class PadicError(ArithmeticError):
    """Base class for p-adic arithmetic failures."""


class PrimeMismatchError(PadicError, ValueError):
    pass


class PrecisionError(PadicError):
    """More digits were requested than the operands actually carry."""


class PadicZeroDivisionError(PadicError, ZeroDivisionError):
    """Division by a value indistinguishable from zero at working precision."""


class ConvergenceError(PadicError, ValueError):
    """Argument outside the convergence domain of a p-adic series."""


class NoSquareRootError(PadicError, ValueError):
    pass


class OddValuationError(NoSquareRootError):
    pass


class NonResidueError(NoSquareRootError):
    pass


class DyadicDigitError(NoSquareRootError):
    """For p = 2 the unit digits a_1, a_2 are not both zero."""


class HenselError(PadicError, ValueError):
    """The simple-root hypotheses of Hensel's lemma do not hold."""


class PolynomialDivisionError(PadicError):
    """Non-zero remainder in an exact polynomial division."""


class ConstructionError(RuntimeError):
    """Two independent constructions of the same object disagree."""


class InvalidParameterError(ValueError):
    pass


class CapExceededError(ValueError):
    """Finite volume too large for full configuration enumeration."""
