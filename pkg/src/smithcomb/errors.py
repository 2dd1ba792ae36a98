"""Exception types shared across the package."""


class SmithCombError(Exception):
    """Base class for every error raised by smithcomb."""


class BudgetExceeded(SmithCombError, ArithmeticError):
    """An intermediate value outgrew the configured size budget."""


class UnknownVariable(SmithCombError, KeyError):
    pass


class NonSquare(SmithCombError, ValueError):
    pass


class KOutOfRange(SmithCombError, ValueError):
    pass


class NonDivisible(SmithCombError, ArithmeticError):
    """Minor gcds do not form a divisibility chain; no Smith form can exist."""

    def __init__(self, message, step=None, candidate=None):
        super().__init__(message)
        self.step = step
        self.candidate = candidate


class TooLarge(SmithCombError, ValueError):
    """Input exceeds the desk-scale limits of an exhaustive routine."""


class BadSink(SmithCombError, ValueError):
    pass


class Disconnected(SmithCombError, ValueError):
    pass


class NotToppleable(SmithCombError, ValueError):
    pass


class SinkTopple(SmithCombError, ValueError):
    pass


class StepLimit(SmithCombError, RuntimeError):
    pass


class Mismatch(SmithCombError, ValueError):
    pass


class NotStable(SmithCombError, ValueError):
    pass


class TTooSmall(SmithCombError, ValueError):
    pass


class OutOfShape(SmithCombError, ValueError):
    pass


class NotSemigeneric(SmithCombError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MNTooSmall(SmithCombError, ValueError):
    pass
