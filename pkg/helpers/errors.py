"""Exception hierarchy for the Tate engine.

Every failure raised by the pipeline derives from ``TateError`` so the CLI can
map it to an exit code. Usage errors (bad specs, unsupported groups) are kept
apart from mathematical mismatches via ``UsageError``.
"""


class TateError(Exception):
    """Base class for all engine errors."""


class UsageError(TateError):
    """The request itself is malformed (CLI exit code 2)."""


# scalars
class NotPrime(UsageError):
    pass


class Reducible(UsageError):
    pass


class DivisionByZero(TateError):
    pass


# group algebra
class NotPPower(UsageError):
    pass


class WrongCharacteristic(UsageError):
    pass


class AlgebraMismatch(TateError):
    pass


class InvalidSpec(UsageError):
    pass


class UnsupportedGroup(UsageError):
    pass


# resolution / graded maps
class WrongKind(TateError):
    pass


class WindowTooSmall(TateError):
    pass


class DegreeMismatch(TateError):
    pass


class Infeasible(TateError):
    pass


# generators
class NegativeDegree(TateError):
    pass


class DegreeViolation(TateError):
    pass


class SameFactor(TateError):
    pass


# lifting
class NoLift(TateError):
    pass


class PositiveDegree(TateError):
    pass


class NotJ2Map(TateError):
    pass


# secondary / massey
class RegimeViolation(TateError):
    pass


class TranscriptionFailure(TateError):
    pass


class NotACocycle(TateError):
    pass


class CrossCheckMismatch(TateError):
    pass


class NotDefined(TateError):
    pass
