"""
Error Hierarchy Module

Every failure raised by grmbot derives from GrmError and from the closest
builtin exception, so callers may catch either the precise kind or the broad
family (ValueError for bad parameters, RuntimeError for budget and coverage
limits).
"""


class GrmError(Exception):
    """Base class of all grmbot errors."""


# Field construction and arithmetic


class NonPrimeP(GrmError, ValueError):
    pass


class ReducibleModulus(GrmError, ValueError):
    pass


class DegreeMismatch(GrmError, ValueError):
    pass


class DivisionByZero(GrmError, ZeroDivisionError):
    pass


class UnsupportedField(GrmError, ValueError):
    pass


class SingularMatrix(GrmError, ValueError):
    pass


# Polynomial ring


class VariableCountMismatch(GrmError, ValueError):
    pass


class FieldMismatch(GrmError, ValueError):
    pass


class SingleVariable(GrmError, ValueError):
    pass


class DoesNotVanish(GrmError, ValueError):
    pass


# Formula engine


class OutOfRangeR(GrmError, ValueError):
    pass


class OutOfRangeB(GrmError, ValueError):
    pass


class NotQuadratic(GrmError, ValueError):
    pass


class EvenCharacteristic(GrmError, RuntimeError):
    """Raised where the symmetric-matrix method needs odd characteristic."""


class UncoveredCase(GrmError, RuntimeError):
    """Parameters fall outside every range a closed form is known for."""


# Arrangements


class TooManyBlocks(GrmError, ValueError):
    pass


class BlockTooBig(GrmError, ValueError):
    pass


class ClosedFormMismatch(GrmError, RuntimeError):
    """A point count disagrees with the configuration's closed form."""


# Constructors


class DependentForms(GrmError, ValueError):
    pass


class RepeatedShift(GrmError, ValueError):
    pass


class FullBlock(GrmError, ValueError):
    pass


class BranchRangeViolation(GrmError, ValueError):
    pass


class ParamSideCondition(GrmError, ValueError):
    pass


class NotExactCase(GrmError, RuntimeError):
    pass


class DuplicateLine(GrmError, ValueError):
    pass


# Budgets


class BudgetExceeded(GrmError, RuntimeError):
    pass


class SizeBudgetExceeded(BudgetExceeded):
    pass
