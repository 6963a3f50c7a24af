"""Exception hierarchy shared by every module.

``InvalidInput`` covers violated preconditions (CLI exit status 2),
``ConsistencyError`` covers internal failures that must never fire on a
correct implementation (CLI exit status 3).
"""


class SpecurveError(Exception):
    """Base class for all package errors."""


class InvalidInput(SpecurveError, ValueError):
    """A precondition on the arguments was violated."""


class BudgetExceeded(InvalidInput):
    """The request is larger than the configured enumeration budget."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class Refusal(InvalidInput):
    """The computation is well defined but deliberately not attempted."""


class ConsistencyError(SpecurveError, ArithmeticError):
    """An identity that must hold exactly was found to fail."""


class PolynomialityError(ConsistencyError):
    """An interpolated coefficient appeared outside its allowed degree band."""
