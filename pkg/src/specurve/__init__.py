"""Exact engines for Hurwitz numbers, Hodge integrals, spectral curves and Apery's zeta(3) sequences."""

__version__ = "0.1.0"

from .errors import (BudgetExceeded, ConsistencyError, InvalidInput, PolynomialityError,
                     Refusal, SpecurveError)

__all__ = [
    "__version__",
    "SpecurveError",
    "InvalidInput",
    "BudgetExceeded",
    "Refusal",
    "ConsistencyError",
    "PolynomialityError",
]
