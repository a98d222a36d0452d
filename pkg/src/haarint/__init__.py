"""Unitary group integrals of Ingham-Siegel and Fisher-Hartwig type.

Three independent evaluation routes are provided: hypergeometric
determinant closed forms (:mod:`haarint.closedform`), truncated character
expansions (:mod:`haarint.charexp`) and Haar Monte Carlo
(:mod:`haarint.haar_mc`).  :mod:`haarint.runner` and :mod:`haarint.verify`
cross-check them.
"""
from . import charexp, closedform, haar_mc, linalg, specfun
from .errors import (
    CapabilityError,
    ConvergenceError,
    DimensionError,
    DomainError,
    HaarintError,
    InputError,
    NumericalError,
    PoleError,
)
from .results import EvalResult

__version__ = "0.1.0"

__all__ = [
    "charexp",
    "closedform",
    "haar_mc",
    "linalg",
    "specfun",
    "EvalResult",
    "HaarintError",
    "DimensionError",
    "InputError",
    "DomainError",
    "PoleError",
    "NumericalError",
    "ConvergenceError",
    "CapabilityError",
]
