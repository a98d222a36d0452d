"""Toeplitz-determinant forms without external matrices.

``cor_tw`` is ``int dU det(1 +- U^dagger)^alpha exp(b Tr U)`` and
``fh_standard`` is ``int dU det(1 + U)^alpha det(1 + U^dagger)^beta``.
Both reduce by Andreief's identity to Toeplitz determinants of Fourier
coefficients.  With ``int dU = 1`` the determinant alone is the integral
(``unit_mean``); the ``paper`` normalization multiplies it by ``(2 pi)^{-N}``.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .. import linalg
from ..errors import ConvergenceError, DimensionError, DomainError
from ..results import EvalResult
from ..specfun import barnes_g_int, binomial_gamma, gen_binomial, is_nonnegative_integer

__all__ = ["cor_tw", "fh_standard", "tw_coefficient", "NORMALIZATIONS"]

NORMALIZATIONS = ("unit_mean", "paper")


def _normalize(value, N, normalization):
    if normalization not in NORMALIZATIONS:
        raise DomainError(f"normalization must be one of {NORMALIZATIONS}")
    return value if normalization == "unit_mean" else value / (2 * math.pi) ** N


def _sign_value(sign):
    if sign in ("+", 1):
        return 1.0
    if sign in ("-", -1):
        return -1.0
    raise DomainError(f"sign must be '+' or '-', got {sign!r}")


def tw_coefficient(alpha, s, b, m, rel_tol=1e-16, max_terms=2000) -> complex:
    """``sum_{l >= max(0, -m)} C(alpha, m+l) (s b)^l / l!``.

    The ``m``-th Fourier coefficient of ``(1 + s t^{-1})^alpha exp(b t)``
    up to sign conventions; for ``m >= 0`` it equals
    ``C(alpha, m) 1F1(-alpha+m; m+1; -s b)``.
    """
    alpha, sb = complex(alpha), complex(s) * complex(b)
    start = max(0, -m)
    if sb == 0:
        return gen_binomial(alpha, m) if start == 0 else 0j
    term = gen_binomial(alpha, m + start) * sb**start / math.factorial(start)
    total = term
    for l in range(start, start + max_terms):
        term = term * (alpha - (m + l)) / (m + l + 1) * sb / (l + 1)
        total += term
        if abs(term) <= rel_tol * abs(total) and l > abs(sb):
            return total
        if term == 0:
            return total
    raise ConvergenceError("Fourier coefficient series did not converge", tail_estimate=abs(term), partial=total)


def cor_tw(alpha, sign, b, N: int, normalization: str = "unit_mean") -> EvalResult:
    """``det[C(alpha, j-k) 1F1(-alpha+j-k; j-k+1; -+b)]_{j,k=1}^N``.

    Entries with ``j < k`` come from the series of :func:`tw_coefficient`,
    where the diverging Gamma functions of the hypergeometric form cancel.
    """
    if N < 1:
        raise DimensionError("N must be at least 1")
    alpha = complex(alpha)
    if alpha.real <= -1:
        raise DomainError("cor_tw needs Re(alpha) > -1")
    s = _sign_value(sign)
    coeff = {m: tw_coefficient(alpha, s, b, m) for m in range(-(N - 1), N)}
    T = np.array([[coeff[j - k] for k in range(N)] for j in range(N)], dtype=complex)
    value = _normalize(linalg.det(T), N, normalization)
    return EvalResult(value, {"normalization": normalization, "sign": "+" if s > 0 else "-"})


def fh_standard(alpha, beta, N: int, variant: str = "binom_det", normalization: str = "unit_mean") -> EvalResult:
    """Standard Fisher-Hartwig integral ``int dU det(1 + U)^alpha det(1 + U^dagger)^beta``.

    ``binom_det``: ``det[C(alpha+beta, beta-j+k)]``.  ``barnes_g``:
    ``G(a+b+N+1) G(a+1) G(b+1) G(N+1) / (G(a+b+1) G(a+N+1) G(b+N+1))``,
    integer exponents only.
    """
    if N < 1:
        raise DimensionError("N must be at least 1")
    alpha, beta = complex(alpha), complex(beta)
    if (alpha + beta).real <= -1:
        raise DomainError("fh_standard needs Re(alpha + beta) > -1")
    if variant == "binom_det":
        T = np.array(
            [[binomial_gamma(alpha + beta, beta - j + k) for k in range(N)] for j in range(N)], dtype=complex
        )
        value = linalg.det(T)
    elif variant == "barnes_g":
        if not (is_nonnegative_integer(alpha) and is_nonnegative_integer(beta)):
            raise DomainError("barnes_g variant needs non-negative integer exponents")
        a, bb = round(alpha.real), round(beta.real)
        G = barnes_g_int
        log_value = G(a + bb + N + 1) + G(a + 1) + G(bb + 1) + G(N + 1) - G(a + bb + 1) - G(a + N + 1) - G(bb + N + 1)
        value = complex(cmath.exp(log_value))
    else:
        raise DomainError("variant must be 'binom_det' or 'barnes_g'")
    value = _normalize(value, N, normalization)
    return EvalResult(value, {"normalization": normalization, "variant": variant})
