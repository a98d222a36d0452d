"""Parameters and prefactors shared by the closed-form evaluators."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DimensionError, PoleError
from ..specfun import pochhammer


def g_factor(N: int, alpha) -> complex:
    """``prod_{j=1}^N (j-1)!^2 Gamma(alpha+N-j+1) / Gamma(alpha+N)``.

    Evaluated as ``prod (j-1)!^2 / (alpha+N-j+1)_{j-1}``, which is exact
    rational arithmetic for integer ``alpha``.  Undefined when ``alpha`` is
    one of ``-1, ..., -(N-1)``.
    """
    if N < 1:
        raise DimensionError("N must be at least 1")
    alpha = complex(alpha)
    out = 1 + 0j
    for j in range(1, N + 1):
        p = pochhammer(alpha + N - j + 1, j - 1)
        if p == 0:
            raise PoleError(f"g_N(alpha) has a pole at alpha = {alpha.real:g}", location=alpha.real)
        out *= math.factorial(j - 1) ** 2 / p
    return out


def c_factor(N: int) -> float:
    """Angular volume ``pi^{N(N-1)/2} / prod_{j=1}^N j!`` of the Hermitian eigen-decomposition."""
    return math.pi ** (N * (N - 1) / 2) / math.prod(math.factorial(j) for j in range(1, N + 1))


def superfactorial_squared(N: int) -> float:
    """``prod_{j=1}^N (j-1)!^2``."""
    return float(math.prod(math.factorial(j - 1) ** 2 for j in range(1, N + 1)))


@dataclass(frozen=True)
class ClosedFormContext:
    """Size, exponents and the derived prefactors ``g_N`` and ``c_N``."""

    N: int
    alpha: complex
    beta: complex | None = None
    g_alpha: complex = 0j
    g_beta: complex | None = None
    c_N: float = 0.0

    @classmethod
    def create(cls, N: int, alpha, beta=None):
        alpha = complex(alpha)
        beta = None if beta is None else complex(beta)
        return cls(
            N=int(N),
            alpha=alpha,
            beta=beta,
            g_alpha=g_factor(N, alpha),
            g_beta=None if beta is None else g_factor(N, beta),
            c_N=c_factor(N),
        )
