"""Scalar special functions over complex arguments.

Hypergeometric functions are summed from their power series with a term
recursion.  On the unit circle the Gauss series converges only
algebraically; there the partial sums are extrapolated with a least-squares
fit of their known asymptotic form instead of applying any transformation
formula.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "SeriesControl",
    "log_gamma",
    "gamma",
    "rgamma",
    "gen_binomial",
    "binomial_gamma",
    "pochhammer",
    "kummer_1f1",
    "kummer_1f1_deriv",
    "gauss_2f1",
    "gauss_2f1_deriv",
    "barnes_g_int",
    "binom_convolution_check",
    "is_nonpositive_integer",
    "is_nonnegative_integer",
]


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for the hypergeometric series."""

    rel_tol: float = 1e-14
    max_terms: int = 10000
    consecutive_small: int = 3

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError("rel_tol must lie in (0, 1)")
        if self.max_terms < 10:
            raise ValueError("max_terms must be at least 10")
        if self.consecutive_small < 1:
            raise ValueError("consecutive_small must be positive")


DEFAULT_CONTROL = SeriesControl()


def _near_int(z, tol=1e-13):
    z = complex(z)
    r = round(z.real)
    return abs(z.imag) <= tol and abs(z.real - r) <= tol * max(1.0, abs(r)), int(r)


def is_nonpositive_integer(z):
    ok, r = _near_int(z)
    return ok and r <= 0


def is_nonnegative_integer(z):
    ok, r = _near_int(z)
    return ok and r >= 0


def log_gamma(z):
    """Principal branch of log Gamma(z)."""
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}", location=round(z.real))
    return complex(special.loggamma(z))


def gamma(z):
    return cmath.exp(log_gamma(z))


def rgamma(z):
    """1/Gamma(z); entire, zero at the non-positive integers."""
    z = complex(z)
    if is_nonpositive_integer(z):
        return 0j
    return complex(special.rgamma(z))


def gen_binomial(alpha, k):
    """``alpha (alpha-1) ... (alpha-k+1) / k!`` for integer ``k >= 0``."""
    if k < 0:
        raise DomainError(f"binomial lower index must be >= 0, got {k}")
    out = 1 + 0j
    alpha = complex(alpha)
    for i in range(k):
        out *= (alpha - i) / (i + 1)
    return out


def binomial_gamma(upper, lower):
    """``Gamma(u+1) / (Gamma(l+1) Gamma(u-l+1))`` for complex lower index.

    Integer cases use the exact product form, taking the limit along fixed
    ``u - l`` so that e.g. ``binomial_gamma(-3, -3) = 1``.
    """
    diff_int, n = _near_int(complex(upper) - complex(lower))
    if diff_int and n >= 0:
        return gen_binomial(upper, n)
    is_int, k = _near_int(lower)
    if is_int:
        return gen_binomial(upper, k) if k >= 0 else 0j
    return cmath.exp(log_gamma(complex(upper) + 1)) * rgamma(complex(lower) + 1) * rgamma(
        complex(upper) - complex(lower) + 1
    )


def pochhammer(a, n):
    out = 1 + 0j
    for i in range(n):
        out *= a + i
    return out


def _check_denominator(c, name):
    if is_nonpositive_integer(c):
        raise PoleError(f"{name} = {complex(c)} is a non-positive integer", location=round(complex(c).real))


def _sum_series(ratio, ctl, stop_at=None):
    """Sum t_0 = 1, t_{m+1} = t_m * ratio(m) with the convergence policy."""
    total = 1 + 0j
    term = 1 + 0j
    small = 0
    for m in range(ctl.max_terms):
        if stop_at is not None and m >= stop_at:
            return total
        term = term * ratio(m)
        total += term
        if abs(term) <= ctl.rel_tol * abs(total) or term == 0:
            small += 1
            if small >= ctl.consecutive_small:
                return total
        else:
            small = 0
    raise ConvergenceError(
        f"series not converged after {ctl.max_terms} terms", tail_estimate=abs(term), partial=total
    )


def kummer_1f1(a, b, z, ctl=DEFAULT_CONTROL):
    """Kummer's confluent hypergeometric function 1F1(a; b; z)."""
    a, b, z = complex(a), complex(b), complex(z)
    _check_denominator(b, "b")
    if z == 0:
        return 1 + 0j
    stop = -round(a.real) if is_nonpositive_integer(a) else None
    return _sum_series(lambda m: (a + m) * z / ((b + m) * (m + 1)), ctl, stop)


def kummer_1f1_deriv(a, b, z, n, ctl=DEFAULT_CONTROL):
    """n-th z-derivative: (a)_n/(b)_n 1F1(a+n; b+n; z)."""
    coeff = pochhammer(complex(a), n) / pochhammer(complex(b), n)
    if coeff == 0:
        return 0j
    return coeff * kummer_1f1(a + n, b + n, z, ctl)


def _extrapolate(partial, Ms, expo, osc=None, order=None):
    """Least-squares limit of partial sums S_M ~ S + osc_M M^expo (f_0 + f_1/M + ...)."""
    Ms = np.asarray(Ms)
    order = len(Ms) - 6 if order is None else order
    x = (Ms + 0.5) / (Ms[-1] + 0.5)
    A = np.empty((len(Ms), order + 2), dtype=complex)
    A[:, 0] = 1
    for i in range(order + 1):
        A[:, i + 1] = x ** (expo - i)
    if osc is not None:
        A[:, 1:] *= np.asarray(osc)[:, None]
    sol, *_ = np.linalg.lstsq(A, partial[Ms], rcond=None)
    return complex(sol[0])


def _unit_circle_limit(a, b, c, z, n_terms=2000, points=10):
    """Extrapolated sum of the Gauss series for |z| = 1.

    Partial sums behave as S_M = S + z^M M^p (f_0 + f_1/M + ...), with
    p = a+b-c (z = 1) or a+b-c-1 (z != 1).
    """
    terms = np.empty(n_terms + 1, dtype=complex)
    terms[0] = 1
    for m in range(n_terms):
        terms[m + 1] = terms[m] * (a + m) * (b + m) / ((c + m) * (m + 1)) * z
    partial = np.cumsum(terms)
    on_one = abs(z - 1) < 1e-12
    expo = a + b - c if on_one else a + b - c - 1
    Ms = np.unique(np.round(np.geomspace(n_terms / 8, n_terms, points)).astype(int))
    osc = None if on_one else z ** (Ms - Ms[-1]).astype(float)
    return _extrapolate(partial, Ms, expo, osc)


def gauss_2f1(a, b, c, z, ctl=DEFAULT_CONTROL):
    """Gauss hypergeometric function 2F1(a, b; c; z) from its series.

    Valid for |z| < 1, for |z| = 1 with Re(c-a-b) > 0, and for any z when
    ``a`` or ``b`` is a non-positive integer (terminating series).
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    _check_denominator(c, "c")
    stops = [-round(p.real) for p in (a, b) if is_nonpositive_integer(p)]
    stop = min(stops) if stops else None
    if z == 0 or stop == 0:
        return 1 + 0j
    ratio = lambda m: (a + m) * (b + m) * z / ((c + m) * (m + 1))  # noqa: E731
    if stop is not None:
        return _sum_series(ratio, ctl, stop)
    r = abs(z)
    if r > 1 + 1e-12:
        raise DomainError(f"2F1 series diverges for |z| = {r:g} > 1")
    if r < 1 - 1e-12:
        return _sum_series(ratio, ctl)
    if (c - a - b).real <= 0:
        raise DomainError("2F1 on |z| = 1 requires Re(c - a - b) > 0")
    if abs(z - 1) > 1e-12 and abs(z - 1) < 0.05:
        raise DomainError("2F1 on |z| = 1 is only supported at z = 1 or away from it")
    try:
        return _sum_series(ratio, SeriesControl(ctl.rel_tol, min(ctl.max_terms, 2000), ctl.consecutive_small))
    except ConvergenceError:
        return _unit_circle_limit(a, b, c, z)


def gauss_2f1_deriv(a, b, c, z, n, ctl=DEFAULT_CONTROL):
    """n-th z-derivative: (a)_n (b)_n/(c)_n 2F1(a+n, b+n; c+n; z)."""
    coeff = pochhammer(complex(a), n) * pochhammer(complex(b), n) / pochhammer(complex(c), n)
    if coeff == 0:
        return 0j
    return coeff * gauss_2f1(a + n, b + n, c + n, z, ctl)


def barnes_g_int(n):
    """log G(n) for integer n >= 1, with G(n) = prod_{k=1}^{n-2} k!."""
    if int(n) != n or n < 1:
        raise DomainError(f"integer Barnes G needs n >= 1, got {n}")
    return float(sum(math.lgamma(k + 1) for k in range(1, int(n) - 1)))


def binom_convolution_check(alpha, beta, m, tail_cutoff):
    """Both sides of sum_k C(alpha, m+k) C(beta, k) = C(alpha+beta, beta+m).

    The left side sums ``k = 0..tail_cutoff`` with product-form binomials
    (negative lower index counts as zero); when neither parameter is a
    non-negative integer, the algebraic tail beyond the cutoff is added by
    extrapolating the partial sums.  The right side uses Gamma functions.
    """
    alpha, beta = complex(alpha), complex(beta)
    finite = is_nonnegative_integer(alpha) or is_nonnegative_integer(beta)
    if not finite and (alpha + beta).real <= -1:
        raise DomainError("convolution identity needs Re(alpha+beta) > -1")
    if tail_cutoff < abs(m) + 10:
        raise DomainError("tail_cutoff must be at least |m| + 10")
    terms = np.zeros(tail_cutoff + 1, dtype=complex)
    start = max(0, -m)
    if start <= tail_cutoff:
        ba = gen_binomial(alpha, m + start)
        bb = gen_binomial(beta, start)
        for k in range(start, tail_cutoff + 1):
            terms[k] = ba * bb
            ba *= (alpha - (m + k)) / (m + k + 1)
            bb *= (beta - k) / (k + 1)
    partial = np.cumsum(terms)
    lhs = complex(partial[-1])
    if not finite:
        lo = max(start + 5, tail_cutoff // 4)
        Ms = np.unique(np.round(np.geomspace(lo, tail_cutoff, 12)).astype(int))
        order = min(6, len(Ms) - 4)
        if order >= 1:
            lhs = _extrapolate(partial, Ms, -(alpha + beta + 1), order=order)
    rhs = binomial_gamma(alpha + beta, beta + m)
    return lhs, rhs
