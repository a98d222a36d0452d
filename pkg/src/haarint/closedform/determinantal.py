"""Hypergeometric determinant formulas for the four group integrals.

Each evaluator takes the spectra of ``AD`` (and ``BC``) and returns a ratio
``det[f_j(mu^2_k)] / Delta_N(mu^2)`` (one-matrix) or
``det[K(mu^2_j, nu^2_k)] / (Delta_N(mu^2) Delta_N(nu^2))`` (two-matrix).
Coinciding spectrum points are handled by derivative columns in
:func:`haarint.linalg.det_ratio`; the derivatives come from
``d^n/dz^n 1F1(a; c; z) = (a)_n/(c)_n 1F1(a+n; c+n; z)`` and its Gauss
analogue combined with the product rule for the ``z^{N-j}`` factor.
"""
from __future__ import annotations

import math

import numpy as np

from .. import linalg
from ..errors import DimensionError, DomainError
from ..results import EvalResult
from ..specfun import gauss_2f1_deriv, kummer_1f1_deriv
from .context import g_factor, superfactorial_squared

__all__ = [
    "zis1",
    "zis2",
    "zfh1",
    "zfh2",
    "spectrum_of_product",
    "rescale_pair",
    "zis1_matrices",
    "zis2_matrices",
    "zfh1_matrices",
    "zfh2_matrices",
]

ZIS1_VARIANTS = ("eq_1IS", "eq_1ISalt")
ZFH1_VARIANTS = ("eq_1FH", "eq_1FHprime")


def _spectrum(values):
    return values if isinstance(values, linalg.Spectrum) else linalg.Spectrum.from_values(values)


def _kummer_neg(a, c):
    """n-th derivative of ``z -> 1F1(a; c; -z)``."""

    def deriv(z, n):
        return (-1) ** n * kummer_1f1_deriv(a, c, -z, n)

    return deriv


def _gauss(a, b, c):
    def deriv(z, n):
        return gauss_2f1_deriv(a, b, c, z, n)

    return deriv


class _PowerColumn:
    """``z -> F(z) z^p`` with derivatives by the product rule."""

    def __init__(self, F, p):
        self.F = F
        self.p = p

    def __call__(self, z, order):
        z = complex(z)
        total = 0j
        for k in range(min(order, self.p) + 1):
            mono = math.perm(self.p, k) * z ** (self.p - k)
            if mono == 0:
                continue
            total += math.comb(order, k) * self.F(z, order - k) * mono
        return total


def _product_kernel(h):
    """Mixed derivatives of ``(x, y) -> h(x y)`` from the derivatives of ``h``."""

    def kernel(x, y, p, q):
        t = x * y
        total = 0j
        for k in range(min(p, q) + 1):
            total += math.comb(p, k) * math.perm(q, k) * x ** (q - k) * y ** (p - k) * h(t, p + q - k)
        return total

    return kernel


def _diagnostics(*specs, **extra):
    d = {"clusters": [s.clusters for s in specs], "confluent": any(s.has_clusters for s in specs)}
    d.update(extra)
    return d


def zis1(spectrum_mu2, alpha, variant: str = "eq_1IS") -> EvalResult:
    """One-matrix Ingham-Siegel integral ``int dU det(1 + U^dagger D)^alpha exp Tr(A U)``.

    ``det[1F1(a_j; N-j+1; -mu^2_k) mu_k^{2(N-j)}] / Delta_N(mu^2)`` with
    ``a_j = -alpha`` (``eq_1IS``) or ``a_j = -alpha-j+1`` (``eq_1ISalt``).
    """
    if variant not in ZIS1_VARIANTS:
        raise DomainError(f"variant must be one of {ZIS1_VARIANTS}")
    mu2 = _spectrum(spectrum_mu2)
    N = len(mu2)
    if N < 1:
        raise DimensionError("empty spectrum")
    alpha = complex(alpha)
    cols = []
    for j in range(1, N + 1):
        a = -alpha if variant == "eq_1IS" else -alpha - j + 1
        cols.append(_PowerColumn(_kummer_neg(a, N - j + 1), N - j))
    value = linalg.det_ratio(cols, mu2)
    return EvalResult(value, _diagnostics(mu2, variant=variant))


def zis2(spectrum_mu2, spectrum_nu2, alpha) -> EvalResult:
    """Two-matrix Ingham-Siegel integral ``int dU dV det(1 + V^dagger C U^dagger D)^alpha exp Tr(AUBV)``.

    ``g_N(alpha) det[1F1(-alpha-N+1; 1; -mu^2_j nu^2_k)] / (Delta_N(mu^2) Delta_N(nu^2))``.
    """
    mu2, nu2 = _spectrum(spectrum_mu2), _spectrum(spectrum_nu2)
    N = len(mu2)
    if len(nu2) != N or N < 1:
        raise DimensionError("both spectra must have the same positive length")
    alpha = complex(alpha)
    g = g_factor(N, alpha)
    kernel = _product_kernel(_kummer_neg(-alpha - N + 1, 1))
    value = g * linalg.det_ratio2(kernel, mu2, nu2)
    return EvalResult(value, _diagnostics(mu2, nu2, g_alpha=g))


def zfh1(spectrum_mu2, alpha, beta, variant: str = "eq_1FH") -> EvalResult:
    """One-matrix Fisher-Hartwig integral ``int dU det(1 + A U)^alpha det(1 + U^dagger D)^beta``.

    ``det[2F1(-alpha-j+1, b_j; N-j+1; mu^2_k) mu_k^{2(N-j)}] / Delta_N(mu^2)``
    with ``b_j = -beta-j+1`` (``eq_1FH``) or ``b_j = -beta`` (``eq_1FHprime``).
    """
    if variant not in ZFH1_VARIANTS:
        raise DomainError(f"variant must be one of {ZFH1_VARIANTS}")
    mu2 = _spectrum(spectrum_mu2)
    N = len(mu2)
    if N < 1:
        raise DimensionError("empty spectrum")
    alpha, beta = complex(alpha), complex(beta)
    cols = []
    for j in range(1, N + 1):
        b = -beta - j + 1 if variant == "eq_1FH" else -beta
        cols.append(_PowerColumn(_gauss(-alpha - j + 1, b, N - j + 1), N - j))
    value = linalg.det_ratio(cols, mu2)
    return EvalResult(value, _diagnostics(mu2, variant=variant))


def zfh2(spectrum_mu2, spectrum_nu2, alpha, beta) -> EvalResult:
    """Two-matrix Fisher-Hartwig integral ``int dU dV det(1 + AUBV)^alpha det(1 + V^dagger C U^dagger D)^beta``.

    ``g_N(alpha) g_N(beta) / prod (j-1)!^2`` times
    ``det[2F1(-alpha-N+1, -beta-N+1; 1; mu^2_j nu^2_k)] / (Delta_N(mu^2) Delta_N(nu^2))``.
    """
    mu2, nu2 = _spectrum(spectrum_mu2), _spectrum(spectrum_nu2)
    N = len(mu2)
    if len(nu2) != N or N < 1:
        raise DimensionError("both spectra must have the same positive length")
    alpha, beta = complex(alpha), complex(beta)
    pref = g_factor(N, alpha) * g_factor(N, beta) / superfactorial_squared(N)
    kernel = _product_kernel(_gauss(-alpha - N + 1, -beta - N + 1, 1))
    value = pref * linalg.det_ratio2(kernel, mu2, nu2)
    return EvalResult(value, _diagnostics(mu2, nu2, prefactor=pref))


# ---------------------------------------------------------------------------
# matrix front ends


def spectrum_of_product(*matrices):
    """Eigenvalues of the ordered product of the given square matrices."""
    if not matrices:
        raise DimensionError("need at least one matrix")
    P = np.asarray(matrices[0], dtype=complex)
    for M in matrices[1:]:
        M = np.asarray(M, dtype=complex)
        if M.shape != P.shape:
            raise DimensionError("matrices must share one square shape")
        P = P @ M
    return linalg.eigenvalues(P)


def rescale_pair(A, D, bound: float = 0.95):
    """``(s A, D / s, s)`` with ``||D / s|| <= bound`` when ``D`` is larger.

    The eigenvalues of ``A D`` are unchanged, and so is every integral that
    depends on the pair only through them.
    """
    A, D = np.asarray(A, dtype=complex), np.asarray(D, dtype=complex)
    nd = float(np.linalg.norm(D, 2))
    s = nd / bound if nd > bound else 1.0
    return A * s, D / s, s


def zis1_matrices(A, D, alpha, variant="eq_1IS"):
    return zis1(spectrum_of_product(A, D), alpha, variant)


def zis2_matrices(A, B, C, D, alpha):
    return zis2(spectrum_of_product(A, D), spectrum_of_product(B, C), alpha)


def zfh1_matrices(A, D, alpha, beta, variant="eq_1FH"):
    return zfh1(spectrum_of_product(A, D), alpha, beta, variant)


def zfh2_matrices(A, B, C, D, alpha, beta):
    return zfh2(spectrum_of_product(A, D), spectrum_of_product(B, C), alpha, beta)
