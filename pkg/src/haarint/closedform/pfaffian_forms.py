"""Pfaffian formulas for the two-matrix integrals averaged over a Hermitian matrix.

With ``B = C = X`` Hermitian and weight ``exp(-Tr v(X))`` the two-matrix
determinant formulas integrate, through the Schur-Pfaff identity and de
Bruijn's formula, to

    J = c_N N! P / Delta_N(a^2) * Pf[E(a_j, a_k)]          (N even)

with a bordered Pfaffian carrying ``F(a_j)`` for odd ``N``.  Here ``a^2``
are the eigenvalues of ``A D``, ``P`` is the prefactor of the underlying
two-matrix formula, ``E`` is an antisymmetrised double integral with the
kernel ``(x - y)/(x + y)`` and ``F`` a single integral of the column
function ``phi``.

Two argument conventions are exposed.  ``two_matrix`` uses the parameters of
the two-matrix formulas (``-alpha-N+1`` and ``-beta-N+1``, with the
``1/prod (j-1)!^2`` factor for Fisher-Hartwig).  ``shifted`` uses
``2-alpha-N`` for Ingham-Siegel and drops that factor for Fisher-Hartwig.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .. import linalg
from ..errors import ConvergenceError, DomainError, InputError
from ..results import EvalResult
from ..specfun import is_nonpositive_integer
from .context import ClosedFormContext, superfactorial_squared

__all__ = [
    "QuadratureRule",
    "WeightSpec",
    "e_kernel",
    "f_kernel",
    "kernel_matrices",
    "j_pfaffian",
    "schur_pfaff_check",
    "de_bruijn_check",
    "CONVENTIONS",
]

CONVENTIONS = ("two_matrix", "shifted")
_DOUBLING_TOL = 1e-6
_POLE_REL = 1e-8


@dataclass(frozen=True)
class WeightSpec:
    """Weight ``exp(-v(x))`` on the real line.

    ``gaussian_x2`` is ``v(x) = x^2``; ``tabulated`` takes a caller-supplied
    vectorised ``v`` whose decay the caller vouches for.
    """

    kind: str = "gaussian_x2"
    v: Callable | None = None

    def __post_init__(self):
        if self.kind not in ("gaussian_x2", "tabulated"):
            raise InputError("weight kind must be 'gaussian_x2' or 'tabulated'")
        if self.kind == "tabulated" and self.v is None:
            raise InputError("tabulated weight needs v")

    def potential(self, x):
        x = np.asarray(x, dtype=float)
        return x * x if self.kind == "gaussian_x2" else np.asarray(self.v(x), dtype=float)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite (weight ``exp(-x^2)``) or Gauss-Legendre on a finite interval."""

    family: str = "gauss_hermite"
    order: int = 80
    interval: tuple = (-8.0, 8.0)
    nodes: np.ndarray = field(init=False, repr=False, compare=False)
    weights: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.order < 1:
            raise InputError("quadrature order must be positive")
        if self.family == "gauss_hermite":
            x, w = np.polynomial.hermite.hermgauss(self.order)
        elif self.family == "gauss_legendre_truncated":
            lo, hi = map(float, self.interval)
            if not hi > lo:
                raise InputError("interval must be increasing")
            t, w = np.polynomial.legendre.leggauss(self.order)
            x = 0.5 * (hi - lo) * t + 0.5 * (hi + lo)
            w = 0.5 * (hi - lo) * w
        else:
            raise InputError("family must be 'gauss_hermite' or 'gauss_legendre_truncated'")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "weights", w)

    def with_order(self, order):
        return QuadratureRule(self.family, int(order), self.interval)

    def measure(self, weight: WeightSpec):
        """Nodes and weights for ``int dx exp(-v(x)) f(x)``."""
        x = self.nodes
        intrinsic = x * x if self.family == "gauss_hermite" else 0.0
        return x, self.weights * np.exp(intrinsic - weight.potential(x))


def _series(t, coeff_ratio, terminate_at=None, max_terms=5000):
    """``sum_m c_m t^m`` with ``c_{m+1}/c_m = coeff_ratio(m)``, elementwise over ``t``."""
    t = np.asarray(t, dtype=complex)
    term = np.ones_like(t)
    total = term.copy()
    peak = float(np.max(np.abs(t))) if t.size else 0.0
    for m in range(max_terms):
        if terminate_at is not None and m >= terminate_at:
            return total
        term = term * coeff_ratio(m) * t
        total = total + term
        if m > peak and np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            return total
    raise ConvergenceError("column-function series did not converge on the quadrature nodes")


def _terminating(p):
    return round(-complex(p).real) if is_nonpositive_integer(p) else None


class _Column:
    """``phi(x)`` and ``phi'(x)`` for one ``a^2``, vectorised over nodes."""

    def __init__(self, which, params, a2):
        self.which = which
        self.params = params
        self.a2 = complex(a2)

    def _hyp(self, shift, x):
        x = np.asarray(x, dtype=float)
        if self.which == "IS":
            (p,) = self.params
            p = p + shift
            t = -self.a2 * x * x
            return _series(t, lambda m: (p + m) / ((1 + shift + m) * (m + 1)), _terminating(p))
        p, q = (v + shift for v in self.params)
        t = self.a2 * x * x
        stop = [s for s in (_terminating(p), _terminating(q)) if s is not None]
        if not stop and t.size and np.max(np.abs(t)) >= 1:
            raise DomainError("non-terminating 2F1 column needs |a^2 x^2| < 1 on every node")
        return _series(t, lambda m: (p + m) * (q + m) / ((1 + shift + m) * (m + 1)), min(stop) if stop else None)

    def value(self, x):
        return self._hyp(0, x)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.which == "IS":
            (p,) = self.params
            return -2 * self.a2 * x * p * self._hyp(1, x)
        p, q = self.params
        return 2 * self.a2 * x * p * q * self._hyp(1, x)


def _column_params(ctx: ClosedFormContext, which, convention):
    if convention not in CONVENTIONS:
        raise DomainError(f"convention must be one of {CONVENTIONS}")
    N = ctx.N
    if which == "IS":
        first = -ctx.alpha - N + 1 if convention == "two_matrix" else 2 - ctx.alpha - N
        return (first,)
    if which == "FH":
        if ctx.beta is None:
            raise DomainError("FH kernels need beta")
        return (-ctx.alpha - N + 1, -ctx.beta - N + 1)
    raise DomainError("which must be 'IS' or 'FH'")


def _pair_matrix(vx, vy, x, y, wx, wy, dx=None):
    """``1/2 sum w_x w_y (x-y)/(x+y) [phi_j(x) phi_k(y) - phi_k(x) phi_j(y)]`` for all ``j, k``.

    ``vx``/``vy`` are column values on the ``x``/``y`` nodes (rows = columns
    j).  Node pairs with ``|x + y|`` below the pole threshold use the limit
    ``-2 x [phi_j phi_k' - phi_k phi_j'](x)``, which needs ``dx``.
    """
    S = np.subtract.outer(x, y)
    den = np.add.outer(x, y)
    scale = max(float(np.max(np.abs(x))), float(np.max(np.abs(y))), 1.0)
    near = np.abs(den) < _POLE_REL * scale
    S = np.where(near, 0.0, S / np.where(near, 1.0, den))
    K = (wx[:, None] * S) * wy[None, :]
    M = vx @ K @ vy.T
    E = 0.5 * (M - M.T)
    if np.any(near):
        if dx is None:
            raise InputError("pole-limit correction needs column derivatives")
        ix, iy = np.nonzero(near)
        for a, b in zip(ix, iy):
            lim = -2 * x[a] * (np.outer(vx[:, a], dx[:, a]) - np.outer(dx[:, a], vx[:, a]))
            E = E + 0.5 * wx[a] * wy[b] * lim
    return E


def _kernel_matrices_at(a2, params, which, weight, quad):
    x, wx = quad.measure(weight)
    y, wy = quad.with_order(quad.order + 1).measure(weight)
    cols = [_Column(which, params, v) for v in a2]
    vx = np.array([c.value(x) for c in cols])
    vy = np.array([c.value(y) for c in cols])
    dx = np.array([c.derivative(x) for c in cols])
    E = _pair_matrix(vx, vy, x, y, wx, wy, dx)
    F = vx @ wx
    return E, F


def kernel_matrices(spectrum_a2, ctx: ClosedFormContext, which="IS", weight=WeightSpec(), quad=QuadratureRule(),
                    convention="two_matrix"):
    """All ``E(a_j, a_k)`` and ``F(a_j)`` plus the order-doubling discrepancy.

    Returns ``(E, F, diagnostics)``.
    """
    a2 = np.asarray(list(spectrum_a2), dtype=complex)
    params = _column_params(ctx, which, convention)
    E, F = _kernel_matrices_at(a2, params, which, weight, quad)
    E2, F2 = _kernel_matrices_at(a2, params, which, weight, quad.with_order(2 * quad.order))
    ref = max(float(np.max(np.abs(E2), initial=0.0)), float(np.max(np.abs(F2), initial=0.0)), 1.0)
    diff = max(float(np.max(np.abs(E - E2), initial=0.0)), float(np.max(np.abs(F - F2), initial=0.0))) / ref
    diag = {
        "quadrature_order": quad.order,
        "check_order": 2 * quad.order,
        "doubling_discrepancy": diff,
        "accuracy_warning": diff > _DOUBLING_TOL,
    }
    return E, F, diag


def e_kernel(a_j, a_k, ctx: ClosedFormContext, which="IS", weight=WeightSpec(), quad=QuadratureRule(),
             convention="two_matrix") -> complex:
    """Antisymmetrised double integral ``E(a_j, a_k)``."""
    E, _, _ = kernel_matrices([complex(a_j) ** 2, complex(a_k) ** 2], ctx, which, weight, quad, convention)
    return complex(E[0, 1])


def f_kernel(a_j, ctx: ClosedFormContext, which="IS", weight=WeightSpec(), quad=QuadratureRule(),
             convention="two_matrix") -> complex:
    """Single integral ``F(a_j) = int dx exp(-v(x)) phi(x)``."""
    _, F, _ = kernel_matrices([complex(a_j) ** 2], ctx, which, weight, quad, convention)
    return complex(F[0])


def _bordered(E, F):
    N = E.shape[0]
    if N % 2 == 0:
        return E
    M = np.zeros((N + 1, N + 1), dtype=complex)
    M[:N, :N] = E
    M[:N, N] = F
    M[N, :N] = -F
    return M


def _prefactor(ctx, which, convention):
    if which == "IS":
        return ctx.g_alpha
    pref = ctx.g_alpha * ctx.g_beta
    return pref / superfactorial_squared(ctx.N) if convention == "two_matrix" else pref


def _check_exponents(ctx, which):
    if which == "IS" and ctx.alpha.real <= -1:
        raise DomainError("Ingham-Siegel Pfaffian needs Re(alpha) > -1")
    if which == "FH" and ctx.beta is not None and (ctx.alpha + ctx.beta).real <= -1:
        raise DomainError("Fisher-Hartwig Pfaffian needs Re(alpha + beta) > -1")


def _j_distinct(a2, ctx, which, weight, quad, convention):
    E, F, diag = kernel_matrices(a2, ctx, which, weight, quad, convention)
    pf = linalg.pfaffian(_bordered(E, F))
    value = ctx.c_N * math.factorial(ctx.N) * _prefactor(ctx, which, convention) * pf / linalg.vandermonde(a2)
    return complex(value), diag


def j_pfaffian(spectrum_a2, ctx: ClosedFormContext, which: str = "IS", weight: WeightSpec = WeightSpec(),
               quad: QuadratureRule = QuadratureRule(), convention: str = "two_matrix",
               perturbation: float = 2e-2) -> EvalResult:
    """Hermitian-averaged two-matrix integral ``J`` from its Pfaffian formula.

    ``spectrum_a2`` holds the eigenvalues of ``A D``.  Clustered values are
    split by ``h * offsets`` for ``h = perturbation * scale / 2^i`` and the
    results Richardson-extrapolated to ``h = 0``.
    """
    if which not in ("IS", "FH"):
        raise DomainError("which must be 'IS' or 'FH'")
    _check_exponents(ctx, which)
    spec = spectrum_a2 if isinstance(spectrum_a2, linalg.Spectrum) else linalg.Spectrum.from_values(spectrum_a2)
    if len(spec) != ctx.N:
        raise InputError("spectrum length must equal ctx.N")
    a2 = spec.as_array()
    base = {"which": which, "convention": convention, "weight": weight.kind}
    if not spec.has_clusters:
        value, diag = _j_distinct(a2, ctx, which, weight, quad, convention)
        return EvalResult(value, {**base, **diag, "confluent": False})
    offsets = np.zeros(len(a2))
    for cl in spec.clusters:
        for i, idx in enumerate(cl):
            offsets[idx] = i - (len(cl) - 1) / 2
    scale = max(spec.max_modulus, 0.1)
    levels = 4
    hs = [perturbation * scale / 2**i for i in range(levels)]
    samples, diags = [], []
    for h in hs:
        v, d = _j_distinct(a2 + h * offsets, ctx, which, weight, quad, convention)
        samples.append(v)
        diags.append(d)
    table = [samples]
    for k in range(1, levels):
        prev = table[-1]
        table.append([(2**k * prev[i + 1] - prev[i]) / (2**k - 1) for i in range(len(prev) - 1)])
    value = table[-1][0]
    err = abs(table[-1][0] - table[-2][-1])
    worst = max(diags, key=lambda d: d["doubling_discrepancy"])
    return EvalResult(
        complex(value),
        {
            **base,
            **worst,
            "confluent": True,
            "extrapolation_steps": hs,
            "extrapolation_error": err,
            "accuracy_warning": worst["accuracy_warning"] or err > 1e-5 * max(abs(value), 1e-300),
        },
    )


# ---------------------------------------------------------------------------
# identities behind the formula


def schur_pfaff_matrix(x):
    """``[(x_j - x_k)/(x_j + x_k)]``, bordered by ones for odd length."""
    x = np.asarray(x, dtype=complex)
    S = np.subtract.outer(x, x) / np.add.outer(x, x)
    np.fill_diagonal(S, 0)
    return _bordered(S, np.ones(len(x), dtype=complex))


def schur_pfaff_check(x):
    """``(Delta(x)^2 / Delta(x^2), Pf[(x_j - x_k)/(x_j + x_k)])``."""
    x = np.asarray(x, dtype=complex)
    lhs = linalg.vandermonde(x) ** 2 / linalg.vandermonde(x * x)
    return complex(lhs), complex(linalg.pfaffian(schur_pfaff_matrix(x)))


def _schur_kernel(x, y):
    return (x - y) / (x + y)


def de_bruijn_check(phis, s: Callable = _schur_kernel, weight: WeightSpec = WeightSpec(),
                    quad: QuadratureRule = QuadratureRule(order=16)):
    """Both sides of de Bruijn's formula for ``N = len(phis)`` functions.

    Left: tensor-product quadrature of ``Pf[s(x_j, x_k)] det[phi_j(x_k)]``
    (bordered by ones for odd ``N``), with order ``n + k`` in coordinate
    ``k`` so no two coordinates can be exact negatives of each other.
    Right: ``N! Pf[E_jk]`` with ``E_jk`` the antisymmetrised double integral,
    bordered by ``int phi_j`` for odd ``N``.
    """
    N = len(phis)
    if N < 1:
        raise InputError("need at least one function")
    rules = [quad.with_order(quad.order + k).measure(weight) for k in range(N)]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrid = np.ones_like(grids[0])
    for k, (_, w) in enumerate(rules):
        shape = [1] * N
        shape[k] = -1
        wgrid = wgrid * w.reshape(shape)
    pts = np.stack([g.ravel() for g in grids], axis=1)
    w = wgrid.ravel()
    phi_vals = np.stack([np.asarray(f(pts), dtype=complex) for f in phis], axis=1)  # (P, j, k)
    dets = np.linalg.det(phi_vals)
    pfs = np.empty(len(pts), dtype=complex)
    ones = np.ones(N, dtype=complex)
    for i, p in enumerate(pts):
        with np.errstate(invalid="ignore", divide="ignore"):  # diagonal is overwritten
            S = np.asarray(s(p[:, None], p[None, :]), dtype=complex)
        np.fill_diagonal(S, 0)
        pfs[i] = linalg.pfaffian(_bordered(S, ones))
    lhs = complex(np.sum(w * pfs * dets))

    x, wx = rules[0]
    y, wy = quad.with_order(quad.order + 1).measure(weight)
    vx = np.array([np.asarray(f(x), dtype=complex) for f in phis])
    vy = np.array([np.asarray(f(y), dtype=complex) for f in phis])
    Sxy = np.asarray(s(x[:, None], y[None, :]), dtype=complex)
    M = vx @ ((wx[:, None] * Sxy) * wy[None, :]) @ vy.T
    E = 0.5 * (M - M.T)
    F = vx @ wx
    rhs = complex(math.factorial(N) * linalg.pfaffian(_bordered(E, F)))
    return lhs, rhs
