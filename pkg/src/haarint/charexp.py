"""Partitions, U(N) characters, dimensions and truncated character sums.

The character sums evaluate each group integral as a sum over irreducible
representations ``r = (n_1 >= ... >= n_N >= 0)``.  They share no code with
the closed-form evaluators beyond :mod:`haarint.linalg` and the binomial
coefficients, so agreement between the two is a genuine cross-check.

The sums are organised in shells of the largest part ``n_1``.  With
``adaptive=True`` the cutoff doubles from 8 until the newest shell
``M/2 < n_1 <= M`` contributes less than ``tail_tol`` relative to the total.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

import mpmath as mp
import numpy as np

from . import linalg
from .errors import ConvergenceError, DimensionError, DomainError
from .results import EvalResult
from .specfun import is_nonpositive_integer

__all__ = [
    "Partition",
    "CharSumControl",
    "partitions_iter",
    "schur_char",
    "dim_rep",
    "charsum_zis1",
    "charsum_zis2",
    "charsum_zfh1",
    "charsum_zfh2",
    "cauchy_binet_check",
]

# rows of a shell processed at once
_BATCH = 100_000
_FIRST_CUTOFF = 8


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing non-negative parts labelling a U(N) irrep."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise DimensionError("a partition needs at least one part")
        if parts[-1] < 0 or any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError(f"parts must be weakly decreasing and non-negative: {parts}")

    @property
    def N(self):
        return len(self.parts)

    @property
    def shifted(self):
        """``m_j = n_j + N - j``; strictly decreasing."""
        N = self.N
        return tuple(n + N - 1 - j for j, n in enumerate(self.parts))

    @classmethod
    def from_shifted(cls, shifted):
        N = len(shifted)
        return cls(tuple(m - (N - 1 - j) for j, m in enumerate(shifted)))


@dataclass(frozen=True)
class CharSumControl:
    """Truncation of a character sum at ``n_1 <= max_part``.

    With ``adaptive`` the cutoff grows by doubling from 8 and ``max_part``
    is the largest cutoff tried.
    """

    max_part: int = 128
    adaptive: bool = True
    tail_tol: float = 1e-10

    def __post_init__(self):
        if self.max_part < 0:
            raise ValueError("max_part must be non-negative")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")


def partitions_iter(N: int, max_part: int) -> Iterator[Partition]:
    """All partitions with ``N`` parts and ``n_1 <= max_part``, lexicographically decreasing."""
    if N < 1:
        raise DimensionError("N must be at least 1")
    if max_part < 0:
        raise DomainError("max_part must be non-negative")

    def rec(prefix, bound, left):
        if left == 0:
            yield Partition(tuple(prefix))
            return
        for n in range(bound, -1, -1):
            yield from rec(prefix + [n], n, left - 1)

    yield from rec([], max_part, N)


def _shifted_block(N, lo, hi):
    """Shifted parts (rows, strictly decreasing) of partitions with lo < n_1 <= hi."""
    rows = []
    for n1 in range(hi, lo, -1):
        m1 = n1 + N - 1
        for rest in itertools.combinations(range(m1 - 1, -1, -1), N - 1):
            rows.append((m1,) + rest)
    if not rows:
        return np.zeros((0, N), dtype=np.int64)
    return np.asarray(rows, dtype=np.int64)


def schur_char(r: Partition, spectrum) -> complex:
    """Weyl character ``det[t_j^{m_k}] / det[t_j^{N-k}]`` of the irrep ``r``."""
    if not isinstance(r, Partition):
        r = Partition(tuple(r))
    spec = spectrum if isinstance(spectrum, linalg.Spectrum) else linalg.Spectrum.from_values(spectrum)
    if len(spec) != r.N:
        raise DimensionError(f"partition of length {r.N} with spectrum of length {len(spec)}")
    return linalg.det_ratio([linalg.monomial(m) for m in r.shifted], spec)


def _log_dim_v1(shifted):
    """log d_r from the Vandermonde of the shifted parts; works on stacks."""
    m = np.atleast_2d(np.asarray(shifted, dtype=float))
    N = m.shape[1]
    j, k = np.triu_indices(N, 1)
    log_vdm = np.sum(np.log(m[:, j] - m[:, k]), axis=1)
    log_super = sum(math.lgamma(i + 1) for i in range(N))
    return log_vdm - log_super


# digits for the determinant forms of d_r; their matrices reach condition
# numbers ~1e7 for n_1 <= 10, too many for a double-precision LU
_DIM_DPS = 30


def _inv_factorial_det(r: Partition):
    N = r.N
    M = mp.matrix(N, N)
    for j in range(N):
        for k in range(N):
            M[j, k] = mp.rgamma(r.parts[k] + j - k + 1)
    return mp.det(M)


def _binom_det(r: Partition, alpha):
    N = r.N
    M = mp.matrix(N, N)
    for j in range(N):
        for k in range(N):
            idx = r.parts[k] + j - k
            M[j, k] = 0 if idx < 0 else mp.binomial(alpha, idx)
    return mp.det(M)


def dim_rep(r: Partition, variant: str = "V1", alpha=None, log: bool = False):
    """Dimension of the irrep ``r`` by one of three equivalent formulas.

    Parameters
    ----------
    r : Partition
    variant : {"V1", "V2", "V3"}
        ``V1``: Vandermonde of ``(n_1 - 1, ..., n_N - N)`` over the
        superfactorial.  ``V2``: inverse-factorial determinant times a
        factorial product.  ``V3``: binomial determinant in ``alpha`` times a
        Gamma product; the result does not depend on ``alpha``.
    alpha : complex, optional
        Required for ``V3``.
    log : bool
        Return ``log d_r`` (complex for ``V3``, real otherwise).
    """
    if not isinstance(r, Partition):
        r = Partition(tuple(r))
    N = r.N
    shifted = r.shifted
    if variant == "V1":
        value = float(_log_dim_v1(shifted)[0])
        return value if log else math.exp(value)
    if variant not in ("V2", "V3"):
        raise ValueError(f"unknown variant {variant!r}")
    with mp.workdps(_DIM_DPS):
        fact_ratio = mp.fprod(mp.factorial(m) / mp.factorial(N - 1 - j) for j, m in enumerate(shifted))
        if variant == "V2":
            d = _inv_factorial_det(r) * fact_ratio
            return float(mp.log(d)) if log else float(d)
        if alpha is None:
            raise DomainError("V3 needs alpha")
        alpha = complex(alpha)
        for j, n in enumerate(r.parts, start=1):
            if is_nonpositive_integer(alpha - n + j):
                raise DomainError(f"V3 pole: alpha - n_{j} + {j} = {alpha - n + j} is a non-positive integer")
        a = mp.mpc(alpha)
        gamma_part = mp.fprod(
            mp.gamma(a - n + j) / mp.gamma(a + N - j + 1) for j, n in enumerate(r.parts, start=1)
        )
        d = _binom_det(r, a) * fact_ratio * gamma_part
        return complex(mp.log(d)) if log else complex(d)


def _spectrum(values):
    return values if isinstance(values, linalg.Spectrum) else linalg.Spectrum.from_values(values)


class _CharacterTable:
    """Batched Weyl characters of one spectrum."""

    def __init__(self, spectrum, max_power):
        self.table, (self.den_log, self.den_phase) = linalg.power_table(spectrum, max_power)

    def __call__(self, shifted):
        n, N = shifted.shape
        mats = self.table[shifted]  # (n, N, N): rows are powers, columns points
        logabs, phase = linalg.slogdet(mats)
        with np.errstate(under="ignore", over="ignore"):
            return phase * np.exp(logabs - self.den_log) / self.den_phase


def _coefficient_det(shifted, table):
    """``det[c(n_k + j - k)]`` for every row of shifted parts; ``table[i]`` = c(i - offset)."""
    n, N = shifted.shape
    jj = np.arange(N)
    parts = shifted - (N - 1 - jj)[None, :]
    idx = parts[:, None, :] + (jj[:, None] - jj[None, :])[None, :, :]
    offset = N
    mats = table[idx + offset]
    logabs, phase = linalg.slogdet(mats)
    with np.errstate(under="ignore", over="ignore"):
        return phase * np.exp(logabs)


def _inv_fact_table(size, N):
    t = np.zeros(size + N + 1, dtype=complex)
    for i in range(size + 1):
        t[i + N] = math.exp(-math.lgamma(i + 1))
    return t


def _binom_table(alpha, size, N):
    t = np.zeros(size + N + 1, dtype=complex)
    b = 1 + 0j
    alpha = complex(alpha)
    for i in range(size + 1):
        t[i + N] = b
        b *= (alpha - i) / (i + 1)
    return t


def _shell_sum(summand, N, lo, hi):
    total = 0j
    count = 0
    block = _shifted_block(N, lo, hi)
    for start in range(0, len(block), _BATCH):
        rows = block[start:start + _BATCH]
        total += complex(np.sum(summand(rows)))
        count += len(rows)
    return total, count


def _adaptive_sum(summand_factory, N, ctl, label):
    """Sum shells of n_1 with the doubling policy of :class:`CharSumControl`."""
    cap = ctl.max_part
    summand = summand_factory(cap)
    if not ctl.adaptive:
        total, count = _shell_sum(summand, N, -1, cap)
        return EvalResult(total, {"cutoff": cap, "partitions": count, "adaptive": False, "route": label})
    first = min(_FIRST_CUTOFF, cap)
    half = first // 2
    total, count = _shell_sum(summand, N, -1, half)
    shell, c = _shell_sum(summand, N, half, first)
    total += shell
    count += c
    M = first
    previous = None
    while True:
        if abs(shell) <= ctl.tail_tol * abs(total) or (shell == 0 and total == 0):
            return EvalResult(
                total,
                {"cutoff": M, "partitions": count, "last_shell": abs(shell), "adaptive": True, "route": label},
            )
        if previous is not None and M >= 32 and abs(shell) >= abs(previous):
            raise ConvergenceError(
                f"{label}: shell contributions stopped decreasing at cutoff {M}",
                tail_estimate=abs(shell),
                partial=total,
            )
        if M >= cap:
            raise ConvergenceError(
                f"{label}: not converged at max_part={cap} (last shell {abs(shell):.3g})",
                tail_estimate=abs(shell),
                partial=total,
            )
        previous = shell
        lo, M = M, min(2 * M, cap)
        shell, c = _shell_sum(summand, N, lo, M)
        total += shell
        count += c


def _check_same_length(*specs):
    if len({len(s) for s in specs}) != 1:
        raise DimensionError("spectra must have the same length")


def _check_fh_domain(mu2, nu2=None):
    mu_max = mu2.max_modulus
    if nu2 is None:
        if mu_max >= 1:
            raise DomainError("Fisher-Hartwig character sum needs every |mu^2| < 1")
        return
    nu_max = nu2.max_modulus
    if mu_max > 1 or nu_max > 1 or mu_max * nu_max >= 1:
        raise DomainError("Fisher-Hartwig character sum needs |mu^2|, |nu^2| <= 1 and max|mu^2| max|nu^2| < 1")


def _max_power(N, cap):
    return cap + N - 1


def charsum_zis1(spectrum_mu2, alpha, ctl: CharSumControl = CharSumControl()) -> EvalResult:
    """Character sum of the one-matrix Ingham-Siegel integral.

    Summand: ``det[1/Gamma(n_k+j-k+1)] det[C(alpha, n_k+j-k)] chi_r(mu^2) / d_r``.
    """
    mu2 = _spectrum(spectrum_mu2)
    N = len(mu2)

    def factory(cap):
        chi = _CharacterTable(mu2, _max_power(N, cap))
        inv = _inv_fact_table(cap + N, N)
        binom = _binom_table(alpha, cap + N, N)

        def summand(rows):
            return _coefficient_det(rows, inv) * _coefficient_det(rows, binom) * chi(rows) / np.exp(_log_dim_v1(rows))

        return summand

    return _adaptive_sum(factory, N, ctl, "charsum_zis1")


def charsum_zis2(spectrum_mu2, spectrum_nu2, alpha, ctl: CharSumControl = CharSumControl()) -> EvalResult:
    """Character sum of the two-matrix Ingham-Siegel integral (``chi chi / d_r^2``)."""
    mu2, nu2 = _spectrum(spectrum_mu2), _spectrum(spectrum_nu2)
    _check_same_length(mu2, nu2)
    N = len(mu2)

    def factory(cap):
        chi_mu = _CharacterTable(mu2, _max_power(N, cap))
        chi_nu = _CharacterTable(nu2, _max_power(N, cap))
        inv = _inv_fact_table(cap + N, N)
        binom = _binom_table(alpha, cap + N, N)

        def summand(rows):
            return (
                _coefficient_det(rows, inv)
                * _coefficient_det(rows, binom)
                * chi_mu(rows)
                * chi_nu(rows)
                / np.exp(2 * _log_dim_v1(rows))
            )

        return summand

    return _adaptive_sum(factory, N, ctl, "charsum_zis2")


def charsum_zfh1(spectrum_mu2, alpha, beta, ctl: CharSumControl = CharSumControl()) -> EvalResult:
    """Character sum of the one-matrix Fisher-Hartwig integral.

    Summand: ``det[C(alpha, .)] det[C(beta, .)] chi_r(mu^2) / d_r``; needs
    every ``|mu^2| < 1``.
    """
    mu2 = _spectrum(spectrum_mu2)
    _check_fh_domain(mu2)
    N = len(mu2)

    def factory(cap):
        chi = _CharacterTable(mu2, _max_power(N, cap))
        ba = _binom_table(alpha, cap + N, N)
        bb = _binom_table(beta, cap + N, N)

        def summand(rows):
            # product of the two binomial determinants is symmetric in alpha, beta
            return _coefficient_det(rows, ba) * _coefficient_det(rows, bb) * chi(rows) / np.exp(_log_dim_v1(rows))

        return summand

    return _adaptive_sum(factory, N, ctl, "charsum_zfh1")


def charsum_zfh2(spectrum_mu2, spectrum_nu2, alpha, beta, ctl: CharSumControl = CharSumControl()) -> EvalResult:
    """Character sum of the two-matrix Fisher-Hartwig integral (``chi chi / d_r^2``)."""
    mu2, nu2 = _spectrum(spectrum_mu2), _spectrum(spectrum_nu2)
    _check_same_length(mu2, nu2)
    _check_fh_domain(mu2, nu2)
    N = len(mu2)

    def factory(cap):
        chi_mu = _CharacterTable(mu2, _max_power(N, cap))
        chi_nu = _CharacterTable(nu2, _max_power(N, cap))
        ba = _binom_table(alpha, cap + N, N)
        bb = _binom_table(beta, cap + N, N)

        def summand(rows):
            return (
                _coefficient_det(rows, ba)
                * _coefficient_det(rows, bb)
                * chi_mu(rows)
                * chi_nu(rows)
                / np.exp(2 * _log_dim_v1(rows))
            )

        return summand

    return _adaptive_sum(factory, N, ctl, "charsum_zfh2")


def cauchy_binet_check(a_coeffs, b_coeffs, N: int, cutoff: int):
    """Both sides of the Cauchy-Binet identity for coefficient tables.

    ``lhs = sum_{m_1 > ... > m_N >= 0, m_1 <= cutoff} det[a_{j, m_k}] det[b_{j, m_k}]``
    and ``rhs = det[sum_{m <= cutoff} a_{j m} b_{k m}]``.
    """
    a = np.asarray(a_coeffs, dtype=complex)[:N, : cutoff + 1]
    b = np.asarray(b_coeffs, dtype=complex)[:N, : cutoff + 1]
    if a.shape != (N, cutoff + 1) or b.shape != (N, cutoff + 1):
        raise DimensionError(f"coefficient tables must have shape ({N}, >= {cutoff + 1})")
    combos = np.asarray(list(itertools.combinations(range(cutoff, -1, -1), N)), dtype=np.int64)
    lhs = 0j
    for start in range(0, len(combos), _BATCH):
        idx = combos[start:start + _BATCH]
        da = linalg.det(np.transpose(a[:, idx], (1, 0, 2)))
        db = linalg.det(np.transpose(b[:, idx], (1, 0, 2)))
        lhs += complex(np.sum(da * db))
    rhs = complex(linalg.det(a @ b.T))
    return lhs, rhs
