"""Monte Carlo over Haar-random unitaries and Gaussian Hermitian matrices.

Every estimator draws its samples in fixed-size chunks.  Chunk ``c`` of a
stream ``(seed, stream_id)`` uses its own generator seeded from
``SeedSequence(seed, spawn_key=(stream_id, c))``, so the estimate is
bit-identical whatever the number of worker threads (``HAARINT_THREADS``).
Chunk statistics are merged in chunk order.

Complex powers ``det(M)**alpha`` use ``exp(alpha * sum_k Log lambda_k)``
over the eigenvalues of ``M``.  For ``M = 1 + U^dagger D`` with
``||D|| <= 1`` every eigenvalue has non-negative real part, so each
principal logarithm stays off its cut and the product reproduces the
binomial series of the integrand.  Integer exponents use ``det(M)**alpha``.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, DomainError
from .specfun import is_nonnegative_integer

__all__ = [
    "RngStream",
    "McEstimate",
    "sample_haar_unitary",
    "sample_gaussian_hermitian",
    "gaussian_hermitian_mass",
    "mc_zis1",
    "mc_zis2",
    "mc_zfh1",
    "mc_zfh2",
    "mc_jis",
    "mc_jfh",
    "mc_cor_tw",
    "mc_fh_standard",
    "torus_average",
    "realize_pair",
    "operator_norm",
]

CHUNK = 50_000
# group count for the median-of-means estimate
_MOM_GROUPS = 20
_NORM_TOL = 1e-12


class RngStream:
    """Reproducible random stream identified by ``(seed, stream_id)``.

    :meth:`chunk` returns an independent generator for a given chunk index;
    :attr:`generator` is a persistent generator for sequential sampling.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self.generator = self.chunk(0)

    def chunk(self, index: int) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, int(index)))
        return np.random.Generator(np.random.PCG64(ss))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


@dataclass
class McEstimate:
    """Sample mean with its standard error.

    ``stderr`` is the larger of the real and imaginary standard errors.
    With ``method == "median_of_means"`` the value is the median of group
    means and ``stderr`` only a robust spread indicator, not a CLT error bar.
    """

    mean: complex
    stderr: float
    n_samples: int
    method: str = "mean"
    flags: tuple = field(default_factory=tuple)

    def agrees_with(self, value, nsigma=4.0):
        """True when both components of ``value`` lie within ``nsigma`` error bars."""
        diff = complex(value) - self.mean
        slack = nsigma * self.stderr + 1e-12 * max(abs(complex(value)), 1.0)
        return abs(diff.real) <= slack and abs(diff.imag) <= slack

    def discrepancy(self, value):
        """Worst component distance to ``value`` in units of ``stderr``."""
        diff = complex(value) - self.mean
        excess = max(abs(diff.real), abs(diff.imag)) - 1e-12 * max(abs(complex(value)), 1.0)
        if excess <= 0:
            return 0.0
        return excess / self.stderr if self.stderr > 0 else math.inf


def _generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _ginibre(gen, n, N):
    shape = (n, N, N)
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / math.sqrt(2)


def _haar_batch(gen, n, N):
    Z = _ginibre(gen, n, N)
    if N > 8:
        Q, R = np.linalg.qr(Z)
        d = np.diagonal(R, axis1=-2, axis2=-1)
        return Q * (d / np.abs(d))[:, None, :]
    # Gram-Schmidt with one reorthogonalisation pass: the QR factor whose R
    # has a positive diagonal, i.e. the phase-normalised factorisation
    Q = np.empty_like(Z)
    for k in range(N):
        v = Z[:, :, k]
        for _ in range(2):
            if k:
                coef = np.einsum("nij,ni->nj", Q[:, :, :k].conj(), v)
                v = v - np.einsum("nij,nj->ni", Q[:, :, :k], coef)
        Q[:, :, k] = v / np.linalg.norm(v, axis=1)[:, None]
    return Q


def sample_haar_unitary(N: int, rng, size: int | None = None):
    """Haar-distributed unitary (or a stack of ``size`` of them)."""
    if N < 1:
        raise DimensionError("N must be at least 1")
    out = _haar_batch(_generator(rng), 1 if size is None else size, N)
    return out[0] if size is None else out


def _gue_batch(gen, n, N):
    X = np.zeros((n, N, N), dtype=complex)
    idx = np.arange(N)
    X[:, idx, idx] = gen.standard_normal((n, N)) * math.sqrt(0.5)
    iu, ju = np.triu_indices(N, 1)
    if len(iu):
        off = (gen.standard_normal((n, len(iu))) + 1j * gen.standard_normal((n, len(iu)))) * 0.5
        X[:, iu, ju] = off
        X[:, ju, iu] = off.conj()
    return X


def sample_gaussian_hermitian(N: int, rng, size: int | None = None):
    """Hermitian ``X`` with density proportional to ``exp(-Tr X^2)``."""
    if N < 1:
        raise DimensionError("N must be at least 1")
    out = _gue_batch(_generator(rng), 1 if size is None else size, N)
    return out[0] if size is None else out


def gaussian_hermitian_mass(N: int) -> float:
    """``int dH exp(-Tr X^2)`` over the flat measure on Hermitian matrices."""
    return math.pi ** (N / 2) * (math.pi / 2) ** (N * (N - 1) / 2)


def operator_norm(M) -> float:
    return float(np.linalg.norm(np.asarray(M, dtype=complex), 2))


def _log_det_principal(M):
    """``sum_k Log lambda_k(M)`` for a stack of matrices."""
    N = M.shape[-1]
    if N == 1:
        return np.log(M[:, 0, 0])
    if N == 2:
        tr = M[:, 0, 0] + M[:, 1, 1]
        dt = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
        disc = np.sqrt(tr * tr / 4 - dt)
        big = np.where(np.abs(tr / 2 + disc) >= np.abs(tr / 2 - disc), tr / 2 + disc, tr / 2 - disc)
        small = np.where(big != 0, dt / np.where(big != 0, big, 1), 0)
        return np.log(big) + np.log(small)
    return np.sum(np.log(np.linalg.eigvals(M)), axis=-1)


def _det_power(M, alpha, integer):
    if integer:
        k = int(round(complex(alpha).real))
        if k == 0:
            return np.ones(M.shape[0], dtype=complex)
        return np.linalg.det(M) ** k
    return np.exp(complex(alpha) * _log_det_principal(M))


def _is_integer(alpha):
    a = complex(alpha)
    return a.imag == 0 and float(a.real).is_integer()


def _power_regime(alpha, norms, name):
    """Classify an exponent against the norms of the matrices it hits.

    Returns ``(integer, flags, heavy_tail)``.
    """
    if _is_integer(alpha):
        return True, (), False
    worst = max(norms)
    if worst > 1 + _NORM_TOL:
        raise DomainError(f"{name}: non-integer exponent needs norm <= 1, got {worst:.6g}")
    if worst >= 1 - _NORM_TOL:
        heavy = complex(alpha).real < 0
        return False, ("unit_norm",) + (("heavy_tail",) if heavy else ()), heavy
    return False, (), False


def _threads():
    try:
        return max(1, int(os.environ.get("HAARINT_THREADS", "1")))
    except ValueError:
        return 1


def _chunk_stats(values):
    re, im = values.real, values.imag
    n = len(values)
    return n, re.mean(), im.mean(), ((re - re.mean()) ** 2).sum(), ((im - im.mean()) ** 2).sum()


def _merge(a, b):
    na, ma_r, ma_i, sa_r, sa_i = a
    nb, mb_r, mb_i, sb_r, sb_i = b
    n = na + nb
    dr, di = mb_r - ma_r, mb_i - ma_i
    return (
        n,
        ma_r + dr * nb / n,
        ma_i + di * nb / n,
        sa_r + sb_r + dr * dr * na * nb / n,
        sa_i + sb_i + di * di * na * nb / n,
    )


def _run(sampler, n, rng, scale=1.0, heavy=False, flags=()):
    """Evaluate ``sampler(generator, count)`` over chunks and combine."""
    if n < 1:
        raise ValueError("need at least one sample")
    stream = rng if isinstance(rng, RngStream) else RngStream(int(rng) if rng is not None else 0)
    sizes = [CHUNK] * (n // CHUNK) + ([n % CHUNK] if n % CHUNK else [])

    def work(index):
        return sampler(stream.chunk(index), sizes[index]) * scale

    workers = min(_threads(), len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    else:
        parts = [work(i) for i in range(len(sizes))]
    if heavy:
        values = np.concatenate(parts)
        groups = np.array_split(values, _MOM_GROUPS)
        means = np.array([g.mean() for g in groups])
        med = complex(np.median(means.real), np.median(means.imag))
        spread = max(
            1.4826 * np.median(np.abs(means.real - med.real)),
            1.4826 * np.median(np.abs(means.imag - med.imag)),
        ) / math.sqrt(_MOM_GROUPS)
        return McEstimate(med, float(spread), n, "median_of_means", tuple(flags))
    stats = _chunk_stats(parts[0])
    for p in parts[1:]:
        stats = _merge(stats, _chunk_stats(p))
    total, m_r, m_i, s_r, s_i = stats
    if total > 1:
        se = max(math.sqrt(s_r / (total - 1) / total), math.sqrt(s_i / (total - 1) / total))
    else:
        se = math.inf
    return McEstimate(complex(m_r, m_i), float(se), n, "mean", tuple(flags))


def _square(M, N=None, name="matrix"):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square")
    if N is not None and M.shape[0] != N:
        raise DimensionError(f"{name} must be {N}x{N}")
    return M


def _dagger(U):
    return np.conj(np.swapaxes(U, -1, -2))


def _trace(M):
    return np.trace(M, axis1=-2, axis2=-1)


def mc_zis1(A, D, alpha, n: int, rng) -> McEstimate:
    """Estimate ``int dU det(1 + U^dagger D)^alpha exp(Tr A U)``."""
    A = _square(A, name="A")
    N = A.shape[0]
    D = _square(D, N, "D")
    integer, flags, heavy = _power_regime(alpha, [operator_norm(D)], "mc_zis1")
    eye = np.eye(N)

    def sampler(gen, m):
        U = _haar_batch(gen, m, N)
        return _det_power(eye + _dagger(U) @ D, alpha, integer) * np.exp(_trace(A @ U))

    return _run(sampler, n, rng, heavy=heavy, flags=flags)


def mc_zis2(A, B, C, D, alpha, n: int, rng) -> McEstimate:
    """Estimate ``int dU dV det(1 + V^dagger C U^dagger D)^alpha exp(Tr A U B V)``."""
    A = _square(A, name="A")
    N = A.shape[0]
    B, C, D = (_square(M, N, s) for M, s in ((B, "B"), (C, "C"), (D, "D")))
    integer, flags, heavy = _power_regime(alpha, [operator_norm(C) * operator_norm(D)], "mc_zis2")
    eye = np.eye(N)

    def sampler(gen, m):
        U = _haar_batch(gen, m, N)
        V = _haar_batch(gen, m, N)
        return _det_power(eye + _dagger(V) @ C @ _dagger(U) @ D, alpha, integer) * np.exp(_trace(A @ U @ B @ V))

    return _run(sampler, n, rng, heavy=heavy, flags=flags)


def mc_zfh1(A, D, alpha, beta, n: int, rng) -> McEstimate:
    """Estimate ``int dU det(1 + A U)^alpha det(1 + U^dagger D)^beta``."""
    A = _square(A, name="A")
    N = A.shape[0]
    D = _square(D, N, "D")
    int_a, flags_a, heavy_a = _power_regime(alpha, [operator_norm(A)], "mc_zfh1")
    int_b, flags_b, heavy_b = _power_regime(beta, [operator_norm(D)], "mc_zfh1")
    eye = np.eye(N)

    def sampler(gen, m):
        U = _haar_batch(gen, m, N)
        return _det_power(eye + A @ U, alpha, int_a) * _det_power(eye + _dagger(U) @ D, beta, int_b)

    heavy = heavy_a or heavy_b or _sum_heavy(alpha, beta, flags_a, flags_b)
    return _run(sampler, n, rng, heavy=heavy, flags=tuple(dict.fromkeys(flags_a + flags_b)))


def _sum_heavy(alpha, beta, flags_a, flags_b):
    # both factors singular at the same point when both norms equal one
    if "unit_norm" in flags_a and "unit_norm" in flags_b:
        return (complex(alpha) + complex(beta)).real < 0
    return False


def mc_zfh2(A, B, C, D, alpha, beta, n: int, rng) -> McEstimate:
    """Estimate ``int dU dV det(1 + A U B V)^alpha det(1 + V^dagger C U^dagger D)^beta``."""
    A = _square(A, name="A")
    N = A.shape[0]
    B, C, D = (_square(M, N, s) for M, s in ((B, "B"), (C, "C"), (D, "D")))
    int_a, flags_a, heavy_a = _power_regime(alpha, [operator_norm(A) * operator_norm(B)], "mc_zfh2")
    int_b, flags_b, heavy_b = _power_regime(beta, [operator_norm(C) * operator_norm(D)], "mc_zfh2")
    eye = np.eye(N)

    def sampler(gen, m):
        U = _haar_batch(gen, m, N)
        V = _haar_batch(gen, m, N)
        return _det_power(eye + A @ U @ B @ V, alpha, int_a) * _det_power(
            eye + _dagger(V) @ C @ _dagger(U) @ D, beta, int_b
        )

    heavy = heavy_a or heavy_b or _sum_heavy(alpha, beta, flags_a, flags_b)
    return _run(sampler, n, rng, heavy=heavy, flags=tuple(dict.fromkeys(flags_a + flags_b)))


def _require_nonnegative_integer(value, name):
    if not is_nonnegative_integer(value):
        raise DomainError(f"{name}: the Hermitian matrix is unbounded, so only non-negative integer exponents are sampled")
    return int(round(complex(value).real))


def mc_jis(A, D, alpha, n: int, rng) -> McEstimate:
    """Estimate ``int dH e^{-Tr X^2} int dU dV det(1 + V^dagger X U^dagger D)^alpha exp(Tr A U X V)``.

    The Hermitian average is sampled from the Gaussian density and multiplied
    by its total mass.
    """
    A = _square(A, name="A")
    N = A.shape[0]
    D = _square(D, N, "D")
    k = _require_nonnegative_integer(alpha, "mc_jis")
    eye = np.eye(N)

    def sampler(gen, m):
        X = _gue_batch(gen, m, N)
        U = _haar_batch(gen, m, N)
        V = _haar_batch(gen, m, N)
        return _det_power(eye + _dagger(V) @ X @ _dagger(U) @ D, k, True) * np.exp(_trace(A @ U @ X @ V))

    return _run(sampler, n, rng, scale=gaussian_hermitian_mass(N))


def mc_jfh(A, D, alpha, beta, n: int, rng) -> McEstimate:
    """Estimate ``int dH e^{-Tr X^2} int dU dV det(1 + A U X V)^alpha det(1 + V^dagger X U^dagger D)^beta``."""
    A = _square(A, name="A")
    N = A.shape[0]
    D = _square(D, N, "D")
    ka = _require_nonnegative_integer(alpha, "mc_jfh")
    kb = _require_nonnegative_integer(beta, "mc_jfh")
    eye = np.eye(N)

    def sampler(gen, m):
        X = _gue_batch(gen, m, N)
        U = _haar_batch(gen, m, N)
        V = _haar_batch(gen, m, N)
        return _det_power(eye + A @ U @ X @ V, ka, True) * _det_power(eye + _dagger(V) @ X @ _dagger(U) @ D, kb, True)

    return _run(sampler, n, rng, scale=gaussian_hermitian_mass(N))


def mc_cor_tw(alpha, sign, b, N: int, n: int, rng) -> McEstimate:
    """Estimate ``int dU det(1 +- U^dagger)^alpha exp(b Tr U)``."""
    s = _sign(sign)
    return mc_zis1(complex(b) * np.eye(N), s * np.eye(N), alpha, n, rng)


def mc_fh_standard(alpha, beta, N: int, n: int, rng) -> McEstimate:
    """Estimate ``int dU det(1 + U)^alpha det(1 + U^dagger)^beta``."""
    return mc_zfh1(np.eye(N), np.eye(N), alpha, beta, n, rng)


def _sign(sign):
    if sign in ("+", 1, +1.0):
        return 1.0
    if sign in ("-", -1, -1.0):
        return -1.0
    raise DomainError(f"sign must be '+' or '-', got {sign!r}")


def torus_average(f, N: int, points: int = 64):
    """Haar average of a class function by the trapezoid rule on the eigenvalue torus.

    ``f`` receives an array of shape ``(K, N)`` of eigenvalues on the unit
    circle and returns ``K`` values; the weight is ``|Delta(t)|^2 / N!``.
    Exact for trigonometric polynomials of degree below ``points``.
    """
    theta = 2 * np.pi * np.arange(points) / points
    grids = np.meshgrid(*([theta] * N), indexing="ij")
    t = np.exp(1j * np.stack([g.ravel() for g in grids], axis=1))
    j, k = np.triu_indices(N, 1)
    weight = np.prod(np.abs(t[:, j] - t[:, k]) ** 2, axis=1) if N > 1 else np.ones(len(t))
    return complex(np.sum(weight * f(t)) / (len(t) * math.factorial(N)))


def realize_pair(mu2, rng, normal=False, max_norm=0.95, tries=50):
    """Matrices ``(A, D)`` with ``eig(A D) = mu2`` and both norms below ``max_norm``.

    ``A = P diag(mu) R``, ``D = R^{-1} diag(mu) P^dagger`` with ``P`` Haar and
    ``R`` a random perturbation of the identity (``R = 1`` when ``normal``),
    followed by the rescaling ``(s A, D / s)`` that balances the two norms.
    """
    gen = _generator(rng)
    mu = np.sqrt(np.asarray(mu2, dtype=complex))
    N = len(mu)
    for attempt in range(tries):
        P = _haar_batch(gen, 1, N)[0]
        if normal:
            R = np.eye(N, dtype=complex)
        else:
            spread = 0.3 / (1 + attempt)
            R = np.eye(N) + spread * _ginibre(gen, 1, N)[0] / math.sqrt(N)
        A = P @ np.diag(mu) @ R
        D = np.linalg.solve(R, np.diag(mu) @ P.conj().T)
        na, nd = operator_norm(A), operator_norm(D)
        if na == 0 or nd == 0:
            return A, D
        s = math.sqrt(nd / na)
        A, D = A * s, D / s
        if max(operator_norm(A), operator_norm(D)) < max_norm or normal:
            return A, D
    raise DomainError("could not realize the spectrum with both norms below max_norm")
