"""Dense complex linear algebra used by every evaluation route.

Determinants are LAPACK LU (through :func:`numpy.linalg.slogdet`) and are
exposed in ``(log|det|, phase)`` form so that products of Gamma factors and
Vandermonde determinants never overflow.  The Pfaffian and the eigenvalue
solver are implemented here directly.

The ratio ``det[f_j(x_k)] / Delta_N(x)`` is the common structure of every
determinantal formula in the package.  :func:`det_ratio` and
:func:`det_ratio2` evaluate it on spectra with (near-)coincident points by
replacing the columns of each cluster with divided differences built from
derivatives at the cluster centre.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import CapabilityError, DimensionError, InputError, NumericalError

__all__ = [
    "Spectrum",
    "det",
    "slogdet",
    "pfaffian",
    "eigenvalues",
    "vandermonde",
    "log_vandermonde",
    "confluent_vandermonde",
    "det_ratio",
    "det_ratio2",
    "monomial",
    "power_table",
    "DEFAULT_CLUSTER_RTOL",
]

DEFAULT_CLUSTER_RTOL = 1e-4
# derivative orders used beyond the cluster size to correct for nonzero spread
_EXTRA_ORDERS = 3


@dataclass(frozen=True)
class Spectrum:
    """Ordered complex values with a grouping of near-coincident entries.

    ``cluster_threshold`` is absolute; every cluster has diameter strictly
    below it.  Use :meth:`from_values` to build one with the default
    relative threshold.
    """

    values: tuple
    cluster_threshold: float
    clusters: tuple

    def __post_init__(self):
        n = len(self.values)
        seen = sorted(i for c in self.clusters for i in c)
        if seen != list(range(n)):
            raise InputError("clusters must partition the spectrum indices")

    @classmethod
    def from_values(cls, values, rtol=DEFAULT_CLUSTER_RTOL, threshold=None):
        vals = tuple(complex(v) for v in np.ravel(np.asarray(values, dtype=complex)))
        if threshold is None:
            scale = max((abs(v) for v in vals), default=0.0)
            threshold = rtol * (scale if scale > 0 else 1.0)
        return cls(vals, float(threshold), _complete_linkage(vals, float(threshold)))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def as_array(self):
        return np.asarray(self.values, dtype=complex)

    @property
    def has_clusters(self):
        return any(len(c) > 1 for c in self.clusters)

    @property
    def max_modulus(self):
        return max((abs(v) for v in self.values), default=0.0)


def _complete_linkage(vals, threshold):
    clusters = [[i] for i in range(len(vals))]
    if threshold <= 0 or len(vals) < 2:
        return tuple(tuple(c) for c in clusters)
    arr = np.asarray(vals, dtype=complex)
    dist = np.abs(arr[:, None] - arr[None, :])
    while True:
        best = None
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                diam = dist[np.ix_(clusters[a] + clusters[b], clusters[a] + clusters[b])].max()
                if diam < threshold and (best is None or diam < best[0]):
                    best = (diam, a, b)
        if best is None:
            break
        _, a, b = best
        clusters[a] = sorted(clusters[a] + clusters.pop(b))
    clusters.sort(key=lambda c: c[0])
    return tuple(tuple(c) for c in clusters)


def _as_spectrum(values):
    if isinstance(values, Spectrum):
        return values
    return Spectrum.from_values(values)


def _square(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2] or M.shape[-1] < 1:
        raise DimensionError(f"expected square matrix (or stack), got shape {M.shape}")
    return M


def slogdet(M):
    """Return ``(log|det M|, phase)`` with ``det M = phase * exp(log|det M|)``.

    Works on a single matrix or a stack of shape ``(..., n, n)``.
    """
    M = _square(M)
    phase, logabs = np.linalg.slogdet(M)
    return logabs, phase


def det(M):
    """Determinant via LU with partial pivoting."""
    logabs, phase = slogdet(M)
    with np.errstate(under="ignore", over="ignore"):
        return phase * np.exp(logabs)


def pfaffian(M, rtol=1e-12):
    """Pfaffian of an even-dimensional skew-symmetric matrix.

    Parlett-Reid style: skew-symmetric Gauss transformations with partial
    pivoting reduce ``M`` to tridiagonal form, and the Pfaffian is the
    product of the ``(k, k+1)`` pivots, ``k = 0, 2, 4, ...``.
    """
    A = np.array(_square(M), dtype=complex)
    if A.ndim != 2:
        raise DimensionError("pfaffian expects a single matrix")
    n = A.shape[0]
    if n % 2:
        raise DimensionError(f"pfaffian needs even dimension, got {n}")
    scale = max(1.0, float(np.max(np.abs(A))))
    if np.max(np.abs(A + A.T)) > rtol * scale:
        raise InputError("matrix is not skew-symmetric within tolerance")
    pf = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1:, k])))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            pf = -pf
        if A[k + 1, k] == 0:
            return 0j
        pf *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2:] / A[k, k + 1]
            col = A[k + 2:, k + 1].copy()
            A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    return complex(pf)


def _hessenberg(A):
    n = A.shape[0]
    H = A.copy()
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0
    return H


def _wilkinson_shift(a, b, c, d):
    # eigenvalue of [[a, b], [c, d]] closest to d
    tr = a + d
    disc = np.sqrt((a - d) ** 2 / 4 + b * c)
    mu1 = tr / 2 + disc
    mu2 = tr / 2 - disc
    return mu1 if abs(mu1 - d) < abs(mu2 - d) else mu2


def eigenvalues(M, max_iter_per_n=100):
    """Eigenvalues of a square complex matrix, as a :class:`Spectrum`.

    Householder reduction to Hessenberg form followed by Wilkinson-shifted QR
    sweeps (Givens rotations).  Values are sorted by (real, imag).
    """
    A = _square(M)
    if A.ndim != 2:
        raise DimensionError("eigenvalues expects a single matrix")
    n = A.shape[0]
    if n > 64:
        raise DimensionError("eigenvalues supports dimension <= 64")
    H = _hessenberg(A)
    eps = np.finfo(float).eps
    norm = max(float(np.max(np.abs(H))), np.finfo(float).tiny)
    hi = n - 1
    iters = 0
    since_deflation = 0
    cap = max_iter_per_n * n
    while hi > 0:
        # locate the active unreduced block [lo, hi]
        lo = hi
        while lo > 0:
            s = abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])
            if abs(H[lo, lo - 1]) < 1e-14 * s or abs(H[lo, lo - 1]) < eps * norm * 1e-2:
                H[lo, lo - 1] = 0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            since_deflation = 0
            continue
        iters += 1
        since_deflation += 1
        if iters > cap:
            raise NumericalError(
                f"QR iteration did not converge in {cap} sweeps",
                residual=float(abs(H[hi, hi - 1])),
            )
        if since_deflation % 11 == 0:
            # exceptional shift against cycling
            mu = H[hi, hi] + 0.75 * abs(H[hi, hi - 1]) * (1 + 1j)
        else:
            mu = _wilkinson_shift(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
        for k in range(lo, hi + 1):
            H[k, k] -= mu
        rots = []
        for k in range(lo, hi):
            a, b = H[k, k], H[k + 1, k]
            r = math.hypot(abs(a), abs(b))
            if r == 0:
                c, s = 1.0, 0j
            else:
                c, s = abs(a) / r, (a / abs(a) if a != 0 else 1.0) * np.conj(b) / r
            G = np.array([[c, s], [-np.conj(s), c]])
            H[k:k + 2, k:] = G @ H[k:k + 2, k:]
            rots.append(G)
        for k, G in zip(range(lo, hi), rots):
            H[: min(k + 3, n), k:k + 2] = H[: min(k + 3, n), k:k + 2] @ G.conj().T
        for k in range(lo, hi + 1):
            H[k, k] += mu
    vals = sorted(np.diag(H).tolist(), key=lambda z: (z.real, z.imag))
    return Spectrum.from_values(vals)


def log_vandermonde(values):
    """``(log|Delta|, phase)`` for ``Delta = prod_{j<k} (t_j - t_k)``."""
    t = np.asarray(list(values), dtype=complex)
    n = t.size
    if n < 2:
        return 0.0, 1.0 + 0j
    j, k = np.triu_indices(n, 1)
    diff = t[j] - t[k]
    if np.any(diff == 0):
        return -np.inf, 0j
    logabs = float(np.sum(np.log(np.abs(diff))))
    phase = complex(np.prod(diff / np.abs(diff)))
    return logabs, phase


def vandermonde(values):
    """Vandermonde determinant ``det[t_j^{N-k}] = prod_{j<k} (t_j - t_k)``."""
    logabs, phase = log_vandermonde(values)
    if phase == 0:
        return 0j
    return complex(phase * math.exp(logabs))


# ---------------------------------------------------------------------------
# confluent determinant ratios


@dataclass(frozen=True)
class _Block:
    indices: tuple       # positions in the original spectrum
    center: complex
    weights: np.ndarray  # (m, K): column i = sum_k weights[i, k] * f^(k)(center)


def _complete_homogeneous(d, order):
    """h_0..h_order of the variables d (1-d array)."""
    h = np.zeros(order + 1, dtype=complex)
    h[0] = 1
    for x in d:
        for j in range(1, order + 1):
            h[j] = h[j] + x * h[j - 1]
    return h


def _blocks(spec, max_order):
    blocks = []
    for cl in spec.clusters:
        pts = np.asarray([spec.values[i] for i in cl], dtype=complex)
        m = len(cl)
        if m == 1:
            blocks.append(_Block(tuple(cl), complex(pts[0]), np.ones((1, 1), dtype=complex)))
            continue
        if max_order is not None and max_order < m - 1:
            raise CapabilityError(
                f"cluster of size {m} needs derivatives up to order {m - 1}, "
                f"functions provide {max_order}"
            )
        c = complex(pts.mean())
        d = pts - c
        extra = 0 if not np.any(d) else _EXTRA_ORDERS
        if max_order is not None:
            extra = min(extra, max_order - (m - 1))
        K = m + extra
        W = np.zeros((m, K), dtype=complex)
        for i in range(m):
            h = _complete_homogeneous(d[: i + 1], K - 1 - i)
            for k in range(i, K):
                W[i, k] = h[k - i] / math.factorial(k)
        blocks.append(_Block(tuple(cl), c, W))
    return blocks


def _block_log_denominator(spec, blocks):
    """log form of Delta(x) after the divided-difference column operations."""
    order = [i for b in blocks for i in b.indices]
    x = np.asarray([spec.values[i] for i in order], dtype=complex)
    owner = np.concatenate([[bi] * len(b.indices) for bi, b in enumerate(blocks)])
    j, k = np.triu_indices(len(x), 1)
    cross = owner[j] != owner[k]
    diff = x[j][cross] - x[k][cross]
    if np.any(diff == 0):
        return -np.inf, 0j
    logabs = float(np.sum(np.log(np.abs(diff))))
    phase = complex(np.prod(diff / np.abs(diff))) if diff.size else 1 + 0j
    flips = sum(len(b.indices) * (len(b.indices) - 1) // 2 for b in blocks)
    return logabs, phase * (-1) ** flips


def confluent_vandermonde(values):
    """Denominator used by :func:`det_ratio` in ``(log|.|, phase)`` form.

    Equals ``Delta(x)`` divided by the within-cluster difference products,
    i.e. the Vandermonde determinant of the divided-difference basis.
    """
    spec = _as_spectrum(values)
    return _block_log_denominator(spec, _blocks(spec, None))


def _max_order(funcs):
    orders = [getattr(f, "max_order", None) for f in funcs]
    orders = [o for o in orders if o is not None]
    return min(orders) if orders else None


def _ratio_from_logs(num_log, num_phase, den_log, den_phase):
    if den_phase == 0:
        raise NumericalError("confluent Vandermonde vanished; spectrum clustering inconsistent")
    if num_phase == 0:
        return 0j
    with np.errstate(under="ignore", over="ignore"):
        return complex(num_phase / den_phase * np.exp(num_log - den_log))


def det_ratio(funcs: Sequence[Callable], values):
    """``det[f_j(x_k)] / Delta_N(x)`` with confluent handling of clusters.

    Each ``f`` is called as ``f(x, order)`` and must return the ``order``-th
    derivative at ``x``.  A ``max_order`` attribute on ``f`` caps the orders
    it can provide; a cluster of size ``m`` needs order ``m - 1``.
    """
    spec = _as_spectrum(values)
    n = len(spec)
    if len(funcs) != n:
        raise DimensionError(f"{len(funcs)} functions for {n} spectrum points")
    blocks = _blocks(spec, _max_order(funcs))
    mat = np.empty((n, n), dtype=complex)
    col = 0
    for b in blocks:
        K = b.weights.shape[1]
        derivs = np.array([[f(b.center, k) for k in range(K)] for f in funcs], dtype=complex)
        m = len(b.indices)
        mat[:, col:col + m] = derivs @ b.weights.T
        col += m
    num_log, num_phase = slogdet(mat)
    den_log, den_phase = _block_log_denominator(spec, blocks)
    return _ratio_from_logs(float(num_log), complex(num_phase), den_log, den_phase)


def det_ratio2(kernel: Callable, xs, ys, max_order=None):
    """``det[K(x_j, y_k)] / (Delta_N(x) Delta_N(y))`` with clusters on both sides.

    ``kernel(x, y, p, q)`` returns the mixed derivative
    ``d^p/dx^p d^q/dy^q K(x, y)``.
    """
    xspec, yspec = _as_spectrum(xs), _as_spectrum(ys)
    n = len(xspec)
    if len(yspec) != n:
        raise DimensionError("both spectra must have the same length")
    xb, yb = _blocks(xspec, max_order), _blocks(yspec, max_order)
    mat = np.empty((n, n), dtype=complex)
    row = 0
    for bx in xb:
        mx, Kx = bx.weights.shape
        col = 0
        for by in yb:
            my, Ky = by.weights.shape
            D = np.array([[kernel(bx.center, by.center, p, q) for q in range(Ky)]
                          for p in range(Kx)], dtype=complex)
            mat[row:row + mx, col:col + my] = bx.weights @ D @ by.weights.T
            col += my
        row += mx
    num_log, num_phase = slogdet(mat)
    dx_log, dx_phase = _block_log_denominator(xspec, xb)
    dy_log, dy_phase = _block_log_denominator(yspec, yb)
    return _ratio_from_logs(float(num_log), complex(num_phase), dx_log + dy_log, dx_phase * dy_phase)


def power_table(values, max_power):
    """Confluent columns of the monomials ``x**p`` for ``p = 0..max_power``.

    Returns ``(table, (log|den|, phase))`` such that for any strictly
    decreasing powers ``m``, ``det(table[m, :]) / den`` equals
    ``det_ratio([monomial(p) for p in m], values)``.
    """
    spec = _as_spectrum(values)
    blocks = _blocks(spec, None)
    p = np.arange(max_power + 1)
    cols = []
    for b in blocks:
        K = b.weights.shape[1]
        D = np.zeros((max_power + 1, K), dtype=complex)
        falling = np.ones(max_power + 1)
        for k in range(K):
            if k:
                falling = falling * (p - k + 1)
            mask = p >= k
            D[mask, k] = falling[mask] * b.center ** (p[mask] - k)
        cols.append(D @ b.weights.T)
    table = np.concatenate(cols, axis=1)
    return table, _block_log_denominator(spec, blocks)


def monomial(power):
    """``x -> x**power`` in the ``f(x, order)`` convention of :func:`det_ratio`."""

    def f(x, order=0):
        if order > power:
            return 0j
        return math.perm(power, order) * complex(x) ** (power - order)

    return f
