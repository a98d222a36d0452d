import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from haarint import linalg
from haarint.errors import CapabilityError, DimensionError, InputError, NumericalError
from haarint.specfun import kummer_1f1_deriv, pochhammer


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_skew(rng, n):
    M = random_complex(rng, n, n)
    return M - M.T


def matching_pfaffian(M):
    """Brute-force sum over perfect matchings."""
    n = M.shape[0]
    if n == 0:
        return 1.0
    total = 0
    for k in range(1, n):
        rest = [i for i in range(1, n) if i != k]
        sub = M[np.ix_(rest, rest)]
        total += (-1) ** (k - 1) * M[0, k] * matching_pfaffian(sub)
    return total


class TestDet:
    def test_identity(self):
        assert linalg.det(np.eye(3)) == pytest.approx(1)

    def test_diagonal(self):
        assert linalg.det(np.diag([2, 3j])) == pytest.approx(6j)

    def test_inverse_product(self):
        rng = np.random.default_rng(1)
        M = random_complex(rng, 4, 4)
        np.testing.assert_allclose(linalg.det(M) * linalg.det(np.linalg.inv(M)), 1, rtol=1e-10)

    def test_log_form_avoids_overflow(self):
        M = 1e20 * np.eye(64)
        logabs, phase = linalg.slogdet(M)
        assert logabs == pytest.approx(64 * 20 * math.log(10))
        assert phase == pytest.approx(1)

    def test_non_square(self):
        with pytest.raises(DimensionError):
            linalg.det(np.ones((2, 3)))


class TestPfaffian:
    def test_two_by_two(self):
        assert linalg.pfaffian(np.array([[0, 2.5 - 1j], [-2.5 + 1j, 0]])) == pytest.approx(2.5 - 1j)

    def test_zero(self):
        assert linalg.pfaffian(np.zeros((4, 4))) == 0

    def test_four_by_four_matchings(self):
        rng = np.random.default_rng(2)
        A = random_skew(rng, 4)
        expected = A[0, 1] * A[2, 3] - A[0, 2] * A[1, 3] + A[0, 3] * A[1, 2]
        np.testing.assert_allclose(linalg.pfaffian(A), expected, rtol=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 6, 8])
    def test_brute_force(self, n):
        rng = np.random.default_rng(n)
        A = random_skew(rng, n)
        np.testing.assert_allclose(linalg.pfaffian(A), matching_pfaffian(A), rtol=1e-10)

    def test_square_equals_det(self):
        rng = np.random.default_rng(3)
        for trial in range(1000):
            n = 2 * rng.integers(1, 5)
            A = random_skew(rng, n)
            np.testing.assert_allclose(linalg.pfaffian(A) ** 2, linalg.det(A), rtol=1e-10)

    @pytest.mark.parametrize("n", [4, 6])
    def test_congruence(self, n):
        rng = np.random.default_rng(10 + n)
        for trial in range(50):
            A = random_skew(rng, n)
            B = random_complex(rng, n, n)
            np.testing.assert_allclose(
                linalg.pfaffian(B.T @ A @ B), linalg.det(B) * linalg.pfaffian(A), rtol=1e-9
            )

    def test_odd_dimension(self):
        with pytest.raises(DimensionError):
            linalg.pfaffian(np.zeros((3, 3)))

    def test_not_skew(self):
        with pytest.raises(InputError):
            linalg.pfaffian(np.ones((2, 2)))


class TestEigenvalues:
    def test_upper_triangular(self):
        M = np.triu(np.arange(1, 10).reshape(3, 3)).astype(complex)
        M[1, 1] = 2j
        spec = linalg.eigenvalues(M)
        np.testing.assert_allclose(sorted(spec.values, key=lambda z: (z.real, z.imag)), spec.values)
        np.testing.assert_allclose(spec.values, [2j, 1, 9], atol=1e-12)

    def test_companion(self):
        spec = linalg.eigenvalues(np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(spec.values, [-1, 1], atol=1e-13)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 6])
    def test_similar_products(self, n):
        rng = np.random.default_rng(20 + n)
        for trial in range(20):
            A, D = random_complex(rng, n, n), random_complex(rng, n, n)
            np.testing.assert_allclose(
                linalg.eigenvalues(A @ D).values, linalg.eigenvalues(D @ A).values, atol=1e-9
            )

    @pytest.mark.parametrize("n", [4, 16, 40, 64])
    def test_against_lapack(self, n):
        rng = np.random.default_rng(n)
        M = random_complex(rng, n, n)
        ours = np.asarray(linalg.eigenvalues(M).values)
        ref = np.linalg.eigvals(M)
        ref = np.array(sorted(ref, key=lambda z: (z.real, z.imag)))
        np.testing.assert_allclose(ours, ref, atol=1e-9 * np.abs(ref).max())

    def test_repeated_eigenvalue(self):
        J = np.array([[2, 1, 0], [0, 2, 1], [0, 0, 2]], dtype=complex)
        rng = np.random.default_rng(5)
        S = random_complex(rng, 3, 3)
        spec = linalg.eigenvalues(S @ J @ np.linalg.inv(S))
        np.testing.assert_allclose(spec.values, [2, 2, 2], atol=1e-4)
        assert spec.has_clusters

    def test_iteration_cap(self):
        rng = np.random.default_rng(6)
        with pytest.raises(NumericalError):
            linalg.eigenvalues(random_complex(rng, 8, 8), max_iter_per_n=0)


class TestSpectrum:
    def test_clusters_partition_indices(self):
        spec = linalg.Spectrum.from_values([0.5, 0.5 + 1e-7, 0.1, 0.1 - 2e-7j, 0.9])
        flat = sorted(i for c in spec.clusters for i in c)
        assert flat == list(range(5))
        assert len(spec.clusters) == 3

    def test_cluster_width_bound(self):
        spec = linalg.Spectrum.from_values([0.0, 0.6e-4, 1.2e-4, 1.0])
        for c in spec.clusters:
            for i, j in itertools.combinations(c, 2):
                assert abs(spec.values[i] - spec.values[j]) < spec.cluster_threshold


class TestVandermonde:
    def test_single(self):
        assert linalg.vandermonde([0.3]) == 1

    def test_pair(self):
        assert linalg.vandermonde([2, 1]) == 1

    def test_repeated(self):
        assert linalg.vandermonde([0.4, 0.4, 1.0]) == 0

    @pytest.mark.parametrize("n", range(1, 7))
    def test_matches_power_determinant(self, n):
        rng = np.random.default_rng(30 + n)
        for trial in range(10):
            t = random_complex(rng, n)
            powers = t[:, None] ** (n - 1 - np.arange(n))[None, :]
            np.testing.assert_allclose(linalg.vandermonde(t), linalg.det(powers), rtol=1e-10)


def kummer_column(a, b):
    """z -> 1F1(a; b; -z), with derivatives."""

    def f(z, order=0):
        return (-1) ** order * kummer_1f1_deriv(a, b, -z, order)

    return f


def kummer_monomial_column(a, b, power):
    """z -> 1F1(a; b; -z) z**power via Leibniz."""
    base = kummer_column(a, b)

    def f(z, order=0):
        total = 0j
        for i in range(min(order, power) + 1):
            total += math.comb(order, i) * pochhammer(power - i + 1, i) * z ** (power - i) * base(z, order - i)
        return total

    return f


class TestDetRatio:
    @pytest.mark.parametrize("values", [[0.3, -0.2, 0.7j], [0.5, 0.5, 0.5], [0.2, 0.2, 0.9], [1e-9, 0.0]])
    def test_monomials_give_one(self, values):
        n = len(values)
        funcs = [linalg.monomial(n - 1 - j) for j in range(n)]
        np.testing.assert_allclose(linalg.det_ratio(funcs, values), 1, rtol=1e-12)

    def test_perturbed_vs_confluent(self):
        funcs = [kummer_monomial_column(-1.3, 2 - j, 1 - j) for j in range(2)]
        c, eps = 0.3 + 0.1j, 1e-5
        merged = linalg.det_ratio(funcs, [c, c])
        split = linalg.det_ratio(funcs, linalg.Spectrum.from_values([c + eps, c - eps], threshold=0))
        np.testing.assert_allclose(split, merged, rtol=1e-3)

    def test_continuity_across_threshold(self):
        n = 3
        funcs = [kummer_monomial_column(-0.7 + 0.2j, n - j, n - 1 - j) for j in range(n)]
        base = np.array([0.2, 0.21, -0.1])
        spec = linalg.Spectrum.from_values(base)
        width = spec.cluster_threshold
        inside = linalg.Spectrum.from_values([0.2, 0.2 + 0.5 * width, -0.1])
        outside = linalg.Spectrum.from_values([0.2, 0.2 + 2 * width, -0.1])
        assert inside.has_clusters and not outside.has_clusters
        np.testing.assert_allclose(
            linalg.det_ratio(funcs, inside), linalg.det_ratio(funcs, outside), rtol=1e-5
        )

    def test_permutation_invariance(self):
        funcs = [kummer_monomial_column(1.5, 3 - j, 2 - j) for j in range(3)]
        vals = [0.1, 0.1 + 1e-7, 0.4j]
        a = linalg.det_ratio(funcs, vals)
        b = linalg.det_ratio(funcs, [vals[2], vals[0], vals[1]])
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_missing_derivatives(self):
        f = linalg.monomial(1)
        g = lambda x, order=0: 1.0 if order == 0 else 0.0  # noqa: E731
        g.max_order = 0
        with pytest.raises(CapabilityError):
            linalg.det_ratio([f, g], [0.2, 0.2])

    def test_bivariate_matches_perturbed(self):
        def kernel(x, y, p, q):
            # d^p_x d^q_y exp(x y)
            total = 0j
            for i in range(min(p, q) + 1):
                total += math.comb(p, i) * math.perm(q, i) * x ** (q - i) * y ** (p - i)
            return total * np.exp(x * y)

        xs = [0.3, 0.3, -0.2]
        ys = [0.5, 0.1, 0.1]
        merged = linalg.det_ratio2(kernel, xs, ys)
        eps = 1e-4
        xp = linalg.Spectrum.from_values([0.3 + eps, 0.3 - eps, -0.2], threshold=0)
        yp = linalg.Spectrum.from_values([0.5, 0.1 + eps, 0.1 - eps], threshold=0)
        np.testing.assert_allclose(linalg.det_ratio2(kernel, xp, yp), merged, rtol=1e-6)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=5))
def test_monomial_ratio_is_one_everywhere(values):
    n = len(values)
    funcs = [linalg.monomial(n - 1 - j) for j in range(n)]
    np.testing.assert_allclose(linalg.det_ratio(funcs, values), 1, rtol=1e-8)
