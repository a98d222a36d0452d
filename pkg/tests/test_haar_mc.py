import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from haarint import haar_mc
from haarint.errors import DimensionError, DomainError
from haarint.haar_mc import McEstimate, RngStream


def _moment(values):
    return McEstimate(complex(values.mean()), float(values.std(ddof=1) / math.sqrt(len(values))), len(values))


class TestRngStream:
    def test_reproducible(self):
        a = RngStream(5, 2).chunk(3).standard_normal(10)
        b = RngStream(5, 2).chunk(3).standard_normal(10)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        a = RngStream(5, 2).chunk(0).standard_normal(10)
        b = RngStream(5, 3).chunk(0).standard_normal(10)
        c = RngStream(5, 2).chunk(1).standard_normal(10)
        assert not np.array_equal(a, b) and not np.array_equal(a, c)


class TestHaarSampler:
    @pytest.mark.parametrize("N", [1, 2, 3, 5, 8, 12])
    def test_unitary(self, N):
        U = haar_mc.sample_haar_unitary(N, RngStream(1), size=2000)
        res = np.einsum("nji,njk->nik", U.conj(), U) - np.eye(N)
        assert np.max(np.abs(res)) < 1e-12

    def test_single(self):
        U = haar_mc.sample_haar_unitary(3, np.random.default_rng(0))
        assert U.shape == (3, 3)

    def test_rejects_empty(self):
        with pytest.raises(DimensionError):
            haar_mc.sample_haar_unitary(0, 1)

    def test_entry_moment(self):
        U = haar_mc.sample_haar_unitary(3, RngStream(2), size=10**6)
        est = _moment(np.abs(U[:, 0, 0]) ** 2)
        assert est.agrees_with(1 / 3)

    def test_character_orthogonality(self):
        U = haar_mc.sample_haar_unitary(4, RngStream(3), size=10**6)
        est = _moment(np.abs(np.trace(U, axis1=1, axis2=2)) ** 2)
        assert est.agrees_with(1.0)

    def test_phases_uniform(self):
        # E[U11^2] = 0 fails for a sampler that skips the phase correction
        U = haar_mc.sample_haar_unitary(2, RngStream(4), size=200_000)
        est = _moment(U[:, 0, 0] ** 2)
        assert est.agrees_with(0)

    def test_left_invariance(self):
        rng = RngStream(6)
        W = haar_mc.sample_haar_unitary(3, rng)
        U = haar_mc.sample_haar_unitary(3, RngStream(7), size=100_000)
        V = haar_mc.sample_haar_unitary(3, RngStream(8), size=100_000)
        res = stats.ks_2samp(np.trace(W @ U, axis1=1, axis2=2).real, np.trace(V, axis1=1, axis2=2).real)
        assert res.pvalue > 1e-3

    def test_qr_and_gram_schmidt_paths_agree_in_law(self):
        small = haar_mc.sample_haar_unitary(8, RngStream(9), size=50_000)
        large = haar_mc.sample_haar_unitary(9, RngStream(9), size=50_000)
        assert _moment(np.abs(small[:, 0, 0]) ** 2).agrees_with(1 / 8)
        assert _moment(np.abs(large[:, 0, 0]) ** 2).agrees_with(1 / 9)


class TestGaussianHermitian:
    def test_hermitian(self):
        X = haar_mc.sample_gaussian_hermitian(4, RngStream(1), size=100)
        assert np.max(np.abs(X - np.conj(np.swapaxes(X, 1, 2)))) < 1e-15

    def test_second_moment(self):
        X = haar_mc.sample_gaussian_hermitian(3, RngStream(2), size=10**6)
        tr2 = np.einsum("nij,nji->n", X, X).real
        assert _moment(tr2).agrees_with(9 / 2)
        assert _moment(np.trace(X, axis1=1, axis2=2).real).agrees_with(0)

    def test_mass(self):
        assert haar_mc.gaussian_hermitian_mass(1) == pytest.approx(math.sqrt(math.pi))
        assert haar_mc.gaussian_hermitian_mass(2) == pytest.approx(math.pi**2 / 2)


class TestEstimators:
    def test_one_dimensional_ingham_siegel(self):
        a, d, alpha = 0.6 + 0.2j, 0.5 - 0.3j, 1.5
        est = haar_mc.mc_zis1([[a]], [[d]], alpha, 100_000, 1)
        assert est.agrees_with(complex(mp.hyp1f1(-alpha, 1, -a * d)))

    def test_trivial_exponent(self):
        rng = np.random.default_rng(0)
        A = rng.standard_normal((3, 3)) * 0.3
        D = rng.standard_normal((3, 3)) * 0.3
        assert haar_mc.mc_zis1(A, D, 0, 50_000, 2).agrees_with(1)

    def test_zero_source(self):
        D = np.diag([0.3, -0.2j])
        est = haar_mc.mc_zis1(np.zeros((2, 2)), D, 0.7 + 0.3j, 50_000, 3)
        assert est.agrees_with(1)
        exact = haar_mc.mc_zis1(np.zeros((2, 2)), D, 0, 2_000, 3)
        assert exact.mean == 1 and exact.stderr == 0

    def test_domain(self):
        D = 1.2 * np.eye(2)
        with pytest.raises(DomainError):
            haar_mc.mc_zis1(np.eye(2), D, 0.5, 1000, 0)
        haar_mc.mc_zis1(np.eye(2), D, 2, 1000, 0)

    def test_unit_norm_flags(self):
        est = haar_mc.mc_zis1(np.zeros((1, 1)), np.eye(1), 0.5, 20_000, 0)
        assert "unit_norm" in est.flags and est.method == "mean"
        heavy = haar_mc.mc_zis1(np.zeros((1, 1)), np.eye(1), -0.5, 20_000, 0)
        assert heavy.method == "median_of_means" and "heavy_tail" in heavy.flags

    def test_hermitian_average_needs_integers(self):
        with pytest.raises(DomainError):
            haar_mc.mc_jis(np.eye(2), np.eye(2), 0.5, 1000, 0)
        with pytest.raises(DomainError):
            haar_mc.mc_jfh(np.eye(2), np.eye(2), 1, -1, 1000, 0)

    def test_hermitian_average_trivial(self):
        est = haar_mc.mc_jfh(0.3 * np.eye(2), 0.3 * np.eye(2), 0, 0, 5000, 0)
        assert est.mean == pytest.approx(math.pi**2 / 2)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            haar_mc.mc_zis1(np.eye(2), np.eye(3), 1, 1000, 0)

    def test_fisher_hartwig_exchange(self):
        rng = np.random.default_rng(1)
        A, D = haar_mc.realize_pair([0.2 + 0.1j, -0.15], rng)
        est1 = haar_mc.mc_zfh1(A, D, 1.5, 0.4, 100_000, 4)
        est2 = haar_mc.mc_zfh1(D, A, 0.4, 1.5, 100_000, 5)
        diff = est1.mean - est2.mean
        bound = 4 * math.hypot(est1.stderr, est2.stderr)
        assert abs(diff.real) <= bound and abs(diff.imag) <= bound

    def test_reality_for_normal_real_spectrum(self):
        A, D = haar_mc.realize_pair([0.2, -0.1], np.random.default_rng(2), normal=True)
        est = haar_mc.mc_zis1(A, D, 1.5, 100_000, 6)
        assert abs(est.mean.imag) <= 4 * est.stderr

    def test_standard_error_scaling(self):
        A, D = haar_mc.realize_pair([0.2 + 0.1j, -0.15], np.random.default_rng(3))
        ratios = [
            haar_mc.mc_zis1(A, D, 1.5, 40_000, s).stderr / haar_mc.mc_zis1(A, D, 1.5, 20_000, s + 100).stderr
            for s in range(5)
        ]
        assert np.mean(ratios) == pytest.approx(1 / math.sqrt(2), rel=0.2)

    def test_bit_identical(self):
        A, D = haar_mc.realize_pair([0.2, 0.1j], np.random.default_rng(4))
        a = haar_mc.mc_zis2(A, A, D, D, 0.7, 120_000, RngStream(9, 1))
        b = haar_mc.mc_zis2(A, A, D, D, 0.7, 120_000, RngStream(9, 1))
        assert a.mean == b.mean and a.stderr == b.stderr

    def test_thread_count_does_not_change_result(self, monkeypatch):
        A, D = haar_mc.realize_pair([0.2, 0.1j], np.random.default_rng(5))
        monkeypatch.setenv("HAARINT_THREADS", "1")
        a = haar_mc.mc_zfh1(A, D, 1.5, 0.5, 160_000, 3)
        monkeypatch.setenv("HAARINT_THREADS", "3")
        b = haar_mc.mc_zfh1(A, D, 1.5, 0.5, 160_000, 3)
        assert a.mean == b.mean and a.stderr == b.stderr

    def test_standard_fisher_hartwig(self):
        assert haar_mc.mc_fh_standard(1, 1, 2, 100_000, 7).agrees_with(3)

    def test_sign_validation(self):
        with pytest.raises(DomainError):
            haar_mc.mc_cor_tw(1, "*", 0.3, 2, 1000, 0)


class TestHelpers:
    def test_torus_average_characters(self):
        assert haar_mc.torus_average(lambda t: np.ones(len(t)), 3, points=8) == pytest.approx(1)
        val = haar_mc.torus_average(lambda t: np.abs(t.sum(axis=1)) ** 2, 3, points=8)
        assert val == pytest.approx(1)

    @pytest.mark.parametrize("normal", [False, True])
    def test_realize_pair(self, normal):
        mu2 = [0.2 + 0.1j, -0.15, 0.05j]
        A, D = haar_mc.realize_pair(mu2, np.random.default_rng(6), normal=normal)
        eig = np.sort_complex(np.linalg.eigvals(A @ D))
        np.testing.assert_allclose(eig, np.sort_complex(np.asarray(mu2)), atol=1e-12)
        assert max(haar_mc.operator_norm(A), haar_mc.operator_norm(D)) < 0.95

    def test_agrees_with(self):
        est = McEstimate(1 + 1j, 0.1, 100)
        assert est.agrees_with(1.35 + 0.7j)
        assert not est.agrees_with(1.5 + 1j)
        assert est.discrepancy(1.2 + 1j) == pytest.approx(2, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 4))
def test_unitarity_any_seed(seed, N):
    U = haar_mc.sample_haar_unitary(N, RngStream(seed), size=50)
    assert np.max(np.abs(np.einsum("nji,njk->nik", U.conj(), U) - np.eye(N))) < 1e-12
