import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from haarint import specfun
from haarint.errors import ConvergenceError, DomainError, PoleError

finite = dict(allow_nan=False, allow_infinity=False)


class TestSeriesControl:
    def test_defaults(self):
        ctl = specfun.SeriesControl()
        assert (ctl.rel_tol, ctl.max_terms, ctl.consecutive_small) == (1e-14, 10000, 3)

    @pytest.mark.parametrize("kwargs", [{"rel_tol": 1.0}, {"rel_tol": 0}, {"max_terms": 9}])
    def test_rejects(self, kwargs):
        with pytest.raises(ValueError):
            specfun.SeriesControl(**kwargs)


class TestLogGamma:
    def test_values(self):
        assert specfun.log_gamma(1) == pytest.approx(0)
        assert specfun.log_gamma(5) == pytest.approx(math.log(24))
        assert specfun.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)

    def test_pole(self):
        with pytest.raises(PoleError) as err:
            specfun.log_gamma(-3)
        assert err.value.location == -3

    def test_against_mpmath(self):
        rng = np.random.default_rng(0)
        for z in rng.uniform(-20, 20, 200) + 1j * rng.uniform(-20, 20, 200):
            ref = complex(mp.loggamma(z))
            np.testing.assert_allclose(specfun.log_gamma(z), ref, rtol=1e-13)

    def test_recurrence(self):
        rng = np.random.default_rng(1)
        for _ in range(1000):
            z = cmath.rect(rng.uniform(0.1, 20), rng.uniform(-math.pi, math.pi))
            np.testing.assert_allclose(specfun.gamma(z + 1), z * specfun.gamma(z), rtol=1e-12)

    def test_gamma_shift_identity(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            alpha = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
            j, m = int(rng.integers(1, 7)), int(rng.integers(0, 13))
            lhs = cmath.exp(specfun.log_gamma(alpha + j) - specfun.log_gamma(alpha + j - m))
            rhs = (-1) ** m * cmath.exp(specfun.log_gamma(-alpha - j + 1 + m) - specfun.log_gamma(-alpha - j + 1))
            np.testing.assert_allclose(lhs, rhs, rtol=1e-11)


class TestBinomial:
    def test_simple(self):
        assert specfun.gen_binomial(0.3 + 2j, 0) == 1
        assert specfun.gen_binomial(5, 2) == 10
        assert specfun.gen_binomial(3, 5) == 0

    def test_negative_index(self):
        with pytest.raises(DomainError):
            specfun.gen_binomial(1.0, -1)

    def test_negative_upper_index(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            alpha = complex(*rng.standard_normal(2)) * 3
            k = int(rng.integers(0, 11))
            np.testing.assert_allclose(
                specfun.gen_binomial(alpha, k),
                (-1) ** k * specfun.gen_binomial(k - alpha - 1, k),
                rtol=1e-12,
            )

    def test_gamma_form(self):
        assert specfun.binomial_gamma(4, 2) == pytest.approx(6)
        assert specfun.binomial_gamma(2, -1) == 0
        np.testing.assert_allclose(
            specfun.binomial_gamma(1.3 + 0.2j, 0.6 - 0.1j), complex(mp.binomial(1.3 + 0.2j, 0.6 - 0.1j)), rtol=1e-13
        )


class TestKummer:
    def test_trivial(self):
        assert specfun.kummer_1f1(2.1, 0.3j, 0) == 1
        assert specfun.kummer_1f1(-1, 1, -0.7) == pytest.approx(1.7)

    def test_pole(self):
        with pytest.raises(PoleError):
            specfun.kummer_1f1(0.5, -2, 0.1)

    def test_convergence_error(self):
        with pytest.raises(ConvergenceError) as err:
            specfun.kummer_1f1(0.5, 1.5, 40, specfun.SeriesControl(max_terms=10))
        assert err.value.partial != 0

    def test_against_mpmath(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            a, b = complex(*rng.uniform(-4, 4, 2)), complex(rng.uniform(0.5, 5), rng.uniform(-1, 1))
            z = complex(*rng.uniform(-5, 5, 2))
            np.testing.assert_allclose(specfun.kummer_1f1(a, b, z), complex(mp.hyp1f1(a, b, z)), rtol=1e-11)

    def test_derivative(self):
        a, b, z, h = 0.7 - 0.2j, 1.4, 0.3 + 0.5j, 1e-6
        fd = (specfun.kummer_1f1(a, b, z + h) - specfun.kummer_1f1(a, b, z - h)) / (2 * h)
        np.testing.assert_allclose(fd, specfun.kummer_1f1_deriv(a, b, z, 1), rtol=1e-6)
        np.testing.assert_allclose(specfun.kummer_1f1_deriv(a, b, z, 1), a / b * specfun.kummer_1f1(a + 1, b + 1, z))

    def test_analytic_in_a(self):
        b, z, h = 1.3, 0.8 - 0.2j, 1e-6
        rng = np.random.default_rng(5)
        for a in rng.uniform(-2, 2, 10) + 1j * rng.uniform(-2, 2, 10):
            d_re = (specfun.kummer_1f1(a + h, b, z) - specfun.kummer_1f1(a - h, b, z)) / (2 * h)
            d_im = (specfun.kummer_1f1(a + 1j * h, b, z) - specfun.kummer_1f1(a - 1j * h, b, z)) / (2j * h)
            assert abs(d_re - d_im) < 1e-6 * max(1, abs(d_re))


class TestGauss:
    def test_trivial(self):
        assert specfun.gauss_2f1(0.2, 0.4, 1.1, 0) == 1
        b, c, z = 0.3 + 1j, 2.5, 3.0 - 2j
        assert specfun.gauss_2f1(-1, b, c, z) == pytest.approx(1 - b * z / c)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.gauss_2f1(0.2, 0.4, 1.1, 1.5)
        with pytest.raises(DomainError):
            specfun.gauss_2f1(0.6, 0.6, 1.1, 1.0)
        with pytest.raises(PoleError):
            specfun.gauss_2f1(0.2, 0.4, -1, 0.5)

    def test_against_mpmath(self):
        rng = np.random.default_rng(6)
        for _ in range(100):
            a, b = complex(*rng.uniform(-3, 3, 2)), complex(*rng.uniform(-3, 3, 2))
            c = complex(rng.uniform(0.5, 4), rng.uniform(-1, 1))
            z = cmath.rect(rng.uniform(0, 0.9), rng.uniform(-math.pi, math.pi))
            np.testing.assert_allclose(specfun.gauss_2f1(a, b, c, z), complex(mp.hyp2f1(a, b, c, z)), rtol=1e-11)

    def test_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            a, b, c = (complex(*rng.uniform(-2, 2, 2)) for _ in range(3))
            z = complex(*rng.uniform(-0.6, 0.6, 2))
            assert specfun.gauss_2f1(a, b, c, z) == specfun.gauss_2f1(b, a, c, z)

    def test_gauss_summation(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            a, b = complex(*rng.uniform(-2, 2, 2)), complex(*rng.uniform(-2, 2, 2))
            c = a + b + complex(rng.uniform(0.02, 3), rng.uniform(-1, 1))
            lg = specfun.log_gamma
            ref = cmath.exp(lg(c) + lg(c - a - b) - lg(c - a) - lg(c - b))
            np.testing.assert_allclose(specfun.gauss_2f1(a, b, c, 1), ref, rtol=1e-10)

    def test_unit_circle_off_one(self):
        z = cmath.exp(2j)
        np.testing.assert_allclose(
            specfun.gauss_2f1(0.3, -0.4j, 0.5, z), complex(mp.hyp2f1(0.3, -0.4j, 0.5, z)), rtol=1e-10
        )

    def test_derivative(self):
        a, b, c, z, h = 0.4, -1.2j, 1.7, 0.3 - 0.2j, 1e-6
        fd = (specfun.gauss_2f1(a, b, c, z + h) - specfun.gauss_2f1(a, b, c, z - h)) / (2 * h)
        np.testing.assert_allclose(fd, specfun.gauss_2f1_deriv(a, b, c, z, 1), rtol=1e-6)


class TestBarnes:
    @pytest.mark.parametrize("n, value", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 12), (6, 288)])
    def test_values(self, n, value):
        assert specfun.barnes_g_int(n) == pytest.approx(math.log(value), abs=1e-14)

    def test_against_mpmath(self):
        for n in range(1, 30):
            np.testing.assert_allclose(specfun.barnes_g_int(n), float(mp.log(mp.barnesg(n))), atol=1e-12, rtol=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.barnes_g_int(0)


class TestConvolution:
    def test_finite_cases(self):
        lhs, rhs = specfun.binom_convolution_check(2, 1, 0, 20)
        assert lhs == pytest.approx(3) and rhs == pytest.approx(3)
        lhs, rhs = specfun.binom_convolution_check(1, 1, 1, 20)
        assert lhs == pytest.approx(1) and rhs == pytest.approx(1)

    def test_infinite_case(self):
        lhs, rhs = specfun.binom_convolution_check(0.7, 0.6, -1, 200)
        np.testing.assert_allclose(lhs, rhs, rtol=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            specfun.binom_convolution_check(-0.7, -0.6, 0, 200)
        with pytest.raises(DomainError):
            specfun.binom_convolution_check(0.7, 0.6, 5, 12)


@settings(max_examples=100, deadline=None)
@given(
    st.complex_numbers(max_magnitude=3, **finite),
    st.complex_numbers(max_magnitude=3, **finite),
    st.integers(-4, 4),
)
def test_convolution_identity(alpha, beta, m):
    while (alpha + beta).real <= -0.9:
        alpha += 2
    lhs, rhs = specfun.binom_convolution_check(alpha, beta, m, 400)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-10, atol=1e-10)
