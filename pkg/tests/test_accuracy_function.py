import math

import numpy as np
import pytest
from scipy import integrate
from scipy.special import ndtr
from scipy.stats import norm

from core.accuracy import (
    QuadratureConfig,
    SpellerGeometry,
    accuracy_curve,
    accuracy_function,
    accuracy_function_derivative,
    accuracy_function_many,
    invert_accuracy,
    required_cycles,
    score_moments,
    symbol_accuracy,
)
from core.errors import DomainError, FactorizationError


def exact_accuracy(n: int, x: float) -> float:
    """Independent adaptive-quadrature reference for H_N(x)"""
    lower, upper = min(-15.0, x - 15.0), max(15.0, x + 15.0)
    value, _ = integrate.quad(
        lambda z: norm.pdf(z - x) * norm.cdf(z) ** (n - 1),
        lower,
        upper,
        points=[x, 0.0],
        epsabs=1e-14,
        epsrel=1e-13,
        limit=500,
    )
    return value


class TestAccuracyFunction:
    @pytest.fixture
    def setup(self):
        """Default quadrature and a 6x6 speller"""
        self.quad = QuadratureConfig()
        self.geometry = SpellerGeometry()

    def test_chance_level_at_zero(self, setup):
        """H_N(0) is the chance of picking one out of N"""
        for n in range(2, 37):
            assert accuracy_function(n, 0.0, self.quad) == pytest.approx(1.0 / n, abs=1e-6)

    def test_two_alternatives_closed_form(self, setup):
        """H_2(x) = Phi(x / sqrt 2)"""
        for x in np.arange(-3.0, 3.01, 0.5):
            assert accuracy_function(2, float(x), self.quad) == pytest.approx(ndtr(x / math.sqrt(2)), abs=1e-6)
        assert accuracy_function(2, 1.0) == pytest.approx(0.7602499, abs=1e-7)

    def test_six_alternatives_against_reference(self, setup):
        """H_6 agrees with an adaptive-quadrature reference to 1e-8"""
        for x in (-2.0, 0.0, 1.5, 3.0, 6.0):
            assert accuracy_function(6, x, self.quad) == pytest.approx(exact_accuracy(6, x), abs=1e-8)

    def test_reference_accuracy_for_large_n(self, setup):
        """Absolute error stays below 1e-8 for N up to 100 and |x| up to 10"""
        for n, x in ((36, -4.0), (100, 2.5), (100, 10.0), (12, -10.0)):
            assert accuracy_function(n, x, self.quad) == pytest.approx(exact_accuracy(n, x), abs=1e-8)

    def test_saturation(self, setup):
        """H_6(8) is essentially 1"""
        assert accuracy_function(6, 8.0) >= 0.9999
        assert accuracy_function(6, 8.0) <= 1.0

    def test_many_matches_scalar(self, setup):
        """The vectorized form returns the same values as scalar calls"""
        xs = np.linspace(-3, 6, 19)
        many = accuracy_function_many(6, xs, self.quad)
        assert many == pytest.approx([accuracy_function(6, float(x), self.quad) for x in xs], abs=1e-15)

    def test_monotone_in_x(self, setup):
        """Strictly increasing in x for random N and ordered pairs"""
        rng = np.random.default_rng(7)
        for _ in range(1000):
            n = int(rng.integers(2, 37))
            x1 = float(rng.uniform(-2.0, 3.0))
            x2 = x1 + float(rng.uniform(0.01, 1.0))
            assert accuracy_function(n, x2, self.quad) > accuracy_function(n, x1, self.quad)

    def test_decreasing_in_alternatives(self, setup):
        """More alternatives make selection harder at a fixed x"""
        for x in (-1.0, 0.5, 2.0):
            values = [accuracy_function(n, x) for n in range(2, 37)]
            assert all(a > b for a, b in zip(values, values[1:]))

    def test_bounds(self, setup):
        """chance <= H_N(x) <= 1 for x >= 0, below chance for x < 0"""
        for n in (2, 6, 12):
            assert 1.0 / n <= accuracy_function(n, 0.7) <= 1.0
            assert accuracy_function(n, -0.7) < 1.0 / n

    def test_quadrature_stability(self, setup):
        """Doubling the panel count moves results by less than 1e-9"""
        fine = QuadratureConfig(panel_count=128)
        for n, x in ((6, 1.5), (36, 0.3), (2, -2.0)):
            assert abs(accuracy_function(n, x, fine) - accuracy_function(n, x, self.quad)) < 1e-9

    def test_domain_errors(self, setup):
        """Invalid N or non-finite x raise DomainError"""
        with pytest.raises(DomainError):
            accuracy_function(1, 0.0)
        with pytest.raises(DomainError):
            accuracy_function(2.5, 0.0)
        with pytest.raises(DomainError):
            accuracy_function(6, float("nan"))
        with pytest.raises(DomainError):
            accuracy_function(6, float("inf"))

    def test_quadrature_config_bounds(self, setup):
        """panel_count below 16 or half_width below 8 are rejected"""
        with pytest.raises(ValueError):
            QuadratureConfig(panel_count=8)
        with pytest.raises(ValueError):
            QuadratureConfig(half_width=4.0)


class TestAccuracyDerivative:
    @pytest.fixture
    def setup(self):
        """Central-difference step"""
        self.h = 1e-4

    def central_difference(self, n, x):
        return (accuracy_function(n, x + self.h) - accuracy_function(n, x - self.h)) / (2 * self.h)

    def test_two_alternatives_at_zero(self, setup):
        """d/dx Phi(x / sqrt 2) at 0 is phi(0) / sqrt 2"""
        assert accuracy_function_derivative(2, 0.0) == pytest.approx(norm.pdf(0.0) / math.sqrt(2), abs=1e-9)
        assert accuracy_function_derivative(2, 0.0) == pytest.approx(0.2820948, abs=1e-7)

    def test_matches_finite_differences(self, setup):
        """Derivative agrees with a central difference within 1e-5"""
        rng = np.random.default_rng(11)
        assert accuracy_function_derivative(6, 0.0) == pytest.approx(self.central_difference(6, 0.0), abs=1e-6)
        for _ in range(50):
            n = int(rng.integers(2, 37))
            x = float(rng.uniform(-3.0, 5.0))
            assert accuracy_function_derivative(n, x) == pytest.approx(self.central_difference(n, x), abs=1e-5)

    def test_positive(self, setup):
        """The derivative is strictly positive, and tiny deep in the left tail"""
        for n in (2, 6, 36):
            for x in (-5.0, 0.0, 2.0, 6.0):
                assert accuracy_function_derivative(n, x) > 0
        far_left = accuracy_function_derivative(6, -20.0)
        assert 0 < far_left < 1e-12

    def test_rejects_arrays(self, setup):
        """Array input is an error rather than a silent first-element evaluation"""
        with pytest.raises(DomainError):
            accuracy_function_derivative(6, [0.5, 1.0])
        with pytest.raises(DomainError):
            accuracy_function_derivative(6, np.array([0.5]))
        assert accuracy_function_derivative(6, np.float64(0.5)) == pytest.approx(accuracy_function_derivative(6, 0.5))


class TestSymbolAccuracy:
    @pytest.fixture
    def setup(self):
        """6x6 and 4x9 spellers"""
        self.geometry = SpellerGeometry()
        self.rect = SpellerGeometry(n_rows=4, n_cols=9)

    def test_chance_at_zero_snr(self, setup):
        """gamma = 0 gives 1/36 for every n"""
        for n in (1, 5, 15):
            assert symbol_accuracy(self.geometry, n, 0.0) == pytest.approx(1 / 36, abs=1e-7)

    def test_cycles_and_snr_trade_off(self, setup):
        """Four cycles at gamma equal one cycle at 2 gamma"""
        assert symbol_accuracy(self.geometry, 4, 0.6) == pytest.approx(symbol_accuracy(self.geometry, 1, 1.2), abs=1e-14)

    def test_product_of_axes(self, setup):
        """Rectangular matrices multiply H for rows and H for columns"""
        x = math.sqrt(3) * 0.9
        expected = accuracy_function(4, x) * accuracy_function(9, x)
        assert symbol_accuracy(self.rect, 3, 0.9) == pytest.approx(expected, abs=1e-15)

    def test_fifteen_cycles_unit_snr(self, setup):
        """(6x6, n=15, gamma=1) is the square of the reference H_6(sqrt 15)"""
        expected = exact_accuracy(6, math.sqrt(15)) ** 2
        assert symbol_accuracy(self.geometry, 15, 1.0) == pytest.approx(expected, abs=2e-8)

    def test_curve_matches_pointwise(self, setup):
        """accuracy_curve agrees with symbol_accuracy at every n"""
        curve = accuracy_curve(self.rect, 0.5, range(1, 16))
        assert curve == pytest.approx([symbol_accuracy(self.rect, n, 0.5) for n in range(1, 16)], abs=1e-15)

    def test_errors(self, setup):
        """Negative gamma and zero cycles are domain errors"""
        with pytest.raises(DomainError):
            symbol_accuracy(self.geometry, 1, -0.1)
        with pytest.raises(DomainError):
            symbol_accuracy(self.geometry, 0, 1.0)
        with pytest.raises(ValueError):
            SpellerGeometry(n_rows=1, n_cols=6)


class TestInvertAccuracy:
    @pytest.fixture
    def setup(self):
        """6x6 speller"""
        self.geometry = SpellerGeometry()

    def test_round_trip(self, setup):
        """Inverting the forward map recovers gamma"""
        target = symbol_accuracy(self.geometry, 1, 0.8)
        assert invert_accuracy(self.geometry, 1, target) == pytest.approx(0.8, abs=1e-5)

    def test_round_trip_fifteen_cycles(self, setup):
        """Inverting the (n=15, gamma=1) accuracy gives back 1"""
        target = symbol_accuracy(self.geometry, 15, 1.0)
        assert invert_accuracy(self.geometry, 15, target) == pytest.approx(1.0, abs=1e-4)

    def test_inverse_hits_target(self, setup):
        """The returned gamma reproduces the target accuracy to 1e-6"""
        gamma = invert_accuracy(self.geometry, 5, 0.9)
        assert symbol_accuracy(self.geometry, 5, gamma) == pytest.approx(0.9, abs=1e-6)

    def test_out_of_range_targets(self, setup):
        """Chance and certainty are not invertible"""
        for target in (1 / 36, 0.01, 1.0):
            with pytest.raises(DomainError):
                invert_accuracy(self.geometry, 1, target)

    def test_required_cycles(self, setup):
        """Smallest n reaching the target, None when it is never reached"""
        n = required_cycles(self.geometry, 0.8, 0.9)
        assert n is not None
        assert symbol_accuracy(self.geometry, n, 0.8) >= 0.9
        if n > 1:
            assert symbol_accuracy(self.geometry, n - 1, 0.8) < 0.9
        assert required_cycles(self.geometry, 0.0, 0.5) is None


class TestScoreMoments:
    def test_identity_unit_difference(self):
        """mu0 = 0, mu1 = e1, Sigma = I"""
        moments = score_moments([0, 0], [1, 0], np.eye(2), 1)
        assert (moments.m0, moments.m1, moments.sigma_n) == pytest.approx((0.0, 1.0, 1.0))
        assert score_moments([0, 0], [1, 0], np.eye(2), 4).sigma_n == pytest.approx(0.5)

    def test_diagonal_covariance(self):
        """mu0 = e1, mu1 = 2 e1, Sigma = 4 I, checked against an explicit solve"""
        mu0, mu1, sigma = np.array([1.0, 0.0]), np.array([2.0, 0.0]), 4 * np.eye(2)
        moments = score_moments(mu0, mu1, sigma, 1)
        w = np.linalg.solve(sigma, mu1 - mu0)
        assert moments.m0 == pytest.approx(w @ mu0)
        assert moments.m1 == pytest.approx(w @ mu1)
        assert (moments.m0, moments.m1) == pytest.approx((0.25, 0.5))
        assert moments.sigma_n == pytest.approx(0.5)

    def test_separation_is_scaled_snr(self):
        """(m1 - m0) / sigma_n = sqrt(n) * gamma"""
        rng = np.random.default_rng(3)
        a = rng.standard_normal((5, 5))
        sigma = a @ a.T + 5 * np.eye(5)
        mu0, mu1 = rng.standard_normal(5), rng.standard_normal(5)
        d = mu1 - mu0
        gamma = math.sqrt(d @ np.linalg.solve(sigma, d))
        moments = score_moments(mu0, mu1, sigma, 9)
        assert moments.separation == pytest.approx(3 * gamma, rel=1e-10)

    def test_errors(self):
        """Non-PD covariance and equal means are rejected"""
        with pytest.raises(FactorizationError):
            score_moments([0, 0], [1, 0], np.array([[1.0, 2.0], [2.0, 1.0]]), 1)
        with pytest.raises(DomainError):
            score_moments([1, 1], [1, 1], np.eye(2), 1)
