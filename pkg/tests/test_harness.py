import math

import numpy as np
import pytest
from scipy import stats

from core.accuracy import SpellerGeometry, accuracy_curve
from core.classifier import ShrinkagePolicy
from core.errors import DataError, DomainError, InsufficientDataError, LayoutError
from core.validation import (
    AccuracyCurve,
    PROXY_COLUMNS,
    accuracy_vs_repetitions,
    curve_table,
    fit_gamma,
    linear_fit,
    proxy_accuracy_comparison,
    rank_electrode_subsets,
    ranking_table,
    regression_table,
    snr_fit_relation,
)


class TestLinearFit:
    def test_exact_line(self):
        """ys = 2 xs + 1 exactly"""
        xs = np.arange(10.0)
        fit = linear_fit(xs, 2 * xs + 1)
        assert fit.slope == pytest.approx(2.0)
        assert fit.intercept == pytest.approx(1.0)
        assert fit.pearson_r == pytest.approx(1.0)
        assert 0 < fit.p_value < 1e-12

    def test_three_collinear_points(self):
        """Three points on a falling line give r = -1"""
        fit = linear_fit([0, 1, 2], [5, 3, 1])
        assert fit.pearson_r == pytest.approx(-1.0)
        assert fit.n == 3

    def test_p_value_matches_reference(self):
        """p-value agrees with scipy's t-test on independent noise"""
        rng = np.random.default_rng(0)
        xs, ys = rng.standard_normal(100), rng.standard_normal(100)
        fit = linear_fit(xs, ys)
        reference = stats.linregress(xs, ys)
        assert fit.slope == pytest.approx(reference.slope, rel=1e-10)
        assert fit.pearson_r == pytest.approx(reference.rvalue, rel=1e-10)
        assert fit.p_value == pytest.approx(reference.pvalue, rel=1e-8)
        assert 0 < fit.p_value <= 1

    def test_constant_ys(self):
        """Flat ys have zero slope, r = 0 and p = 1"""
        fit = linear_fit([1, 2, 3, 4], [2, 2, 2, 2])
        assert (fit.slope, fit.pearson_r, fit.p_value) == (0.0, 0.0, 1.0)

    def test_errors(self):
        """Equal xs, too few points and mismatched lengths"""
        with pytest.raises(DataError):
            linear_fit([1, 1, 1], [1, 2, 3])
        with pytest.raises(InsufficientDataError):
            linear_fit([1, 2], [1, 2])
        with pytest.raises(DataError):
            linear_fit([1, 2, 3], [1, 2])


class TestFitGamma:
    @pytest.fixture
    def setup(self):
        """6x6 speller and the n = 1..15 cycle counts"""
        self.geometry = SpellerGeometry()
        self.ns = list(range(1, 16))

    def test_refinement_tolerance(self, setup):
        """The refinement step honours the requested tolerance"""
        curve = AccuracyCurve.from_values(accuracy_curve(self.geometry, 0.4237, self.ns))
        tight = fit_gamma(curve, self.geometry, tolerance=1e-10)
        assert tight.gamma_fit == pytest.approx(0.4237, abs=1e-6)
        coarse = fit_gamma(curve, self.geometry, tolerance=1e-3)
        assert coarse.gamma_fit == pytest.approx(0.4237, abs=2e-3)
        assert tight.sse <= coarse.sse

    def test_grid_only(self, setup):
        """A one-point grid skips refinement and returns gamma = 0"""
        curve = AccuracyCurve.from_values(accuracy_curve(self.geometry, 0.4, self.ns))
        assert fit_gamma(curve, self.geometry, gamma_max=0.0, grid_step=0.01).gamma_fit == 0.0

    def test_recovers_analytic_curve(self, setup):
        """A curve generated at gamma = 0.8 is fitted back to 0.8"""
        curve = AccuracyCurve.from_values(accuracy_curve(self.geometry, 0.8, self.ns))
        fit = fit_gamma(curve, self.geometry)
        assert fit.gamma_fit == pytest.approx(0.8, abs=1e-4)
        assert fit.sse <= 1e-10

    def test_off_grid_value(self, setup):
        """Refinement finds values between grid points"""
        curve = AccuracyCurve.from_values(accuracy_curve(self.geometry, 0.4237, self.ns))
        assert fit_gamma(curve, self.geometry).gamma_fit == pytest.approx(0.4237, abs=1e-4)

    def test_chance_curve(self, setup):
        """A flat chance curve fits gamma = 0"""
        curve = AccuracyCurve.from_values([1 / 36] * 15)
        assert fit_gamma(curve, self.geometry).gamma_fit == pytest.approx(0.0, abs=1e-3)

    def test_monotone_response(self, setup):
        """Raising every accuracy never lowers the fitted gamma"""
        base = accuracy_curve(self.geometry, 0.5, self.ns) + np.linspace(-0.03, 0.03, 15)
        raised = np.minimum(base + 0.05, 1.0)
        low = fit_gamma(AccuracyCurve.from_values(np.clip(base, 0, 1)), self.geometry).gamma_fit
        high = fit_gamma(AccuracyCurve.from_values(raised), self.geometry).gamma_fit
        assert high >= low

    def test_empty_curve(self, setup):
        """An empty curve cannot be fitted"""
        with pytest.raises(DataError):
            fit_gamma(AccuracyCurve.from_values([]), self.geometry)


class TestAccuracyVsRepetitions:
    def test_high_snr_is_perfect(self, make_session):
        """A very strong signal is detected at every n"""
        _, session = make_session(gamma=40.0, n_symbols=14, cycles=4, dim=4)
        curve = accuracy_vs_repetitions(session, n_train=10, n_reps=5, rng=1, show_progress=False)
        assert curve.accuracies == pytest.approx([1.0] * 4)
        assert list(curve.ns) == [1, 2, 3, 4]

    def test_zero_snr_is_chance(self, make_session):
        """Without signal the accuracy stays near 1/36"""
        _, session = make_session(gamma=0.0, n_symbols=40, cycles=5, dim=4)
        curve = accuracy_vs_repetitions(session, n_train=10, n_reps=20, rng=2, show_progress=False)
        assert np.all(np.abs(curve.accuracies - 1 / 36) < 0.05)
        assert np.all(curve.ses >= 0)

    def test_deterministic(self, make_session):
        """The same seed gives the same curve and splits"""
        _, session = make_session(gamma=0.7, n_symbols=15, cycles=3)
        a = accuracy_vs_repetitions(session, n_train=10, n_reps=4, rng=7, show_progress=False)
        b = accuracy_vs_repetitions(session, n_train=10, n_reps=4, rng=7, show_progress=False)
        assert a == b

    def test_split_hygiene(self, make_session):
        """Every repetition trains on n_train distinct symbols of the session"""
        _, session = make_session(gamma=0.7, n_symbols=15, cycles=3)
        curve = accuracy_vs_repetitions(session, n_train=10, n_reps=6, rng=3, show_progress=False)
        assert len(curve.train_splits) == 6
        for split in curve.train_splits:
            assert len(set(split)) == 10
            assert all(0 <= s < 15 for s in split)
        assert len({tuple(split) for split in curve.train_splits}) > 1

    def test_too_few_symbols(self, make_session):
        """A session needs more symbols than n_train"""
        _, session = make_session(n_symbols=10, cycles=2)
        with pytest.raises(InsufficientDataError):
            accuracy_vs_repetitions(session, n_train=10, n_reps=2, show_progress=False)
        with pytest.raises(DomainError):
            accuracy_vs_repetitions(session, n_train=5, n_reps=0, show_progress=False)

    def test_fit_tracks_simulation(self, make_session):
        """The fitted curve follows the validated curve of a gamma = 0.7 session"""
        _, session = make_session(gamma=0.7, n_symbols=60, cycles=6, dim=4, seed=11)
        curve = accuracy_vs_repetitions(session, n_train=10, n_reps=10, rng=4, show_progress=False)
        fit = fit_gamma(curve, session.config.geometry)
        assert 0.45 <= fit.gamma_fit <= 0.95
        table = curve_table(curve, fit, session.config.geometry)
        assert list(table.columns) == ["n", "accuracy", "se", "predicted"]
        assert np.all(np.abs(table["predicted"] - table["accuracy"]) <= 0.15)


class TestElectrodeRanking:
    @pytest.fixture
    def setup(self, make_session):
        """Four electrodes of two samples; only electrode 1 carries signal"""
        self.model, self.session = make_session(
            gamma=1.5, n_symbols=16, cycles=4, dim=8, seed=5, support=[2, 3], electrode_count=4
        )

    def test_signal_locality(self, setup):
        """Subsets holding electrode 1 beat the subset without it"""
        ranking = rank_electrode_subsets(
            self.session, 4, 3, [1, 4], rng=0, n_train=10, n_reps=5, show_progress=False
        )
        assert [e.electrode_subset for e in ranking.entries] == [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        without = ranking.entries[2]
        for entry in ranking.entries:
            if 1 in entry.electrode_subset:
                assert entry.empirical_snr > without.empirical_snr
        assert 1 in ranking.by_snr()[0].electrode_subset
        assert 1 in ranking.by_accuracy(4)[0].electrode_subset
        assert ranking.snr_seconds < ranking.validation_seconds

    def test_scaled_snr_columns(self, setup):
        """sqrt(n) * gamma_hat is recorded for every requested n"""
        ranking = rank_electrode_subsets(
            self.session, 4, 3, [1, 4], rng=0, n_train=10, n_reps=2, show_progress=False
        )
        entry = ranking.entries[0]
        assert entry.scaled_snr_by_n[4] == pytest.approx(2 * entry.empirical_snr)
        table = ranking_table(ranking)
        assert list(table.columns) == [
            "subset", "gamma_hat", "sqrt_n_gamma_hat_1", "sqrt_n_gamma_hat_4", "accuracy_1", "accuracy_4",
        ]
        assert list(table["subset"]) == ["0-1-2", "0-1-3", "0-2-3", "1-2-3"]

    def test_seven_of_eight(self, make_session):
        """Choosing 7 of 8 electrodes evaluates 8 subsets"""
        _, session = make_session(gamma=1.0, n_symbols=12, cycles=2, dim=8, electrode_count=8)
        ranking = rank_electrode_subsets(session, 8, 7, [1, 2], rng=0, n_train=10, n_reps=2, show_progress=False)
        assert len(ranking.entries) == 8
        assert all(len(e.electrode_subset) == 7 for e in ranking.entries)
        assert len({e.electrode_subset for e in ranking.entries}) == 8

    def test_errors(self, setup):
        """Non-divisible layout, bad keep and bad n"""
        with pytest.raises(LayoutError):
            rank_electrode_subsets(self.session, 3, 2, [1], show_progress=False)
        with pytest.raises(DomainError):
            rank_electrode_subsets(self.session, 4, 4, [1], show_progress=False)
        with pytest.raises(DomainError):
            rank_electrode_subsets(self.session, 4, 3, [0], show_progress=False)
        with pytest.raises(DomainError):
            rank_electrode_subsets(self.session, 4, 3, [5], show_progress=False)


class TestProxyComparison:
    def test_table_and_regressions(self, make_session):
        """One row per session and one regression per proxy"""
        sessions = [
            make_session(gamma=g, n_symbols=14, cycles=4, dim=6, seed=i, model_seed=100 + i)[1]
            for i, g in enumerate((0.3, 0.8, 1.3, 1.8))
        ]
        comparison = proxy_accuracy_comparison(sessions, fixed_n=3, rng=0, n_train=10, n_reps=3)
        assert list(comparison.table.columns) == ["session", "gamma_hat", "ptp_v1", "ptp_v2", "auc", "accuracy"]
        assert len(comparison.table) == 4
        assert set(comparison.regressions) == set(PROXY_COLUMNS)
        assert comparison.best_proxy() in PROXY_COLUMNS
        assert list(regression_table(comparison.regressions)["proxy"]) == PROXY_COLUMNS

    def test_snr_beats_every_proxy(self, make_session):
        """Across 12 sessions sweeping gamma, gamma_hat correlates best with accuracy at n = 3"""
        sessions = [
            make_session(gamma=g, n_symbols=40, cycles=5, dim=8, seed=i, model_seed=200 + i)[1]
            for i, g in enumerate(np.linspace(0.3, 1.5, 12))
        ]
        comparison = proxy_accuracy_comparison(sessions, fixed_n=3, rng=0, n_train=10, n_reps=10)
        r = {name: fit.pearson_r for name, fit in comparison.regressions.items()}
        for proxy in ("ptp_v1", "ptp_v2", "auc"):
            assert r["gamma_hat"] > r[proxy], r
        assert comparison.best_proxy() == "gamma_hat"

    def test_duplicate_sessions_are_degenerate(self, make_session):
        """Identical sessions give identical proxies and a degenerate regression"""
        _, session = make_session(gamma=1.0, n_symbols=12, cycles=3)
        with pytest.raises(DataError):
            proxy_accuracy_comparison([session] * 3, fixed_n=2, rng=0, n_train=10, n_reps=2)

    def test_needs_three_sessions(self, make_session):
        """Two sessions are not enough"""
        _, session = make_session(n_symbols=12, cycles=3)
        with pytest.raises(InsufficientDataError):
            proxy_accuracy_comparison([session, session], rng=0)

    def test_snr_fit_relation(self, make_session):
        """gamma_hat and gamma_fit are tabulated per session and regressed"""
        sessions = [
            make_session(gamma=g, n_symbols=14, cycles=4, dim=4, seed=i)[1]
            for i, g in enumerate((0.2, 0.9, 1.6))
        ]
        relation = snr_fit_relation(sessions, rng=0, n_train=10, n_reps=3)
        assert list(relation.table.columns) == ["session", "gamma_hat", "gamma_fit", "sse"]
        assert len(relation.table) == 3
        assert -1.0 <= relation.regression.pearson_r <= 1.0
        assert 0 < relation.regression.p_value <= 1


class TestCurveTable:
    def test_without_fit(self):
        """The predicted column is empty when no fit is supplied"""
        curve = AccuracyCurve.from_values([0.1, 0.2], ses=[0.01, 0.02])
        table = curve_table(curve)
        assert list(table["n"]) == [1, 2]
        assert table["predicted"].isna().all()

    def test_with_fit(self):
        """Predicted values follow the fitted gamma"""
        geometry = SpellerGeometry()
        curve = AccuracyCurve.from_values(accuracy_curve(geometry, 0.6, [1, 2, 3]))
        fit = fit_gamma(curve, geometry)
        table = curve_table(curve, fit, geometry)
        assert np.allclose(table["predicted"], table["accuracy"], atol=1e-6)
        assert math.isclose(fit.gamma_fit, 0.6, abs_tol=1e-4)
