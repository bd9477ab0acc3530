"""Tests for Zig-Zag rates, the thinning simulator, exit times and the renewal formulas."""

from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from src.heavytail.models import DataConfig, Dataset
from src.heavytail.sampling import right_tail, sample_dataset
from src.micromode.detection import detect, locate
from src.posterior.models import Model
from src.utils.errors import ConfigurationError, ContractError, DomainError, UnsupportedDimensionError
from src.utils.rng import make_rng
from src.zigzag.exit import excursion_stats, exit_levels, exit_time
from src.zigzag.models import LevelCrossing, RateKind, StopReason, ThinningBound, ZigZagState
from src.zigzag.rates import excess_rate, first_switch_cdf, switching_rate, thinning_bound, window_bound
from src.zigzag.renewal import (
    c_nu,
    gamma_bar,
    gamma_sup,
    p_tau_exact,
    p_tau_sandwich,
    phat_n,
    pn_exact,
    renewal_bootstrap,
    renewal_exit_estimate,
    return_time_bound,
)
from src.zigzag.simulator import ks_distance, occupation_cdf, simulate, target_cdf


class TestRates:
    def test_two_point_rates_at_origin(self, cauchy, two_point_ds):
        assert switching_rate(cauchy, two_point_ds, RateKind.CANONICAL, 0.0, 1) == 0.0
        assert switching_rate(cauchy, two_point_ds, RateKind.SUBSAMPLING, 0.0, 1) == pytest.approx(0.8)

    @pytest.mark.parametrize("x", [-3.0, -0.5, 0.7, 2.5])
    def test_excess_rate_does_not_depend_on_velocity(self, cauchy, two_point_ds, x):
        for v in (-1, 1):
            gap = switching_rate(cauchy, two_point_ds, RateKind.SUBSAMPLING, x, v) - switching_rate(
                cauchy, two_point_ds, RateKind.CANONICAL, x, v
            )
            assert gap == pytest.approx(excess_rate(cauchy, two_point_ds, x), abs=1e-14)

    def test_subsampling_dominates_canonical(self, cauchy):
        ds = Dataset.from_points([-3.0, 0.2, 1.0, 8.0])
        for x in np.linspace(-10, 10, 41):
            for v in (-1, 1):
                assert switching_rate(cauchy, ds, RateKind.SUBSAMPLING, x, v) >= switching_rate(
                    cauchy, ds, RateKind.CANONICAL, x, v
                )

    def test_window_bound_dominates_rates(self):
        nu = 0.7
        model = Model(nu=nu)
        y = np.array([-1.0, 0.0, 2.5, 6.0])
        ds = Dataset.from_points(y)
        a, b = -0.5, 3.0
        for v in (-1, 1):
            bound = window_bound(nu, y, a, b, v)
            for x in np.linspace(a, b, 200):
                assert switching_rate(model, ds, RateKind.SUBSAMPLING, x, v) <= bound + 1e-12

    def test_global_bound(self, cauchy, two_point_ds):
        assert thinning_bound(cauchy, two_point_ds) == pytest.approx(2.0)

    def test_two_dimensional_data_rejected(self, cauchy):
        ds = Dataset.from_points([[0.0, 1.0], [2.0, 2.0]])
        with pytest.raises(UnsupportedDimensionError):
            switching_rate(Model(nu=1.0, d=2), ds, RateKind.CANONICAL, 0.0, 1)


class TestSimulator:
    @pytest.mark.parametrize("kind", list(RateKind))
    def test_no_switch_while_moving_toward_the_data(self, cauchy, kind):
        ds = Dataset.from_points([0.0])
        log = simulate(cauchy, ds, kind, ZigZagState(x=-5.0, v=1), (), 4.0, make_rng(0))
        assert log.n_switches == 0
        assert log.stop_reason == StopReason.HORIZON
        assert log.final_state.x == -1.0

    @pytest.mark.parametrize("thinning", list(ThinningBound))
    def test_skeleton_replays_final_position(self, cauchy, two_point_ds, thinning):
        log = simulate(
            cauchy, two_point_ds, RateKind.CANONICAL, ZigZagState(x=0.0, v=1), (), 200.0, make_rng(4), thinning=thinning
        )
        t, x, v = log.knots()
        assert np.all(np.diff(t) >= 0)
        assert np.allclose(x[1:], x[:-1] + v[:-1] * np.diff(t))
        assert log.reconstruct_final_position() == pytest.approx(log.final_state.x)
        assert log.final_state.t == pytest.approx(200.0)

    def test_same_stream_same_trajectory(self, cauchy, two_point_ds):
        runs = [
            simulate(cauchy, two_point_ds, RateKind.SUBSAMPLING, ZigZagState(x=0.0, v=1), (), 50.0, make_rng(9, 3))
            for _ in range(2)
        ]
        assert np.array_equal(runs[0].times, runs[1].times)
        assert np.array_equal(runs[0].positions, runs[1].positions)

    def test_level_crossing_stops_the_run(self, cauchy):
        stop = [LevelCrossing(-2.0, 1, StopReason.RETURNED_TO_START)]
        log = simulate(cauchy, Dataset.from_points([0.0]), RateKind.CANONICAL, ZigZagState(-5.0, 1), stop, 100.0)
        assert log.stop_reason == StopReason.RETURNED_TO_START
        assert log.final_state.x == pytest.approx(-2.0)
        assert log.final_state.t == pytest.approx(3.0)

    def test_max_events(self, cauchy, two_point_ds):
        log = simulate(
            cauchy, two_point_ds, RateKind.CANONICAL, ZigZagState(0.0, 1), (), 1e6, make_rng(1), max_events=3
        )
        assert log.n_switches == 3
        assert log.stop_reason == StopReason.SWITCH_LIMIT

    def test_invalid_horizon(self, cauchy, two_point_ds):
        with pytest.raises(ConfigurationError):
            simulate(cauchy, two_point_ds, RateKind.CANONICAL, ZigZagState(0.0, 1), (), 0.0)

    def test_invalid_velocity(self):
        with pytest.raises(ValueError):
            ZigZagState(x=0.0, v=0)

    @pytest.mark.slow
    @pytest.mark.parametrize("thinning", list(ThinningBound))
    def test_first_switch_law(self, thinning):
        nu = 2.0
        model = Model(nu=nu)
        ds = Dataset.from_points([0.0])
        times = []
        start = ZigZagState(0.0, 1)
        for i in range(10_000):
            rng = make_rng(7, i)
            log = simulate(model, ds, RateKind.CANONICAL, start, (), 1e9, rng, thinning=thinning, max_events=1)
            times.append(log.times[0])
        res = stats.kstest(times, lambda t: first_switch_cdf(t, nu))
        assert res.statistic < 0.02

    def test_occupation_cdf_of_straight_line(self, cauchy):
        log = simulate(cauchy, Dataset.from_points([0.0]), RateKind.CANONICAL, ZigZagState(-5.0, 1), (), 4.0)
        cdf = occupation_cdf(log, [-5.0, -4.0, -3.0, -1.0, 3.0])
        assert np.allclose(cdf, [0.0, 0.25, 0.5, 1.0, 1.0])

    def test_target_cdf_single_point_is_student_t(self):
        model = Model(nu=3.0)
        grid = np.array([-2.0, 0.0, 1.0])
        assert np.allclose(target_cdf(model, Dataset.from_points([1.0]), grid), stats.t(df=3.0, loc=1.0).cdf(grid))

    def test_target_cdf_two_points_is_symmetric(self, cauchy, two_point_ds):
        cdf = target_cdf(cauchy, two_point_ds, np.array([-1.0, 0.0, 1.0]))
        assert cdf[1] == pytest.approx(0.5, abs=1e-4)
        assert cdf[0] + cdf[2] == pytest.approx(1.0, abs=1e-4)


@pytest.mark.slow
def test_cauchy_occupation_matches_posterior():
    model = Model(nu=1.0)
    ds = Dataset.from_points([0.0])
    grid = np.linspace(-50.0, 50.0, 2001)
    start = ZigZagState(0.0, 1)
    log = simulate(model, ds, RateKind.CANONICAL, start, (), 1e5, make_rng(2024), thinning=ThinningBound.GLOBAL)
    assert ks_distance(log, model, ds, grid) < 0.02


class TestExit:
    def test_exit_levels(self, cauchy, two_point_ds):
        mm = detect(cauchy, two_point_ds, 0)
        _, x_minus, x_plus = exit_levels(cauchy, two_point_ds, mm)
        assert x_plus == pytest.approx(np.sqrt(3.0))
        assert x_minus == pytest.approx(0.0, abs=1e-6)

    def test_negative_anchor_is_mirrored(self, cauchy, two_point_ds):
        mm = detect(cauchy, two_point_ds, 1)
        ds_r, x_minus, x_plus = exit_levels(cauchy, two_point_ds, mm)
        assert x_plus == pytest.approx(np.sqrt(3.0))
        assert np.array_equal(ds_r.points, two_point_ds.mirrored().points)

    def test_unbounded_width_has_no_exit(self, cauchy):
        ds = Dataset.from_points([3.0])
        with pytest.raises(DomainError):
            exit_levels(cauchy, ds, detect(cauchy, ds, 0))

    def test_exit_time_is_at_least_the_width(self, cauchy, two_point_ds):
        mm = detect(cauchy, two_point_ds, 0)
        for t in range(50):
            res = exit_time(cauchy, two_point_ds, RateKind.SUBSAMPLING, mm, make_rng(3, t), keep_log=True)
            assert not res.censored
            assert res.tau >= mm.width - 1e-9
            assert res.log.stop_reason == StopReason.EXIT_LEFT
        assert exit_time(cauchy, two_point_ds, RateKind.CANONICAL, mm, make_rng(3, 0)).log is None

    def test_uncertified_micromode(self, cauchy, two_point_ds):
        mm = detect(cauchy, two_point_ds, 0)
        with pytest.raises(ContractError):
            exit_time(cauchy, two_point_ds, RateKind.CANONICAL, replace(mm, certified=False), make_rng(0))

    def test_censoring(self, cauchy, isolated_ds):
        mm = detect(cauchy, isolated_ds, 0)
        res = exit_time(
            cauchy, isolated_ds, RateKind.CANONICAL, mm, make_rng(0), t_max=50.0, thinning=ThinningBound.LOCAL
        )
        assert res.censored
        assert res.tau == pytest.approx(50.0)

    def test_canonical_first_excursion_probability(self, cauchy, two_point_ds):
        mm = detect(cauchy, two_point_ds, 0)
        hits = [
            exit_time(cauchy, two_point_ds, RateKind.CANONICAL, mm, make_rng(11, t)).first_excursion_exit
            for t in range(2000)
        ]
        p = 16.0 / 25.0
        sigma = np.sqrt(p * (1 - p) / 2000)
        assert abs(np.mean(hits) - p) < 4 * sigma

    def test_subsampling_excursions_match_exact_probability(self, cauchy, two_point_ds):
        mm = detect(cauchy, two_point_ds, 0)
        st = excursion_stats(cauchy, two_point_ds, RateKind.SUBSAMPLING, mm, make_rng(5), 2000)
        ds_r, x_minus, x_plus = exit_levels(cauchy, two_point_ds, mm)
        exact = p_tau_exact(cauchy, ds_r, RateKind.SUBSAMPLING, x_minus, x_plus)
        assert st.n_excursions == 2000
        assert abs(st.p_tau_hat - exact) < 4 * np.sqrt(exact * (1 - exact) / 2000)

        p_n = pn_exact(cauchy, ds_r, x_minus, x_plus)
        lower, upper = p_tau_sandwich(p_n, gamma_sup(cauchy, ds_r, x_minus, x_plus), mm.width)
        assert lower <= exact <= upper

    def test_canonical_return_time_bound(self, cauchy, two_point_ds):
        mm = detect(cauchy, two_point_ds, 0)
        st = excursion_stats(cauchy, two_point_ds, RateKind.CANONICAL, mm, make_rng(6), 2000)
        assert st.t_return_samples.size > 0
        assert st.mean_return < return_time_bound(1.0, 0.0)


class TestRenewal:
    def test_pn_for_two_points(self, cauchy, two_point_ds):
        assert pn_exact(cauchy, two_point_ds, 0.0, np.sqrt(3.0)) == pytest.approx(16.0 / 25.0)
        assert pn_exact(cauchy, two_point_ds, 1.0, 1.0) == 1.0
        with pytest.raises(DomainError):
            pn_exact(cauchy, two_point_ds, 2.0, 1.0)

    def test_canonical_p_tau_is_pn(self, cauchy, two_point_ds):
        p = p_tau_exact(cauchy, two_point_ds, RateKind.CANONICAL, 0.0, np.sqrt(3.0))
        assert p == pytest.approx(16.0 / 25.0)
        assert p_tau_exact(cauchy, two_point_ds, RateKind.SUBSAMPLING, 0.0, np.sqrt(3.0)) < p

    def test_phat_matches_exact_for_isolated_anchor(self, cauchy, isolated_ds):
        mm = detect(cauchy, isolated_ds, 0)
        x_plus, x_minus = float(mm.x_plus[0]), mm.x_minus
        exact = pn_exact(cauchy, isolated_ds, x_minus, x_plus)
        approx = phat_n(cauchy, isolated_ds, x_minus, x_plus)
        assert np.log(approx) == pytest.approx(np.log(exact), rel=0.05)
        with pytest.raises(DomainError):
            phat_n(cauchy, isolated_ds, 0.0, x_plus)

    def test_c_nu(self):
        assert c_nu(1.0) == pytest.approx(1.0 + np.pi / 2.0)
        assert c_nu(4.0) == pytest.approx(2.0 + 4.0 / 3.0)

    def test_return_time_bound_without_excess(self):
        assert return_time_bound(1.0, 0.0) == pytest.approx(4.0 + np.pi / 2.0)

    def test_gamma_bar(self):
        assert gamma_bar(1000, 1.0, 0.5, 2.0) == pytest.approx(1.0 / 2.5)
        with pytest.raises(DomainError):
            gamma_bar(1000, 0.5, 0.0, 0.0)

    def test_renewal_estimate(self):
        assert renewal_exit_estimate(1.0, 3.0, 5.0) == 3.0
        assert renewal_exit_estimate(0.5, 2.0, 4.0) == pytest.approx(8.0)
        assert np.isinf(renewal_exit_estimate(0.0, 2.0, 4.0))

    def test_sandwich(self):
        assert p_tau_sandwich(0.5, 1.0, 3.0) == (0.125, 0.5)

    def test_bootstrap_stays_between_extreme_means(self):
        eta = np.array([1.0, 2.0, 3.0, 4.0])
        returns = np.array([1.0, 5.0])
        boot = renewal_bootstrap(0.5, eta, returns, make_rng(3), 200)
        assert boot.shape == (200,)
        assert boot.max() > boot.min()
        assert (boot >= renewal_exit_estimate(0.5, 1.0, 1.0)).all()
        assert (boot <= renewal_exit_estimate(0.5, 4.0, 5.0)).all()
        assert np.mean(boot) == pytest.approx(renewal_exit_estimate(0.5, 2.5, 3.0), rel=0.1)

    def test_bootstrap_is_reproducible(self):
        eta = np.array([0.5, 1.5, 4.0])
        runs = [renewal_bootstrap(0.8, eta, np.array([]), make_rng(9, 1), 25) for _ in range(2)]
        assert np.array_equal(runs[0], runs[1])
        assert (runs[0] >= 0.5 / 0.8).all()

    def test_bootstrap_without_returns_ignores_return_time(self):
        boot = renewal_bootstrap(1.0, np.array([2.0, 2.0]), np.array([]), make_rng(0), 5)
        assert np.array_equal(boot, np.full(5, 2.0))

    @pytest.mark.parametrize("eta, resamples", [(np.array([]), 5), (np.array([1.0]), 0)])
    def test_bootstrap_rejects_empty_input(self, eta, resamples):
        with pytest.raises(DomainError):
            renewal_bootstrap(0.5, eta, np.array([1.0]), make_rng(0), resamples)


@pytest.mark.slow
def test_sandwich_holds_on_heavy_tail_replicates(cauchy):
    checked = 0
    for seed in range(10):
        ds = right_tail(sample_dataset(DataConfig(beta=0.5, d=1, n=1000, seed=seed)))
        res = locate(cauchy, ds, 0)
        if not res.found or not np.isfinite(res.micromode.width):
            continue
        mm = res.micromode
        ds_r, x_minus, x_plus = exit_levels(cauchy, ds, mm)
        p_n = pn_exact(cauchy, ds_r, x_minus, x_plus)
        lower, upper = p_tau_sandwich(p_n, gamma_sup(cauchy, ds_r, x_minus, x_plus), mm.width)
        exact = p_tau_exact(cauchy, ds_r, RateKind.SUBSAMPLING, x_minus, x_plus)
        assert lower <= exact <= upper

        st = excursion_stats(
            cauchy, ds, RateKind.SUBSAMPLING, mm, make_rng(seed, 1), 400, thinning=ThinningBound.LOCAL
        )
        slack = 3.0 * max(st.p_tau_stderr, 1.0 / st.n_excursions)
        assert lower - slack <= st.p_tau_hat <= upper + slack
        checked += 1
    assert checked >= 5
