"""Tests for data generation, order statistics and extreme-value constants."""

import numpy as np
import pytest
from scipy import special

from src.heavytail.evt import (
    evt_constant_A,
    frechet_limit_cdf,
    gk_proxy,
    radial_cdf,
    radial_density,
    radial_scale,
    sphere_area,
    tail_constant_K,
)
from src.heavytail.models import DataConfig, Dataset
from src.heavytail.sampling import isolation_gap, order_radius, order_statistic, right_tail, sample_dataset
from src.utils.errors import ConfigurationError, OrderIndexError, ShapeError


class TestDataConfig:
    @pytest.mark.parametrize(
        "kwargs, bad",
        [
            ({"beta": -1.0, "d": 1, "n": 10}, "beta"),
            ({"beta": 0.0, "d": 1, "n": 10}, "beta"),
            ({"beta": 1.0, "d": 0, "n": 10}, "d"),
            ({"beta": 1.0, "d": 1, "n": 1}, "n"),
            ({"beta": 1.0, "d": 1, "n": 10, "seed": -3}, "seed"),
        ],
    )
    def test_rejects_invalid_fields(self, kwargs, bad):
        with pytest.raises(ConfigurationError) as err:
            DataConfig(**kwargs)
        assert bad in err.value.keys

    def test_from_dict_defaults(self):
        cfg = DataConfig.from_dict({"beta": 0.5, "n": 100})
        assert cfg == DataConfig(beta=0.5, d=1, n=100, seed=0)
        assert DataConfig.from_dict(cfg.to_dict()) == cfg


class TestSampling:
    def test_same_config_is_bit_identical(self):
        cfg = DataConfig(beta=0.5, d=2, n=500, seed=11)
        a, b = sample_dataset(cfg), sample_dataset(cfg)
        assert np.array_equal(a.points, b.points)
        assert a.points.shape == (500, 2)
        assert a.config == cfg

    def test_seed_changes_draws(self):
        a = sample_dataset(DataConfig(beta=1.0, d=1, n=50, seed=1))
        b = sample_dataset(DataConfig(beta=1.0, d=1, n=50, seed=2))
        assert not np.array_equal(a.points, b.points)

    def test_points_are_read_only(self):
        ds = sample_dataset(DataConfig(beta=1.0, d=1, n=10, seed=0))
        with pytest.raises(ValueError):
            ds.points[0, 0] = 1.0

    def test_median_radius_matches_radial_law(self):
        ds = sample_dataset(DataConfig(beta=2.0, d=3, n=20000, seed=5))
        # P(|Y| <= median) = 1/2 within Monte Carlo error
        frac = float(np.mean(radial_cdf(ds.norms, 2.0, 3) <= 0.5))
        assert abs(frac - 0.5) < 0.02


class TestOrderStatistics:
    def test_one_dimensional_ordering(self):
        ds = Dataset.from_points([3.0, -1.0, 2.0])
        assert order_statistic(ds, 0)[0] == 3.0
        assert order_statistic(ds, 1)[0] == 2.0
        assert order_statistic(ds, 2)[0] == -1.0

    def test_two_dimensional_ordering(self):
        ds = Dataset.from_points([[0.0, 4.0], [1.0, 1.0], [-5.0, 0.0]])
        assert np.array_equal(order_statistic(ds, 0), [-5.0, 0.0])
        assert np.array_equal(order_statistic(ds, 1), [0.0, 4.0])
        assert order_radius(ds, 1) == 4.0

    def test_ties_keep_input_order(self):
        ds = Dataset.from_points([-2.0, 2.0])
        assert order_statistic(ds, 0)[0] == 2.0
        assert order_statistic(ds, 1)[0] == -2.0

    @pytest.mark.parametrize("k", [-1, 3])
    def test_index_out_of_range(self, k):
        with pytest.raises(OrderIndexError):
            order_statistic(Dataset.from_points([1.0, 2.0, 3.0]), k)

    @pytest.mark.parametrize(
        "points, gap",
        [
            ([0.0, 10.0], 10.0),
            ([0.0, 1.0, 10.0], 9.0),
            ([[0.0, 0.0], [3.0, 4.0], [6.0, 8.0]], 5.0),
        ],
    )
    def test_isolation_gap(self, points, gap):
        assert isolation_gap(Dataset.from_points(points), 0) == pytest.approx(gap)

    def test_mirror_keeps_radius_order(self):
        ds = Dataset.from_points([1.0, -7.0, 3.0])
        assert np.array_equal(ds.mirrored().radius_order, ds.radius_order)
        assert right_tail(ds).points[1, 0] == 7.0
        assert right_tail(ds.mirrored()).points[1, 0] == 7.0

    def test_shift_drops_provenance(self):
        ds = sample_dataset(DataConfig(beta=1.0, d=1, n=5, seed=0))
        assert ds.shifted(1.0).config is None
        assert ds.mirrored().config == ds.config

    @pytest.mark.parametrize("bad", [[], [[np.nan]], np.zeros((2, 2, 2))])
    def test_malformed_points(self, bad):
        with pytest.raises(ShapeError):
            Dataset.from_points(bad)


class TestExtremeValueConstants:
    def test_cauchy_constant(self):
        # one-dimensional Cauchy: K = 1/pi and A = 2/pi
        assert tail_constant_K(1.0, 1) == pytest.approx(1.0 / np.pi, rel=1e-12)
        assert evt_constant_A(1.0, 1) == pytest.approx(2.0 / np.pi, rel=1e-12)

    @pytest.mark.parametrize("d, area", [(1, 2.0), (2, 2.0 * np.pi), (3, 4.0 * np.pi)])
    def test_sphere_area(self, d, area):
        assert sphere_area(d) == pytest.approx(area)

    @pytest.mark.parametrize("beta, d", [(0.5, 1), (1.0, 2), (2.0, 3)])
    def test_radial_density_tail(self, beta, d):
        t = 1e7
        assert t ** (beta + d) * radial_density(t, beta, d) == pytest.approx(tail_constant_K(beta, d), rel=1e-6)

    def test_radial_cdf_one_dimensional_cauchy(self):
        r = np.array([0.5, 1.0, 4.0])
        assert np.allclose(radial_cdf(r, 1.0, 1), 2.0 * np.arctan(r) / np.pi)

    def test_frechet_limit(self):
        assert frechet_limit_cdf(1.0, 0.5) == pytest.approx(np.exp(-1.0))
        assert frechet_limit_cdf(0.0, 0.5) == 0.0

    def test_gk_proxy_at_scale_point(self):
        n, beta = 10000, 1.0
        ds = Dataset.from_points(np.append(np.zeros(n - 1) + 0.5, evt_constant_A(beta, 1) * n))
        assert gk_proxy(ds, 0, beta) == pytest.approx(1.0, rel=1e-12)

    def test_gk_proxy_unit_anchor(self):
        n = 10000
        ds = Dataset.from_points(np.append(np.full(n - 1, 0.5), float(n)))
        assert gk_proxy(ds, 0, 1.0) == pytest.approx(2.0 / np.pi, rel=1e-12)
        assert radial_scale(ds, 0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_gk_proxy_needs_beta_for_loaded_data(self):
        with pytest.raises(ConfigurationError):
            gk_proxy(Dataset.from_points([1.0, 2.0]), 0)

    def test_k_from_gamma_function(self):
        assert tail_constant_K(2.0, 1) == pytest.approx(
            2.0**1.5 * special.gamma(1.5) / (special.gamma(1.0) * np.sqrt(2.0 * np.pi))
        )


class TestExtremeValueLaw:
    @pytest.mark.slow
    @pytest.mark.parametrize("beta", [1.0, 2.0])
    @pytest.mark.parametrize("n", [1000, 10000])
    def test_median_of_scaled_maximum(self, beta, n):
        scaled = [
            order_radius(sample_dataset(DataConfig(beta=beta, d=1, n=n, seed=r)), 0) / n ** (1.0 / beta)
            for r in range(2000)
        ]
        expected = (evt_constant_A(beta, 1) / np.log(2.0)) ** (1.0 / beta)
        assert np.median(scaled) == pytest.approx(expected, rel=0.1)

    def test_maximum_is_isolated(self):
        n, eps = 10000, 0.25
        hits = []
        for r in range(400):
            ds = sample_dataset(DataConfig(beta=0.5, d=1, n=n, seed=r))
            hits.append(isolation_gap(ds, 0) > order_radius(ds, 0) / (2.0 * n**eps))
        assert np.mean(hits) > 0.9

    def test_tail_ratio_for_two_degrees_of_freedom(self):
        exact = float((1.0 - radial_cdf(10.0, 2.0, 1)) / (1.0 - radial_cdf(20.0, 2.0, 1)))
        assert exact == pytest.approx(2.0**2, rel=0.02)
        norms = sample_dataset(DataConfig(beta=2.0, d=1, n=1_000_000, seed=8)).norms
        ratio = np.mean(norms > 10.0) / np.mean(norms > 20.0)
        assert ratio == pytest.approx(exact, rel=0.06)
