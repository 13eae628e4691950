import math

import numpy as np
import pytest
from scipy import stats

import stormrisk as sr
from stormrisk.severity import _exponential_ppf, _gpd_ppf, _uniform_ppf

from helpers import FAMILIES, random_severity, rel_err


def make(family, beta0, beta1=0.0, shape=None, horizon=(1, 60)):
    return sr.SeverityModel(
        family=family, trend=sr.TrendParams(beta0, beta1), horizon=horizon, shape=shape
    )


# --- closed-form moments -------------------------------------------------


def test_exponential_moments():
    m = sr.severity_moments(make("exponential", 2.0), 1)
    assert m.mean == 2.0
    assert m.variance == 4.0


def test_lognormal_moments():
    # direct evaluation: mean exp(mu + s^2/2), var (e^{s^2}-1) exp(2mu + s^2)
    m = sr.severity_moments(make("lognormal", 1.0, shape=0.5), 1)
    assert m.mean == pytest.approx(math.exp(1.125), rel=1e-12)
    assert m.mean == pytest.approx(3.080216848918031, rel=1e-12)
    assert m.variance == pytest.approx((math.exp(0.25) - 1) * math.exp(2.25), rel=1e-12)
    assert m.variance == pytest.approx(2.694758124344947, rel=1e-12)


def test_gpd_moments():
    m = sr.severity_moments(make("gpd", 0.5, shape=0.25), 1)
    assert m.mean == pytest.approx(1 / (0.5 * 0.75), rel=1e-12)
    assert m.mean == pytest.approx(2.6666666666666665, rel=1e-12)
    assert m.variance == pytest.approx(1 / (0.25 * 0.75**2 * 0.5), rel=1e-12)
    assert m.variance == pytest.approx(14.222222222222221, rel=1e-12)


def test_uniform_and_gamma_moments():
    m = sr.severity_moments(make("uniform", 6.0), 1)
    assert m.mean == 3.0
    assert m.variance == 3.0
    m = sr.severity_moments(make("gamma", 2.0, shape=3.0), 1)
    assert m.mean == 6.0
    assert m.variance == 12.0


def test_second_moment_consistency_everywhere():
    rng = np.random.default_rng(11)
    for _ in range(200):
        model = random_severity(rng)
        t = int(rng.integers(1, 61))
        m = sr.severity_moments(model, t)
        assert rel_err(m.second_moment, m.variance + m.mean**2) <= 1e-12
        assert m.variance >= 0


def test_gamma_shape_one_equals_exponential():
    for t in (1, 17, 60):
        g = sr.severity_moments(make("gamma", 3.0, 0.02, shape=1.0), t)
        e = sr.severity_moments(make("exponential", 3.0, 0.02), t)
        assert g.mean == e.mean
        assert g.variance == e.variance


def test_trend_is_applied_per_year():
    model = make("exponential", 2.0, 0.5)
    assert sr.severity_moments(model, 1).mean == 2.5
    assert sr.severity_moments(model, 10).mean == 7.0


# --- shape ratio ----------------------------------------------------------


def test_j_squared_reference_values():
    assert sr.j_squared(make("uniform", 5.0)) == 3.0
    assert sr.j_squared(make("exponential", 5.0)) == 1.0
    assert sr.j_squared(make("gamma", 5.0, shape=2.5)) == 2.5
    assert sr.j_squared(make("gpd", 5.0, shape=0.2)) == pytest.approx(0.6, rel=1e-15)
    # 1 / (e - 1) at unit log-sd
    assert sr.j_squared(make("lognormal", 5.0, shape=1.0)) == pytest.approx(
        0.5819767068693265, rel=1e-12
    )


def test_j_squared_invariant_to_trend_and_year():
    rng = np.random.default_rng(5)
    for _ in range(100):
        model = random_severity(rng)
        j = sr.j_squared(model)
        # moment-based value agrees at two different years
        for t in (1, 60):
            m = sr.severity_moments(model, t)
            assert rel_err(m.mean**2 / m.variance, j) <= 1e-12
        # rescaling the trend (or shifting, for the log-scale family)
        if model.family is sr.Family.LOGNORMAL:
            trend = sr.TrendParams(model.trend.beta0 + 3.0, model.trend.beta1)
        else:
            c = rng.uniform(0.1, 10.0)
            trend = sr.TrendParams(c * model.trend.beta0, c * model.trend.beta1)
        rescaled = sr.SeverityModel(
            family=model.family, trend=trend, horizon=model.horizon, shape=model.shape
        )
        assert rel_err(sr.j_squared(rescaled), j) <= 1e-12


# --- validation -----------------------------------------------------------


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        make("gamma", 1.0, shape=0.0)
    with pytest.raises(ValueError):
        make("lognormal", 1.0, shape=0.0)  # degenerate log-sd
    with pytest.raises(ValueError, match="< 0.5"):
        make("gpd", 1.0, shape=0.5)
    with pytest.raises(ValueError):
        make("uniform", 1.0, shape=2.0)  # no shape parameter
    with pytest.raises(ValueError):
        make("exponential", 1.0, shape=1.0)


def test_driver_positivity_enforced():
    with pytest.raises(ValueError, match="non-positive"):
        make("exponential", 1.0, -0.1, horizon=(1, 60))  # hits 0 at t = 10
    # log-scale location may be negative
    make("lognormal", -2.0, 0.0, shape=1.0)
    # positive everywhere on a shorter horizon is fine
    make("exponential", 1.0, -0.1, horizon=(1, 9))


def test_horizon_violation_raises():
    model = make("exponential", 2.0, horizon=(1, 10))
    with pytest.raises(ValueError, match="horizon"):
        sr.severity_moments(model, 11)
    with pytest.raises(ValueError, match="horizon"):
        sr.sample_intensity(model, 0, np.random.default_rng(0))


# --- sampling -------------------------------------------------------------


def test_inverse_cdf_reference_points():
    assert _uniform_ppf(0.5, 10.0) == 5.0
    assert _exponential_ppf(1 - math.exp(-2.0), 3.0) == pytest.approx(6.0, rel=1e-12)
    # exponential limit of the heavy-tail transform
    assert _gpd_ppf(1 - math.exp(-2.0), 1.0, 0.0) == pytest.approx(2.0, rel=1e-12)
    # small-shape continuity with the limit
    u = 0.7
    assert _gpd_ppf(u, 1.0, 1e-10) == pytest.approx(_gpd_ppf(u, 1.0, 0.0), rel=1e-6)


def test_sampling_is_deterministic_given_state():
    model = make("gamma", 2.0, shape=1.5)
    a = sr.sample_intensity(model, 3, np.random.default_rng(42), size=10)
    b = sr.sample_intensity(model, 3, np.random.default_rng(42), size=10)
    assert np.array_equal(a, b)
    scalar = sr.sample_intensity(model, 3, np.random.default_rng(42))
    assert scalar == a[0]


SAMPLING_CASES = [
    ("uniform", 10.0, None),
    ("gamma", 1.5, 2.0),
    ("exponential", 26.7, None),
    ("lognormal", 1.0, 0.5),
    ("gpd", 0.5, 0.25),
]


@pytest.mark.parametrize("family,beta0,shape", SAMPLING_CASES)
def test_sample_mean_converges(family, beta0, shape):
    model = make(family, beta0, shape=shape)
    m = sr.severity_moments(model, 1)
    draws = sr.sample_intensity(model, 1, np.random.default_rng(7), size=1_000_000)
    assert np.all(draws > 0)
    se = math.sqrt(m.variance / len(draws))
    assert abs(draws.mean() - m.mean) <= 4 * se


@pytest.mark.parametrize("family,beta0,shape", SAMPLING_CASES)
def test_samples_match_reference_cdf(family, beta0, shape):
    """One-sample KS against an independent CDF implementation."""
    model = make(family, beta0, shape=shape)
    draws = sr.sample_intensity(model, 1, np.random.default_rng(3), size=20_000)
    dist = {
        "uniform": lambda: stats.uniform(0, beta0),
        "gamma": lambda: stats.gamma(shape, scale=beta0),
        "exponential": lambda: stats.expon(scale=beta0),
        "lognormal": lambda: stats.lognorm(shape, scale=math.exp(beta0)),
        "gpd": lambda: stats.genpareto(shape, scale=1.0 / beta0),
    }[family]()
    result = stats.ks_1samp(draws, dist.cdf)
    assert result.pvalue > 0.001


def test_gamma_shape_one_sampler_matches_exponential():
    n = 100_000
    gamma = sr.sample_intensity(
        make("gamma", 2.0, shape=1.0), 1, np.random.default_rng(1), size=n
    )
    expo = sr.sample_intensity(
        make("exponential", 2.0), 1, np.random.default_rng(2), size=n
    )
    statistic = stats.ks_2samp(gamma, expo).statistic
    # two-sample 1% critical value: 1.628 * sqrt((n + m) / (n m))
    assert statistic < 1.628 * math.sqrt(2.0 / n)


def test_gpd_zero_shape_matches_exponential_sampler():
    n = 100_000
    gpd = sr.sample_intensity(
        make("gpd", 0.5, shape=0.0), 1, np.random.default_rng(1), size=n
    )
    expo = sr.sample_intensity(
        make("exponential", 2.0), 1, np.random.default_rng(2), size=n
    )
    statistic = stats.ks_2samp(gpd, expo).statistic
    assert statistic < 1.628 * math.sqrt(2.0 / n)


def test_all_families_cover_horizon_with_trend():
    rng = np.random.default_rng(19)
    for family in FAMILIES:
        model = random_severity(rng, family)
        for t in (1, 30, 60):
            x = sr.sample_intensity(model, t, np.random.default_rng(t), size=100)
            assert np.all(x > 0)
