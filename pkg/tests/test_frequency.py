import math

import numpy as np
import pytest

import stormrisk as sr


def log_model(alpha0, alpha1, horizon=(1, 60)):
    return sr.FrequencyModel(alpha0=alpha0, alpha1=alpha1, link="log", horizon=horizon)


def identity_model(alpha0, alpha1, horizon=(1, 60)):
    return sr.FrequencyModel(
        alpha0=alpha0, alpha1=alpha1, link="identity", horizon=horizon
    )


def test_rate_values():
    assert sr.rate(log_model(0.0, 0.0), 7) == 1.0
    assert sr.rate(log_model(1.0, 0.1), 10) == pytest.approx(math.exp(2.0), rel=1e-12)
    assert sr.rate(log_model(1.0, 0.1), 10) == pytest.approx(7.38905609893065, rel=1e-12)
    assert sr.rate(identity_model(20.0, 0.5), 60) == 50.0


def test_rate_horizon_violation():
    model = log_model(0.0, 0.0, horizon=(1, 10))
    with pytest.raises(ValueError, match="horizon"):
        sr.rate(model, 11)
    with pytest.raises(ValueError, match="horizon"):
        sr.rate(model, 0)


def test_identity_link_positivity_validated_at_construction():
    with pytest.raises(ValueError, match="non-positive at t=10"):
        identity_model(1.0, -0.1)
    # strictly positive on a shorter horizon is fine
    identity_model(1.0, -0.1, horizon=(1, 9))
    with pytest.raises(ValueError, match="non-positive"):
        identity_model(0.0, 0.0)


def test_log_link_always_positive():
    model = log_model(-30.0, 0.0)
    assert sr.rate(model, 1) > 0
    with pytest.raises(ValueError, match="overflow"):
        log_model(1000.0, 0.0)


def test_sample_count_near_zero_rate():
    model = identity_model(1e-9, 0.0, horizon=(1, 10))
    draws = sr.sample_count(model, 1, np.random.default_rng(0), size=10_000)
    assert np.all(draws == 0)


def test_sample_count_mean_and_equidispersion():
    model = identity_model(5.0, 0.0)
    draws = sr.sample_count(model, 1, np.random.default_rng(8), size=1_000_000)
    n = len(draws)
    assert abs(draws.mean() - 5.0) <= 4 * math.sqrt(5.0 / n)
    assert abs(draws.var() - 5.0) <= 0.05 * 5.0
    # dispersion ratio: sd of var/mean for Poisson is about sqrt(2 / n)
    dispersion = draws.var() / draws.mean()
    assert abs(dispersion - 1.0) <= 3 * math.sqrt(2.0 / n)


def test_sample_count_scalar_and_determinism():
    model = log_model(1.0, 0.0)
    a = sr.sample_count(model, 2, np.random.default_rng(3))
    b = sr.sample_count(model, 2, np.random.default_rng(3))
    assert isinstance(a, int)
    assert a == b


def test_theoretical_dispersion_is_one_for_poisson():
    assert sr.theoretical_dispersion(log_model(2.0, 0.01)) == 1.0
    assert sr.theoretical_dispersion(identity_model(20.0, 0.5)) == 1.0
    # the subtract-one convention gives zero for the same models
    assert sr.theoretical_dispersion(log_model(2.0, 0.01)) - 1.0 == 0.0
