"""Shared helpers: relative error and randomized model generation."""

from __future__ import annotations

import stormrisk as sr

FAMILIES = ("uniform", "gamma", "exponential", "lognormal", "gpd")


def rel_err(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0.0 else abs(a - b) / scale


def random_severity(rng, family=None, horizon=(1, 60)) -> sr.SeverityModel:
    """A random valid severity model on the given horizon."""
    if family is None:
        family = FAMILIES[rng.integers(len(FAMILIES))]
    t_max = horizon[1]
    if family == "lognormal":
        beta0 = rng.uniform(-1.0, 2.0)
        beta1 = rng.uniform(-0.02, 0.02)
        shape = rng.uniform(0.2, 1.5)
    else:
        beta0 = rng.uniform(0.5, 20.0)
        # slope bounded so the driver stays above beta0 / 2 on the horizon
        beta1 = rng.uniform(-beta0 / (2 * t_max), beta0 / t_max)
        if family == "gamma":
            shape = rng.uniform(0.3, 5.0)
        elif family == "gpd":
            shape = rng.uniform(-1.0, 0.45)
        else:
            shape = None
    return sr.SeverityModel(
        family=family,
        trend=sr.TrendParams(beta0, beta1),
        horizon=horizon,
        shape=shape,
    )


def random_frequency(rng, horizon=(1, 60)) -> sr.FrequencyModel:
    """A random valid frequency model on the given horizon."""
    t_max = horizon[1]
    if rng.random() < 0.5:
        # keep the linear predictor non-negative so the rate stays >= 1,
        # inside the regime where every closed-form identity is in range
        alpha0 = rng.uniform(0.2, 3.0)
        alpha1 = rng.uniform(-alpha0 / (2 * t_max), alpha0 / t_max)
        return sr.FrequencyModel(
            alpha0=alpha0, alpha1=alpha1, link="log", horizon=horizon
        )
    alpha0 = rng.uniform(1.0, 40.0)
    alpha1 = rng.uniform(-alpha0 / (2 * t_max), alpha0 / t_max)
    return sr.FrequencyModel(
        alpha0=alpha0, alpha1=alpha1, link="identity", horizon=horizon
    )


def random_model_pair(rng, family=None, horizon=(1, 60)):
    """(frequency, severity, year index) with everything in range."""
    freq = random_frequency(rng, horizon)
    sev = random_severity(rng, family, horizon)
    t = int(rng.integers(horizon[0], horizon[1] + 1))
    return freq, sev, t


def stationary_config(family, *, lam, mu, shape=None, years=(1, 60), seed=0, replicates=1):
    """Simulation config with constant rate and constant severity scale."""
    n = years[1] - years[0] + 1
    freq = sr.FrequencyModel(alpha0=lam, alpha1=0.0, link="identity", horizon=(1, n))
    sev = sr.SeverityModel(
        family=family, trend=sr.TrendParams(mu, 0.0), horizon=(1, n), shape=shape
    )
    return sr.SimulationConfig(
        freq=freq, sev=sev, years=years, seed=seed, replicates=replicates
    )
