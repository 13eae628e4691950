"""Severity distributions for event intensities.

Five distribution families describe the intensity of a single event in
year ``t``.  Each family is driven by a linear trend ``mu_t = beta0 +
beta1 * t`` on its scale parameter, plus an optional time-constant shape
parameter:

==============  ==========================  =====================
family          distribution of X at t      shape parameter
==============  ==========================  =====================
uniform         Uniform(0, mu_t)            (none)
gamma           Gamma(theta, scale mu_t)    theta > 0
exponential     Exponential(mean mu_t)      (none)
lognormal       log X ~ Normal(mu_t, s^2)   s > 0 (log-scale sd)
gpd             GPD(0, scale 1/mu_t, xi)    xi < 1/2
==============  ==========================  =====================

Note the GPD scale is the reciprocal of the driver, so its mean falls as
``mu_t`` grows; the threshold is fixed at zero.  For the lognormal
family ``mu_t`` is the log-scale location and may take any real value;
for all other families the driver must stay strictly positive over the
model's declared horizon, which is validated at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Family",
    "TrendParams",
    "Moments",
    "SeverityModel",
    "severity_moments",
    "j_squared",
    "sample_intensity",
]


class Family(str, Enum):
    """Supported severity distribution families."""

    UNIFORM = "uniform"
    GAMMA = "gamma"
    EXPONENTIAL = "exponential"
    LOGNORMAL = "lognormal"
    GPD = "gpd"


#: Families whose scale driver must be strictly positive.  The lognormal
#: driver is a log-scale location and is exempt.
_POSITIVE_DRIVER = frozenset(
    {Family.UNIFORM, Family.GAMMA, Family.EXPONENTIAL, Family.GPD}
)

_SHAPED = frozenset({Family.GAMMA, Family.LOGNORMAL, Family.GPD})


@dataclass(frozen=True)
class TrendParams:
    """Linear trend ``beta0 + beta1 * t`` on the severity scale driver."""

    beta0: float
    beta1: float

    def at(self, t: float) -> float:
        """Driver value ``mu_t`` at year index ``t``."""
        return self.beta0 + self.beta1 * t


@dataclass(frozen=True)
class Moments:
    """First two moments of a severity distribution at a fixed year.

    ``variance == second_moment - mean**2`` holds by construction.
    """

    mean: float
    variance: float
    second_moment: float

    def __post_init__(self) -> None:
        if self.variance < 0:
            raise ValueError(f"variance must be non-negative, got {self.variance}")


@dataclass(frozen=True, kw_only=True)
class SeverityModel:
    """Immutable severity model: family, trend and horizon.

    ``horizon`` is the closed interval of year indices ``[t_min, t_max]``
    over which the model is valid.  Construction fails if the trend
    driver is non-positive anywhere on the horizon (lognormal excepted)
    or if the shape parameter is out of range for the family.
    """

    family: Family
    trend: TrendParams
    horizon: tuple[float, float]
    shape: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        t_min, t_max = self.horizon
        if not (math.isfinite(t_min) and math.isfinite(t_max)):
            raise ValueError(f"horizon bounds must be finite, got {self.horizon}")
        if t_min > t_max:
            raise ValueError(f"horizon must satisfy t_min <= t_max, got {self.horizon}")

        fam = self.family
        if fam in _SHAPED:
            if self.shape is None:
                raise ValueError(f"{fam.value} family requires a shape parameter")
            if not math.isfinite(self.shape):
                raise ValueError(f"shape must be finite, got {self.shape}")
            if fam is Family.GAMMA and self.shape <= 0:
                raise ValueError(f"gamma shape must be > 0, got {self.shape}")
            if fam is Family.LOGNORMAL and self.shape <= 0:
                # shape == 0 would be a degenerate point mass; reject here
                # rather than special-case zero variance downstream.
                raise ValueError(f"lognormal log-sd must be > 0, got {self.shape}")
            if fam is Family.GPD and self.shape >= 0.5:
                raise ValueError(
                    f"gpd shape must be < 0.5 for finite variance, got {self.shape}"
                )
        elif self.shape is not None:
            raise ValueError(f"{fam.value} family takes no shape parameter")

        if fam in _POSITIVE_DRIVER:
            # The driver is linear in t, so positivity at both endpoints
            # implies positivity on the whole interval.
            for t in (t_min, t_max):
                if self.trend.at(t) <= 0:
                    raise ValueError(
                        f"scale driver is non-positive at t={t}: "
                        f"{self.trend.beta0} + {self.trend.beta1}*{t} = {self.trend.at(t)}"
                    )

    def driver(self, t: float) -> float:
        """Validated driver ``mu_t``; raises outside the horizon."""
        t_min, t_max = self.horizon
        if not (t_min <= t <= t_max):
            raise ValueError(f"year index {t} outside model horizon [{t_min}, {t_max}]")
        mu = self.trend.at(t)
        if self.family in _POSITIVE_DRIVER and mu <= 0:
            raise ValueError(f"scale driver non-positive at t={t}: {mu}")
        return mu


def severity_moments(model: SeverityModel, t: float) -> Moments:
    """Mean, variance and second moment of the intensity at year ``t``.

    Closed forms per family (mu = driver at t, shape as in the table):

    * uniform:      mean mu/2,                  var mu^2/12
    * gamma:        mean theta*mu,              var theta*mu^2
    * exponential:  mean mu,                    var mu^2
    * lognormal:    mean exp(mu + s^2/2),       var (e^{s^2}-1) exp(2mu + s^2)
    * gpd:          mean 1/(mu(1-xi)),          var 1/(mu^2 (1-xi)^2 (1-2xi))
    """
    mu = model.driver(t)
    fam = model.family
    if fam is Family.UNIFORM:
        mean = 0.5 * mu
        var = mu * mu / 12.0
    elif fam is Family.GAMMA:
        theta = model.shape
        mean = theta * mu
        var = theta * mu * mu
    elif fam is Family.EXPONENTIAL:
        mean = mu
        var = mu * mu
    elif fam is Family.LOGNORMAL:
        s2 = model.shape**2
        mean = math.exp(mu + 0.5 * s2)
        var = math.expm1(s2) * math.exp(2.0 * mu + s2)
    else:  # GPD
        xi = model.shape
        mean = 1.0 / (mu * (1.0 - xi))
        var = 1.0 / (mu * mu * (1.0 - xi) ** 2 * (1.0 - 2.0 * xi))
    return Moments(mean=mean, variance=var, second_moment=var + mean * mean)


def j_squared(model: SeverityModel) -> float:
    """Squared mean-to-standard-deviation ratio, E[X]^2 / Var(X).

    This is the square of the reciprocal coefficient of variation.  It
    depends only on the family's shape parameter, never on the trend or
    the year: uniform 3, gamma theta, exponential 1, lognormal
    1/(e^{s^2} - 1), gpd 1 - 2*xi.
    """
    fam = model.family
    if fam is Family.UNIFORM:
        return 3.0
    if fam is Family.GAMMA:
        return float(model.shape)
    if fam is Family.EXPONENTIAL:
        return 1.0
    if fam is Family.LOGNORMAL:
        return 1.0 / math.expm1(model.shape**2)
    return 1.0 - 2.0 * model.shape  # GPD


def _uniform_ppf(u, mu):
    return mu * u


def _exponential_ppf(u, mu):
    # -mu * log(1 - u); log1p keeps precision near u = 0
    return -mu * np.log1p(-u)


def _gpd_ppf(u, scale, xi):
    if xi == 0.0:
        return -scale * np.log1p(-u)
    return (scale / xi) * (np.power(1.0 - u, -xi) - 1.0)


def sample_intensity(
    model: SeverityModel,
    t: float,
    rng: np.random.Generator,
    size: int | None = None,
):
    """Draw intensities from the year-``t`` distribution.

    Returns a float when ``size`` is None, else an ndarray of length
    ``size``.  Draws are deterministic given the generator state.
    Uniform, exponential and GPD use the inverse CDF; gamma uses the
    generator's rejection sampler; lognormal exponentiates a normal
    draw.
    """
    mu = model.driver(t)
    fam = model.family
    n = 1 if size is None else int(size)
    if fam is Family.UNIFORM:
        x = _uniform_ppf(rng.random(size=n), mu)
    elif fam is Family.GAMMA:
        x = rng.gamma(model.shape, scale=mu, size=n)
    elif fam is Family.EXPONENTIAL:
        x = _exponential_ppf(rng.random(size=n), mu)
    elif fam is Family.LOGNORMAL:
        x = rng.lognormal(mean=mu, sigma=model.shape, size=n)
    else:  # GPD with scale 1/mu
        x = _gpd_ppf(rng.random(size=n), 1.0 / mu, model.shape)
    return float(x[0]) if size is None else x
