"""Yearly event counts as a time-varying Poisson process.

The count in year ``t`` is Poisson with rate ``lambda_t`` given by one
of two links on a linear predictor:

* log link:       lambda_t = exp(alpha0 + alpha1 * t)
* identity link:  lambda_t = alpha0 + alpha1 * t

The identity link can go non-positive, so construction validates the
rate over the model's declared horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "RateLink",
    "FrequencyModel",
    "rate",
    "sample_count",
    "theoretical_dispersion",
]


class RateLink(str, Enum):
    LOG = "log"
    IDENTITY = "identity"


@dataclass(frozen=True, kw_only=True)
class FrequencyModel:
    """Immutable Poisson count model with a log or identity rate link."""

    alpha0: float
    alpha1: float
    link: RateLink
    horizon: tuple[float, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "link", RateLink(self.link))
        t_min, t_max = self.horizon
        if not (math.isfinite(t_min) and math.isfinite(t_max)):
            raise ValueError(f"horizon bounds must be finite, got {self.horizon}")
        if t_min > t_max:
            raise ValueError(f"horizon must satisfy t_min <= t_max, got {self.horizon}")

        if self.link is RateLink.IDENTITY:
            # Linear rate: checking the endpoints covers the interval, but
            # report the first violating integer year for a usable message.
            if min(self._raw_rate(t_min), self._raw_rate(t_max)) <= 0:
                t_bad = self._first_nonpositive_year()
                raise ValueError(
                    f"identity-link rate non-positive at t={t_bad}: "
                    f"{self.alpha0} + {self.alpha1}*{t_bad} <= 0"
                )
        else:
            for t in (t_min, t_max):
                try:
                    finite = math.isfinite(self._raw_rate(t))
                except OverflowError:
                    finite = False
                if not finite:
                    raise ValueError(f"log-link rate overflows at t={t}")

    def _raw_rate(self, t: float) -> float:
        eta = self.alpha0 + self.alpha1 * t
        return math.exp(eta) if self.link is RateLink.LOG else eta

    def _first_nonpositive_year(self) -> float:
        t_min, t_max = self.horizon
        if self._raw_rate(t_min) <= 0:
            return t_min
        # rate decreasing; first integer year at or past the root
        root = -self.alpha0 / self.alpha1
        t = max(t_min, math.ceil(root))
        while self._raw_rate(t) > 0 and t <= t_max:
            t += 1
        return min(t, t_max)


def rate(model: FrequencyModel, t: float) -> float:
    """Poisson rate ``lambda_t``; equals both E[N|t] and Var(N|t)."""
    t_min, t_max = model.horizon
    if not (t_min <= t <= t_max):
        raise ValueError(f"year index {t} outside model horizon [{t_min}, {t_max}]")
    lam = model._raw_rate(t)
    if lam <= 0:
        raise ValueError(f"rate non-positive at t={t}: {lam}")
    return lam


def sample_count(
    model: FrequencyModel,
    t: float,
    rng: np.random.Generator,
    size: int | None = None,
):
    """Poisson draw(s) with mean ``rate(model, t)``."""
    lam = rate(model, t)
    if size is None:
        return int(rng.poisson(lam))
    return rng.poisson(lam, size=int(size))


def theoretical_dispersion(model: FrequencyModel) -> float:
    """Var(N|t) / E[N|t], identically 1 for a Poisson count model.

    Note this is the plain variance-to-mean ratio; the alternative
    convention that subtracts 1 (zero for Poisson counts) is available
    for observed counts as :func:`stormrisk.estimate.mailier_index`.
    """
    return 1.0
