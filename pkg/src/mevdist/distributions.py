"""Elementary distribution functions: Weibull, binomial counts, GEV, empirical CDF."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

from . import kernels
from .errors import DomainError

GUMBEL_EPS = 1e-9


@dataclass(frozen=True)
class WeibullParams:
    """Weibull ordinary-event distribution.

    ``F(x) = 1 - exp(-((x - position_mu) / scale_C) ** shape_w)`` for x > mu.
    """

    scale_C: float
    shape_w: float
    position_mu: float = 0.0

    def __post_init__(self):
        for name in ("scale_C", "shape_w", "position_mu"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.scale_C) and self.scale_C > 0):
            raise DomainError(f"Weibull scale must be positive and finite, got {self.scale_C}")
        if not (math.isfinite(self.shape_w) and self.shape_w > 0):
            raise DomainError(f"Weibull shape must be positive and finite, got {self.shape_w}")
        if not (math.isfinite(self.position_mu) and self.position_mu >= 0):
            raise DomainError(f"Weibull position must be >= 0 and finite, got {self.position_mu}")

    def with_position(self, mu):
        return WeibullParams(self.scale_C, self.shape_w, mu)


@dataclass(frozen=True)
class GevParams:
    """GEV with ``F(x) = exp(-(1 + xi (x - loc)/scale) ** (-1/xi))``.

    ``shape_xi > 0`` is the heavy-tailed (Frechet) case.
    """

    location: float
    scale: float
    shape_xi: float

    def __post_init__(self):
        for name in ("location", "scale", "shape_xi"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"GEV {name} must be finite, got {value}")
            object.__setattr__(self, name, value)
        if self.scale <= 0:
            raise DomainError(f"GEV scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class BinomialOccurrence:
    """Independent daily occurrence: each of ``N_T`` days is dry with probability ``p0``."""

    N_T: int
    p0: float

    def __post_init__(self):
        if int(self.N_T) != self.N_T or self.N_T < 1:
            raise DomainError(f"N_T must be a positive integer, got {self.N_T}")
        object.__setattr__(self, "N_T", int(self.N_T))
        object.__setattr__(self, "p0", float(self.p0))
        if not 0.0 <= self.p0 <= 1.0:
            raise DomainError(f"p0 must lie in [0, 1], got {self.p0}")


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def weibull_cdf(params: WeibullParams, x):
    t = kernels.weibull_logsf_power(np.asarray(x, dtype=float), params.scale_C, params.shape_w,
                                    params.position_mu)
    return _scalar_or_array(-np.expm1(-t), x)


def weibull_logcdf(params: WeibullParams, x):
    """log F(x), accurate both near 0 and near 1."""
    t = kernels.weibull_logsf_power(np.asarray(x, dtype=float), params.scale_C, params.shape_w,
                                    params.position_mu)
    return _scalar_or_array(kernels.log_cdf_from_t(t), x)


def weibull_pdf(params: WeibullParams, x):
    z = (np.asarray(x, dtype=float) - params.position_mu) / params.scale_C
    w = params.shape_w
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = np.where(z > 0, w / params.scale_C * np.power(np.maximum(z, 0), w - 1)
                        * np.exp(-np.power(np.maximum(z, 0), w)), 0.0)
    return _scalar_or_array(dens, x)


def weibull_quantile(params: WeibullParams, p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~(p_arr >= 0) | (p_arr >= 1)):
        raise DomainError(f"Weibull quantile needs 0 <= p < 1, got {p}")
    q = params.position_mu + params.scale_C * np.power(-np.log1p(-p_arr), 1.0 / params.shape_w)
    return _scalar_or_array(q, p)


def binomial_logpmf(occ: BinomialOccurrence, n):
    """log P(n wet days); ``p0`` is the DRY-day probability."""
    n_arr = np.asarray(n)
    if np.any(n_arr != np.floor(n_arr)) or np.any(n_arr < 0) or np.any(n_arr > occ.N_T):
        raise DomainError(f"n must be an integer in [0, {occ.N_T}], got {n}")
    n_arr = n_arr.astype(float)
    N = occ.N_T
    logc = gammaln(N + 1.0) - gammaln(n_arr + 1.0) - gammaln(N - n_arr + 1.0)
    out = logc + xlogy(N - n_arr, occ.p0) + xlog1py(n_arr, -occ.p0)
    return _scalar_or_array(out, n)


def binomial_pmf(occ: BinomialOccurrence, n):
    return _scalar_or_array(np.exp(binomial_logpmf(occ, n)), n)


def binomial_logpmf_table(occ: BinomialOccurrence):
    """log pmf for n = 0..N_T."""
    return binomial_logpmf(occ, np.arange(occ.N_T + 1))


def gev_cdf(params: GevParams, x):
    y = (np.asarray(x, dtype=float) - params.location) / params.scale
    xi = params.shape_xi
    if abs(xi) < GUMBEL_EPS:
        out = np.exp(-np.exp(-y))
    else:
        base = 1.0 + xi * y
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            # log1p keeps (1 + xi y) ** (-1/xi) accurate for tiny xi
            inside = np.exp(-np.exp(-np.log1p(np.where(base > 0, xi * y, 0.0)) / xi))
        # outside the support: below the lower bound (xi > 0) or above the upper bound (xi < 0)
        out = np.where(base > 0, inside, 0.0 if xi > 0 else 1.0)
    return _scalar_or_array(out, x)


def gev_quantile(params: GevParams, p):
    p_arr = np.asarray(p, dtype=float)
    if np.any(~(p_arr > 0) | (p_arr >= 1)):
        raise DomainError(f"GEV quantile needs 0 < p < 1, got {p}")
    xi = params.shape_xi
    y = -np.log(p_arr)
    if abs(xi) < GUMBEL_EPS:
        q = params.location - params.scale * np.log(y)
    else:
        q = params.location + params.scale * np.expm1(-xi * np.log(y)) / xi
    return _scalar_or_array(q, p)


class EmpiricalCDF:
    """Right-continuous step function with Weibull plotting positions rank/(n+1)."""

    def __init__(self, sample):
        values = np.sort(np.asarray(sample, dtype=float).ravel())
        if values.size == 0:
            raise DomainError("empirical CDF needs a non-empty sample")
        if not np.all(np.isfinite(values)):
            raise DomainError("empirical CDF sample must be finite")
        self.values = values
        self.n = values.size

    def __call__(self, x):
        ranks = np.searchsorted(self.values, np.asarray(x, dtype=float), side="right")
        return _scalar_or_array(ranks / (self.n + 1.0), x)

    def __eq__(self, other):
        return isinstance(other, EmpiricalCDF) and np.array_equal(self.values, other.values)

    def __repr__(self):
        return f"EmpiricalCDF(n={self.n})"


def empirical_cdf(sample) -> EmpiricalCDF:
    return EmpiricalCDF(sample)
