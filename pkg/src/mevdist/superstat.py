"""Superstatistical (binomial-occurrence) annual-maximum distribution.

Includes the KS-fitted shared Weibull position and a numerical check that
the MEVD with binomial event counts collapses to the closed form
``[p0 + (1 - p0) F(x)] ** N_t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .distributions import (BinomialOccurrence, WeibullParams, binomial_logpmf_table,
                            weibull_quantile)
from .errors import DataError, DomainError, NumericalError
from .fitting import fit_weibull

DAYS_PER_YEAR = 365
EQUIVALENCE_TOL = 1e-10
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


@dataclass(frozen=True)
class Da18Model:
    """Per-year (p0_i, theta_i) with a shared day count and Weibull position."""

    years: tuple
    N_t: int = DAYS_PER_YEAR
    mu: float = 0.0
    labels: tuple | None = None
    ks: float | None = None

    def __post_init__(self):
        if int(self.N_t) != self.N_t or self.N_t < 1:
            raise DomainError(f"N_t must be a positive integer, got {self.N_t}")
        if not (math.isfinite(self.mu) and self.mu >= 0):
            raise DomainError(f"mu must be >= 0, got {self.mu}")
        years = []
        for p0, theta in self.years:
            p0 = float(p0)
            if not 0.0 <= p0 <= 1.0:
                raise DomainError(f"p0 must lie in [0, 1], got {p0}")
            years.append((p0, theta.with_position(self.mu)))
        if not years:
            raise DomainError("Da18Model needs at least one year")
        object.__setattr__(self, "years", tuple(years))
        object.__setattr__(self, "N_t", int(self.N_t))
        object.__setattr__(self, "mu", float(self.mu))

    @property
    def S(self):
        return len(self.years)

    @property
    def tag(self):
        return "DA18"

    @cached_property
    def _arrays(self):
        p0 = np.array([p for p, _ in self.years])
        C = np.array([t.scale_C for _, t in self.years])
        w = np.array([t.shape_w for _, t in self.years])
        mu = np.array([t.position_mu for _, t in self.years])
        return p0, C, w, mu, np.ones(p0.size)

    def cdf(self, x):
        p0, C, w, mu, weight = self._arrays
        out = kernels.da18_mixture(np.asarray(x, dtype=float), p0, C, w, mu, float(self.N_t),
                                   weight)
        return _scalar_or_array(np.clip(out, 0.0, 1.0), x)

    def quantile(self, p):
        return da18_quantile(self, p)


def da18_annual_cdf(p0, theta: WeibullParams, N_t, x):
    """``[p0 + (1 - p0) F1(x)] ** N_t`` for one year, evaluated in log space."""
    out = kernels.da18_mixture(np.asarray(x, dtype=float), np.array([float(p0)]),
                               np.array([theta.scale_C]), np.array([theta.shape_w]),
                               np.array([theta.position_mu]), float(N_t), np.ones(1))
    return _scalar_or_array(out, x)


def da18_cdf(model: Da18Model, x):
    return model.cdf(x)


def da18_quantile(model: Da18Model, p):
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p}")
    lo = model.mu
    if model.cdf(lo) >= p:
        return lo
    hi = lo + max(t.scale_C for _, t in model.years)
    for _ in range(2000):
        if model.cdf(hi) > p:
            break
        hi = lo + 2.0 * (hi - lo)
    else:
        raise NumericalError(f"could not bracket the {p} quantile")
    return float(brentq(lambda v: model.cdf(v) - p, lo, hi, xtol=1e-300,
                        rtol=4 * np.finfo(float).eps, maxiter=500))


def mevd_binomial_cdf(occ: BinomialOccurrence, theta: WeibullParams, x):
    """``sum_n P(n) F(x)**n`` over n = 0..N_T, summed explicitly (no closed form)."""
    out = kernels.binomial_mixture(np.asarray(x, dtype=float), binomial_logpmf_table(occ),
                                   theta.scale_C, theta.shape_w, theta.position_mu)
    return _scalar_or_array(np.clip(out, 0.0, 1.0), x)


def closed_form_quantile(occ: BinomialOccurrence, theta: WeibullParams, p):
    """Inverse of ``[p0 + (1 - p0) F(x)] ** N_T`` in closed form."""
    p = np.asarray(p, dtype=float)
    floor = occ.p0 ** occ.N_T
    with np.errstate(divide="ignore", invalid="ignore"):
        sf = -np.expm1(np.log(p) / occ.N_T) / (1.0 - occ.p0)
        t = -np.log(sf)
    x = theta.position_mu + theta.scale_C * np.power(np.maximum(t, 0.0), 1.0 / theta.shape_w)
    return np.where(p <= floor, theta.position_mu, x)


def equivalence_grid(occ: BinomialOccurrence, theta: WeibullParams, size=1000,
                     p_range=(0.001, 0.9999)):
    """Grid at quantiles of the ordinary-event Weibull and of the annual maximum.

    Half the points sit at ordinary-event quantiles, half at annual-maximum
    quantiles, each over ``p_range``; together they cover both tails of both.
    """
    p = np.linspace(p_range[0], p_range[1], size - size // 2)
    q = np.linspace(p_range[0], p_range[1], size // 2)
    ordinary = weibull_quantile(theta, p)
    annual = closed_form_quantile(occ, theta, q) if occ.p0 < 1 else ordinary[: q.size]
    return np.sort(np.concatenate([ordinary, annual]))


@dataclass(frozen=True)
class EquivalenceReport:
    max_abs_dev: float
    argmax_x: float
    passed: bool
    tol: float = EQUIVALENCE_TOL

    def to_dict(self):
        return {"max_abs_dev": self.max_abs_dev, "argmax_x": self.argmax_x, "pass": self.passed}


def verify_equivalence(grid, occ: BinomialOccurrence, theta: WeibullParams,
                       closed_form=None, tol=EQUIVALENCE_TOL) -> EquivalenceReport:
    """Compare the explicit binomial sum against the closed form on ``grid``.

    ``closed_form(p0, theta, N_t, x)`` defaults to :func:`da18_annual_cdf`; it
    is injectable so a corrupted version can serve as a negative control.
    """
    grid = np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise DomainError("equivalence grid must be non-empty")
    closed_form = closed_form or da18_annual_cdf
    lhs = mevd_binomial_cdf(occ, theta, grid)
    rhs = np.asarray(closed_form(occ.p0, theta, occ.N_T, grid), dtype=float)
    dev = np.abs(lhs - rhs)
    i = int(np.nanargmax(dev)) if np.any(np.isfinite(dev)) else 0
    max_dev = float(dev[i]) if np.all(np.isfinite(dev)) else math.inf
    return EquivalenceReport(max_dev, float(grid[i]), bool(max_dev <= tol), tol)


def ks_statistic(cdf, sample):
    """Two-sided Kolmogorov-Smirnov distance between ``cdf`` and a sample."""
    x = np.sort(np.asarray(sample, dtype=float).ravel())
    n = x.size
    if n == 0:
        raise DomainError("KS statistic needs a non-empty sample")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def _year_fits(blocks, mu, method, min_events):
    years = []
    for block in blocks:
        excess = block.magnitudes[block.magnitudes > mu] - mu
        excess = excess[excess > 0]
        if excess.size < min_events:
            continue
        report = fit_weibull(excess, method)
        if report.converged:
            years.append((block, report.params))
    return years


def _da18_at(blocks, mu, N_t, method, min_events):
    fits = _year_fits(blocks, mu, method, min_events)
    if not fits:
        return None
    return Da18Model(
        tuple((min(max(1.0 - b.n_events / N_t, 0.0), 1.0), theta) for b, theta in fits),
        N_t=N_t, mu=mu, labels=tuple(b.year for b, _ in fits))


def fit_da18(blocks, maxima=None, N_t=DAYS_PER_YEAR, method="pwm", min_events=2,
             scan_points=11, rel_tol=1e-3) -> Da18Model:
    """Fit per-year (p0_i, C_i, w_i) and a shared position ``mu`` by KS minimisation.

    ``p0_i = 1 - n_i / N_t``. For each candidate ``mu`` the Weibull of every
    year is refitted to its excesses over ``mu``. ``mu`` is searched on
    ``[0, 0.95 * min(maxima)]``: a coarse scan picks the best neighbourhood,
    then golden-section refines it. The result is never worse than ``mu = 0``,
    and ties go to the smaller ``mu``.
    """
    blocks = [b for b in blocks if b.n_events >= min_events]
    if len(blocks) < 3:
        raise DataError(f"DA18 fit needs at least 3 usable years, got {len(blocks)}")
    if maxima is None:
        maxima = [b.maximum for b in blocks]
    maxima = np.asarray(maxima, dtype=float)
    if maxima.size == 0 or not np.all(np.isfinite(maxima)):
        raise DataError("DA18 fit needs finite annual maxima")

    cache = {}

    def objective(mu):
        if mu not in cache:
            model = _da18_at(blocks, mu, N_t, method, min_events)
            cache[mu] = (math.inf, None) if model is None else (ks_statistic(model.cdf, maxima),
                                                                model)
        return cache[mu][0]

    upper = 0.95 * float(maxima.min())
    if not math.isfinite(objective(0.0)):
        raise NumericalError("KS objective is not finite at mu = 0")
    if upper > 0:
        grid = np.linspace(0.0, upper, scan_points)
        values = [objective(float(m)) for m in grid]
        best = int(np.argmin(values))
        a = float(grid[max(best - 1, 0)])
        b = float(grid[min(best + 1, grid.size - 1)])
        c = b - GOLDEN * (b - a)
        d = a + GOLDEN * (b - a)
        while (b - a) > rel_tol * upper:
            if objective(c) <= objective(d):
                b, d = d, c
                c = b - GOLDEN * (b - a)
            else:
                a, c = c, d
                d = a + GOLDEN * (b - a)

    # smallest mu among the minimisers seen
    best_ks = min(v for v, _ in cache.values())
    mu = min(m for m, (v, _) in cache.items() if v == best_ks)
    if not math.isfinite(best_ks):
        raise NumericalError("KS objective is not finite")
    model = cache[mu][1]
    return Da18Model(model.years, N_t=model.N_t, mu=mu, labels=model.labels, ks=best_ks)
