"""The MEVD: per-year maximum CDF, the S-year sample-average CDF, order
statistics, quantile inversion, and return-level tables."""
from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq
from scipy.special import gammaln

from . import kernels
from .distributions import GevParams, WeibullParams, gev_quantile, weibull_logcdf
from .errors import DegenerateModelError, DomainError, NumericalError

PROB_TOL = 1e-10


def _scalar_or_array(value, like):
    return float(value) if np.ndim(like) == 0 else value


def _check_open_unit(p):
    if not (0.0 < p < 1.0):
        raise DomainError(f"probability must lie in (0, 1), got {p}")


@dataclass(frozen=True)
class MevdModel:
    """S yearly (Weibull parameters, event count) pairs.

    ``years`` optionally labels the entries; ``method`` records the estimator.
    """

    entries: tuple
    years: tuple | None = None
    method: str | None = None

    def __post_init__(self):
        entries = tuple((theta, int(n)) for theta, n in self.entries)
        if not entries:
            raise DomainError("MevdModel needs at least one entry")
        for theta, n in entries:
            if not isinstance(theta, WeibullParams):
                raise DomainError(f"entry parameters must be WeibullParams, got {theta!r}")
            if n < 0:
                raise DomainError(f"event counts must be >= 0, got {n}")
        object.__setattr__(self, "entries", entries)
        if self.years is not None:
            years = tuple(int(y) for y in self.years)
            if len(years) != len(entries):
                raise DomainError("years must label every entry")
            object.__setattr__(self, "years", years)
        if any(n == 0 for _, n in entries):
            warnings.warn("MEVD model has years with n=0; they hold the CDF at or above "
                          f"{self.n_zero_years}/{self.S} everywhere", stacklevel=3)

    @property
    def S(self):
        return len(self.entries)

    @property
    def n_zero_years(self):
        return sum(1 for _, n in self.entries if n == 0)

    @cached_property
    def _grouped(self):
        # identical (C, w, mu, n) rows collapse to one weighted row
        rows = np.array([(t.scale_C, t.shape_w, t.position_mu, n) for t, n in self.entries])
        uniq, counts = np.unique(rows, axis=0, return_counts=True)
        return (np.ascontiguousarray(uniq[:, 0]), np.ascontiguousarray(uniq[:, 1]),
                np.ascontiguousarray(uniq[:, 2]), np.ascontiguousarray(uniq[:, 3]),
                counts.astype(float))

    def cdf(self, x):
        C, w, mu, n, weight = self._grouped
        out = kernels.power_mixture(np.asarray(x, dtype=float), C, w, mu, n, weight)
        return _scalar_or_array(np.clip(out, 0.0, 1.0), x)

    def quantile(self, p):
        return mevd_quantile(self, p)

    @property
    def tag(self):
        return "MEVD"


def annual_max_cdf(theta: WeibullParams, n, x):
    """``F(x | theta) ** n`` in log space; 1 for n = 0."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        return _scalar_or_array(np.ones(np.shape(x)), x)
    a = n * np.asarray(weibull_logcdf(theta, x))
    out = np.where(a > kernels._kernels_py.LOG_TINY, np.exp(a), 0.0)
    return _scalar_or_array(out, x)


def mevd_cdf(model: MevdModel, x):
    return model.cdf(x)


def count_below_pmf(theta: WeibullParams, n, x):
    """P(exactly j of n i.i.d. magnitudes are <= x) for j = 0..n.

    The last axis indexes j.
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    x_arr = np.asarray(x, dtype=float)[..., None]
    t = kernels.weibull_logsf_power(x_arr, theta.scale_C, theta.shape_w, theta.position_mu)
    logF = kernels.log_cdf_from_t(t)
    j = np.arange(n + 1, dtype=float)
    logc = gammaln(n + 1.0) - gammaln(j + 1.0) - gammaln(n - j + 1.0)
    with np.errstate(invalid="ignore"):
        part = np.where(j > 0, j * logF, 0.0)
    # log(1 - F) = -t exactly
    return np.exp(logc + part - (n - j) * t)


def order_statistic_cdf(theta: WeibullParams, n, k, x):
    """P(k-th smallest of n magnitudes <= x) = sum_{j>=k} C(n,j) F^j (1-F)^(n-j)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 1 <= k <= n:
        raise DomainError(f"k must lie in [1, {n}], got {k}")
    pmf = count_below_pmf(theta, n, x)
    out = np.minimum(pmf[..., k:].sum(axis=-1), 1.0)
    return _scalar_or_array(out, x)


def _per_year_quantile(theta, n, p):
    # Weibull quantile at p**(1/n), formed without rounding p**(1/n) to 1
    t = -np.log(-np.expm1(np.log(p) / n))
    return theta.position_mu + theta.scale_C * t ** (1.0 / theta.shape_w)


def mevd_quantile(model: MevdModel, p):
    """Smallest x with ``mevd_cdf(x) >= p``, solved by Brent's method."""
    p = float(p)
    _check_open_unit(p)
    active = [(theta, n) for theta, n in model.entries if n > 0]
    if not active:
        raise DegenerateModelError("degenerate model: every year has zero events")
    lo = min(theta.position_mu for theta, _ in active)
    if model.cdf(lo) >= p:
        return lo
    max_n = max(n for _, n in active)
    hi = max(_per_year_quantile(theta, max_n, p) for theta, _ in active)
    if not hi > lo:
        hi = lo + 1.0
    for _ in range(2000):
        if model.cdf(hi) > p:
            break
        hi = lo + 2.0 * (hi - lo)
    else:
        raise NumericalError(f"could not bracket the {p} quantile")
    x = brentq(lambda v: model.cdf(v) - p, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps,
               maxiter=500)
    if abs(model.cdf(x) - p) > PROB_TOL:
        raise NumericalError(f"quantile residual {abs(model.cdf(x) - p):.3g} above {PROB_TOL}")
    return float(x)


@dataclass(frozen=True)
class ReturnLevelRow:
    T_r: float
    quantile_p: float
    level: float
    model_tag: str
    error: str | None = None


@dataclass(frozen=True)
class ReturnLevelTable:
    rows: tuple

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def levels(self, model_tag=None):
        return [r.level for r in self.rows if model_tag is None or r.model_tag == model_tag]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["model", "T_r", "p", "level"])
        for r in self.rows:
            writer.writerow([r.model_tag, repr(r.T_r), repr(r.quantile_p),
                             "NA" if r.error else repr(r.level)])
        return buf.getvalue()

    def to_json(self):
        rows = []
        for r in self.rows:
            row = {"model": r.model_tag, "T_r": r.T_r, "p": r.quantile_p,
                   "level": None if r.error else r.level}
            if r.error:
                row["error"] = r.error
            rows.append(row)
        return json.dumps({"rows": rows}, indent=2) + "\n"

    def __add__(self, other):
        return ReturnLevelTable(self.rows + tuple(other.rows))


def model_tag(model):
    if isinstance(model, GevParams):
        return "GEV"
    return model.tag


def model_quantile(model, p):
    if isinstance(model, GevParams):
        return float(gev_quantile(model, p))
    return model.quantile(p)


def return_levels(model, T_r, tag=None) -> ReturnLevelTable:
    """Levels with annual non-exceedance probability ``1 - 1/T_r``.

    A row whose quantile fails carries the error text instead of a level.
    """
    periods = [float(t) for t in T_r]
    bad = [t for t in periods if not (t > 1 and math.isfinite(t))]
    if bad:
        raise DomainError(f"return periods must be finite and > 1, got {bad}")
    tag = tag or model_tag(model)
    rows = []
    for t in periods:
        p = 1.0 - 1.0 / t
        try:
            rows.append(ReturnLevelRow(t, p, model_quantile(model, p), tag))
        except (DomainError, DegenerateModelError, NumericalError) as exc:
            rows.append(ReturnLevelRow(t, p, math.nan, tag, str(exc)))
    return ReturnLevelTable(tuple(rows))
