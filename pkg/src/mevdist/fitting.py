"""Weibull (PWM / MLE) and GEV (L-moment) estimators and per-station MEVD fitting."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma

from .distributions import GevParams, WeibullParams
from .errors import DataError, DomainError
from .mevd import MevdModel

EULER_GAMMA = 0.5772156649015329
MLE_MAX_ITER = 200
MLE_SCORE_TOL = 1e-10


class Method(str, enum.Enum):
    PWM = "PWM"
    MLE = "MLE"
    LMOM = "LMOM"


def _method(method):
    if isinstance(method, Method):
        return method
    try:
        return Method(str(method).upper())
    except ValueError:
        raise DomainError(f"unknown estimator {method!r}") from None


class ExcludedYearWarning(UserWarning):
    """A year was left out of a fitted model."""


@dataclass(frozen=True)
class FitReport:
    params: WeibullParams | GevParams | None
    method: Method
    n_used: int
    converged: bool
    log_likelihood: float | None = None
    message: str = ""


def weibull_loglik(sample, C, w):
    x = np.asarray(sample, dtype=float)
    z = x / C
    return float(x.size * math.log(w / C) + (w - 1.0) * np.sum(np.log(z)) - np.sum(z ** w))


def _check_sample(sample):
    x = np.asarray(sample, dtype=float).ravel()
    if x.size < 2:
        raise DomainError(f"Weibull fit needs at least 2 values, got {x.size}")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("Weibull fit needs finite, strictly positive values")
    return x


def fit_weibull_pwm(sample) -> FitReport:
    """Two-parameter Weibull from the first two probability-weighted moments.

    With ``a1 = E[X (1 - F(X))] = C Gamma(1 + 1/w) / 2**(1 + 1/w)`` and
    ``b0 = E[X] = C Gamma(1 + 1/w)``, the shape follows from ``b0 / a1`` and
    the scale from ``b0``.
    """
    x = np.sort(_check_sample(sample))
    n = x.size
    b0 = x.mean()
    b1 = np.dot(np.arange(n), x) / (n * (n - 1))
    a1 = b0 - b1
    ratio = b0 / (2.0 * a1) if a1 > 0 else math.inf
    if not (math.isfinite(ratio) and ratio > 1.0):
        return FitReport(None, Method.PWM, n, False, message="degenerate sample")
    w = math.log(2.0) / math.log(ratio)
    C = b0 / gamma(1.0 + 1.0 / w)
    if not (math.isfinite(w) and math.isfinite(C) and C > 0):
        return FitReport(None, Method.PWM, n, False, message="non-finite PWM estimate")
    return FitReport(WeibullParams(C, w), Method.PWM, n, True, weibull_loglik(x, C, w))


def _profile_score(w, ly):
    """Profile score of the shape and its derivative; ``ly = log(x / max x) <= 0``."""
    yw = np.exp(w * ly)
    s0 = yw.sum()
    s1 = np.dot(yw, ly)
    s2 = np.dot(yw, ly * ly)
    g = s1 / s0 - 1.0 / w - ly.mean()
    dg = (s2 * s0 - s1 * s1) / (s0 * s0) + 1.0 / (w * w)
    return g, dg


def fit_weibull_mle(sample, w0=1.0) -> FitReport:
    """Maximum-likelihood Weibull fit.

    The shape solves the profile-likelihood equation by safeguarded Newton
    inside an expanding bracket; the scale then has a closed form.
    """
    x = _check_sample(sample)
    n = x.size
    xmax = x.max()
    if np.all(x == xmax):
        return FitReport(None, Method.MLE, n, False, message="degenerate sample")
    ly = np.log(x / xmax)

    lo, hi = w0, w0
    iters = 0
    while _profile_score(lo, ly)[0] > 0:
        lo /= 2.0
        iters += 1
    while _profile_score(hi, ly)[0] < 0:
        hi *= 2.0
        iters += 1
    if iters > MLE_MAX_ITER:
        return FitReport(None, Method.MLE, n, False, message="could not bracket shape")

    w = 0.5 * (lo + hi)
    converged = False
    for _ in range(MLE_MAX_ITER):
        g, dg = _profile_score(w, ly)
        if abs(g) <= MLE_SCORE_TOL:
            converged = True
            break
        if g < 0:
            lo = w
        else:
            hi = w
        step = w - g / dg
        w = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4 * np.finfo(float).eps * hi:
            converged = abs(_profile_score(w, ly)[0]) <= MLE_SCORE_TOL * 1e3
            break
    if not converged:
        return FitReport(None, Method.MLE, n, False, message="shape iteration did not converge")
    C = xmax * np.mean(np.exp(w * ly)) ** (1.0 / w)
    return FitReport(WeibullParams(C, w), Method.MLE, n, True, weibull_loglik(x, C, w))


def fit_weibull(sample, method="pwm") -> FitReport:
    method = _method(method)
    if method is Method.PWM:
        return fit_weibull_pwm(sample)
    if method is Method.MLE:
        return fit_weibull_mle(sample)
    raise DomainError(f"no Weibull estimator for {method.value}")


def sample_lmoments(sample):
    """First three sample L-moments (l1, l2, l3) via unbiased PWMs."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    i = np.arange(n, dtype=float)
    b0 = x.mean()
    b1 = np.dot(i, x) / (n * (n - 1))
    b2 = np.dot(i * (i - 1), x) / (n * (n - 1) * (n - 2))
    return b0, 2 * b1 - b0, 6 * b2 - 6 * b1 + b0


def fit_gev_annual_maxima(maxima) -> FitReport:
    """GEV by L-moments using Hosking's rational approximation for the shape."""
    x = np.asarray(maxima, dtype=float).ravel()
    if x.size < 5:
        raise DomainError(f"GEV fit needs at least 5 maxima, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DomainError("GEV fit needs finite maxima")
    l1, l2, l3 = sample_lmoments(x)
    if not l2 > 1e-12 * max(abs(l1), 1.0):
        return FitReport(None, Method.LMOM, x.size, False, message="degenerate sample")
    t3 = l3 / l2
    c = 2.0 / (3.0 + t3) - math.log(2.0) / math.log(3.0)
    k = 7.8590 * c + 2.9554 * c * c
    if abs(k) < 1e-9:
        scale = l2 / math.log(2.0)
        loc = l1 - EULER_GAMMA * scale
    else:
        g = gamma(1.0 + k)
        scale = l2 * k / ((1.0 - 2.0 ** (-k)) * g)
        loc = l1 - scale * (1.0 - g) / k
    if not (math.isfinite(scale) and scale > 0 and math.isfinite(loc)):
        return FitReport(None, Method.LMOM, x.size, False, message="non-finite L-moment estimate")
    return FitReport(GevParams(loc, scale, -k), Method.LMOM, x.size, True)


def fit_station(blocks, method="pwm", min_events=2, pooled_fallback=False) -> MevdModel:
    """One Weibull fit per year, kept with that year's event count.

    Years with fewer than ``min_events`` events (or whose fit fails) are
    excluded with an :class:`ExcludedYearWarning`. With ``pooled_fallback``
    they instead get parameters fitted on all magnitudes pooled together,
    keeping their true event count.
    """
    method = _method(method)
    entries, years, short = [], [], []
    for block in blocks:
        if block.n_events < min_events:
            short.append(block)
            continue
        report = fit_weibull(block.magnitudes, method)
        if not report.converged:
            warnings.warn(f"year {block.year}: {method.value} fit failed ({report.message}); "
                          "excluded", ExcludedYearWarning, stacklevel=2)
            continue
        entries.append((report.params, block.n_events))
        years.append(block.year)

    if short and pooled_fallback:
        pooled = np.concatenate([b.magnitudes for b in blocks]) if blocks else np.empty(0)
        report = fit_weibull(pooled, method) if pooled.size >= 2 else None
        if report is None or not report.converged:
            raise DataError("pooled fallback fit failed")
        for block in short:
            entries.append((report.params, block.n_events))
            years.append(block.year)
        order = np.argsort(years, kind="stable")
        entries = [entries[i] for i in order]
        years = [years[i] for i in order]
    elif short:
        warnings.warn(f"{len(short)} year(s) with fewer than {min_events} events excluded: "
                      + ", ".join(str(b.year) for b in short), ExcludedYearWarning, stacklevel=2)
    if not entries:
        raise DataError("no usable years for the MEVD fit")
    return MevdModel(tuple(entries), years=tuple(years), method=method.value)
