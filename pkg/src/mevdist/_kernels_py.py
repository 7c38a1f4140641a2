"""Pure numpy implementations of the hot kernels.

These are the reference versions; ``_ckernels.pyx`` mirrors them loop for
loop. Every function takes contiguous float64 arrays and returns new arrays.
"""
import numpy as np
from scipy.special import logsumexp

LN2 = np.log(2.0)
# Below this, F**n is treated as exactly zero.
LOG_TINY = np.log(1e-300)
_CHUNK = 1 << 16


def weibull_logsf_power(x, C, w, mu):
    """Return ``t = ((x - mu)/C)**w`` with ``t = 0`` where ``x <= mu``.

    ``exp(-t)`` is the survival function, so every other kernel works from t.
    """
    z = (np.asarray(x, dtype=np.float64) - mu) / C
    with np.errstate(over="ignore"):  # t = inf is exact: F = 1
        return np.where(z > 0.0, np.power(np.maximum(z, 0.0), w), 0.0)


def log_cdf_from_t(t):
    """Stable ``log(1 - exp(-t))``; ``-inf`` at t = 0."""
    t = np.asarray(t, dtype=np.float64)
    out = np.full(t.shape, -np.inf)
    small = (t > 0.0) & (t < LN2)
    large = t >= LN2
    out[small] = np.log(-np.expm1(-t[small]))
    out[large] = np.log1p(-np.exp(-t[large]))
    return out


def power_mixture(x, C, w, mu, n, weight):
    """Weighted mean over entries i of ``F_i(x)**n_i``.

    ``n_i = 0`` contributes 1 everywhere.
    """
    x = np.asarray(x, dtype=np.float64)
    total = np.zeros(x.shape)
    for Ci, wi, mui, ni, gi in zip(C, w, mu, n, weight):
        if ni == 0:
            total += gi
            continue
        a = ni * log_cdf_from_t(weibull_logsf_power(x, Ci, wi, mui))
        total += gi * np.where(a > LOG_TINY, np.exp(a), 0.0)
    return total / np.sum(weight)


def binomial_mixture(x, logpmf, C, w, mu):
    """``sum_n exp(logpmf[n]) * F(x)**n`` by log-sum-exp."""
    x = np.asarray(x, dtype=np.float64)
    logpmf = np.asarray(logpmf, dtype=np.float64)
    k = np.arange(logpmf.size, dtype=np.float64)
    out = np.empty(x.shape)
    flat_x = x.ravel()
    flat_out = out.reshape(-1)
    for start in range(0, flat_x.size, _CHUNK):
        logF = log_cdf_from_t(weibull_logsf_power(flat_x[start:start + _CHUNK], C, w, mu))
        with np.errstate(invalid="ignore"):
            a = logpmf[None, :] + k[None, :] * logF[:, None]
        a[:, 0] = logpmf[0]
        lse = logsumexp(a, axis=1)
        flat_out[start:start + _CHUNK] = np.where(lse > LOG_TINY, np.exp(lse), 0.0)
    return out


def da18_mixture(x, p0, C, w, mu, N_t, weight):
    """Weighted mean over years of ``[p0 + (1 - p0) F(x)]**N_t``."""
    x = np.asarray(x, dtype=np.float64)
    total = np.zeros(x.shape)
    for p0i, Ci, wi, mui, gi in zip(p0, C, w, mu, weight):
        t = weibull_logsf_power(x, Ci, wi, mui)
        total += gi * _da18_power(t, p0i, N_t)
    return total / np.sum(weight)


def markov_occupancy(u, p01, p11, p_init):
    """Wet/dry states from uniforms ``u`` of shape (years, days).

    Day 0 is wet iff ``u < p_init``; day d is wet iff ``u < p11`` after a
    wet day and ``u < p01`` after a dry day.
    """
    u = np.asarray(u, dtype=np.float64)
    out = np.empty(u.shape, dtype=np.uint8)
    if u.shape[1] == 0:
        return out
    state = u[:, 0] < p_init
    out[:, 0] = state
    for d in range(1, u.shape[1]):
        state = u[:, d] < np.where(state, p11, p01)
        out[:, d] = state
    return out


def _da18_power(t, p0, N_t):
    """``[p0 + (1 - p0) F]**N_t`` from ``t``; p0 = 0 reuses :func:`log_cdf_from_t` exactly."""
    if p0 == 0.0:
        logm = log_cdf_from_t(t)
    else:
        # p0 + (1 - p0) F has no cancellation; switch to log1p once it exceeds 1/2
        base = p0 - (1.0 - p0) * np.expm1(-t)
        with np.errstate(divide="ignore"):
            logm = np.where(base < 0.5, np.log(base), np.log1p(-(1.0 - p0) * np.exp(-t)))
    a = N_t * logm
    return np.where(a > LOG_TINY, np.exp(a), 0.0)
