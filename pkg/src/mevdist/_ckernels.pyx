# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the kernels in ``_kernels_py``; same signatures."""
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, log1p, expm1, pow, INFINITY

cnp.import_array()

cdef double LN2 = 0.6931471805599453
cdef double LOG_TINY = log(1e-300)


cdef inline double _t(double x, double C, double w, double mu) nogil:
    cdef double z = (x - mu) / C
    if z > 0.0:
        return pow(z, w)
    return 0.0


cdef inline double _log_cdf(double t) nogil:
    if t <= 0.0:
        return -INFINITY
    if t < LN2:
        return log(-expm1(-t))
    return log1p(-exp(-t))


def weibull_logsf_power(x, double C, double w, double mu):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t j
    with nogil:
        for j in range(xv.shape[0]):
            ov[j] = _t(xv[j], C, w, mu)
    return out.reshape(np.shape(x))


def log_cdf_from_t(t):
    cdef double[::1] tv = np.ascontiguousarray(t, dtype=np.float64).ravel()
    out = np.empty(tv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t j
    with nogil:
        for j in range(tv.shape[0]):
            ov[j] = _log_cdf(tv[j])
    return out.reshape(np.shape(t))


def power_mixture(x, C, w, mu, n, weight):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double[::1] Cv = np.ascontiguousarray(C, dtype=np.float64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] mv = np.ascontiguousarray(mu, dtype=np.float64)
    cdef double[::1] nv = np.ascontiguousarray(n, dtype=np.float64)
    cdef double[::1] gv = np.ascontiguousarray(weight, dtype=np.float64)
    out = np.zeros(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double a, gsum = 0.0
    with nogil:
        for i in range(Cv.shape[0]):
            gsum += gv[i]
            if nv[i] == 0.0:
                for j in range(xv.shape[0]):
                    ov[j] += gv[i]
                continue
            for j in range(xv.shape[0]):
                a = nv[i] * _log_cdf(_t(xv[j], Cv[i], wv[i], mv[i]))
                if a > LOG_TINY:
                    ov[j] += gv[i] * exp(a)
        for j in range(xv.shape[0]):
            ov[j] /= gsum
    return out.reshape(np.shape(x))


def binomial_mixture(x, logpmf, double C, double w, double mu):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double[::1] lp = np.ascontiguousarray(logpmf, dtype=np.float64)
    out = np.empty(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t j, k, m = lp.shape[0]
    cdef double logF, a, amax, s
    with nogil:
        for j in range(xv.shape[0]):
            logF = _log_cdf(_t(xv[j], C, w, mu))
            amax = lp[0]
            for k in range(1, m):
                a = lp[k] + k * logF
                if a > amax:
                    amax = a
            s = 0.0
            if amax > -INFINITY:
                s = exp(lp[0] - amax)
                for k in range(1, m):
                    a = lp[k] + k * logF
                    if a > -INFINITY:
                        s += exp(a - amax)
            a = amax + log(s) if s > 0.0 else -INFINITY
            ov[j] = exp(a) if a > LOG_TINY else 0.0
    return out.reshape(np.shape(x))


def da18_mixture(x, p0, C, w, mu, double N_t, weight):
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef double[::1] pv = np.ascontiguousarray(p0, dtype=np.float64)
    cdef double[::1] Cv = np.ascontiguousarray(C, dtype=np.float64)
    cdef double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef double[::1] mv = np.ascontiguousarray(mu, dtype=np.float64)
    cdef double[::1] gv = np.ascontiguousarray(weight, dtype=np.float64)
    out = np.zeros(xv.shape[0])
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double a, t, base, gsum = 0.0
    with nogil:
        for i in range(pv.shape[0]):
            gsum += gv[i]
            for j in range(xv.shape[0]):
                t = _t(xv[j], Cv[i], wv[i], mv[i])
                if pv[i] == 0.0:
                    a = N_t * _log_cdf(t)
                else:
                    base = pv[i] - (1.0 - pv[i]) * expm1(-t)
                    if base < 0.5:
                        a = N_t * log(base)
                    else:
                        a = N_t * log1p(-(1.0 - pv[i]) * exp(-t))
                if a > LOG_TINY:
                    ov[j] += gv[i] * exp(a)
        for j in range(xv.shape[0]):
            ov[j] /= gsum
    return out.reshape(np.shape(x))


def markov_occupancy(u, double p01, double p11, double p_init):
    cdef double[:, ::1] uv = np.ascontiguousarray(u, dtype=np.float64)
    out = np.empty((uv.shape[0], uv.shape[1]), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] ov = out
    cdef Py_ssize_t y, d
    cdef bint state
    if uv.shape[1] == 0:
        return out
    with nogil:
        for y in range(uv.shape[0]):
            state = uv[y, 0] < p_init
            ov[y, 0] = state
            for d in range(1, uv.shape[1]):
                state = uv[y, d] < (p11 if state else p01)
                ov[y, d] = state
    return out
