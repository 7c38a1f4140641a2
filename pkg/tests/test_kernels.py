import mpmath as mp
import numpy as np
import pytest

from mevdist import _kernels_py, kernels
from mevdist.distributions import BinomialOccurrence, binomial_logpmf_table


def test_backend_is_reported():
    assert kernels.BACKEND in {"python", "cython"}


def test_log_cdf_branches(backend):
    t = np.array([0.0, 1e-300, 1e-8, 0.5, np.log(2.0), 3.0, 50.0, 800.0])
    got = backend.log_cdf_from_t(t)
    assert got[0] == -np.inf
    mp.mp.dps = 40
    want = [float(mp.log(-mp.expm1(-mp.mpf(v)))) for v in t[1:]]
    np.testing.assert_allclose(got[1:], want, rtol=1e-14, atol=0)


@pytest.mark.parametrize("x", [np.linspace(-1, 80, 37), np.array([3.0])])
def test_backends_agree_power_mixture(backend, x):
    C = np.array([9.0, 4.0, 12.0])
    w = np.array([0.8, 1.2, 0.6])
    mu = np.array([0.0, 0.5, 0.0])
    n = np.array([100.0, 0.0, 37.0])
    g = np.array([1.0, 2.0, 3.0])
    np.testing.assert_allclose(backend.power_mixture(x, C, w, mu, n, g),
                               _kernels_py.power_mixture(x, C, w, mu, n, g), rtol=1e-13,
                               atol=1e-300)


def test_backends_agree_binomial_mixture(backend):
    x = np.linspace(0, 300, 101)
    lp = binomial_logpmf_table(BinomialOccurrence(365, 0.7))
    np.testing.assert_allclose(backend.binomial_mixture(x, lp, 9.2, 0.78, 0.0),
                               _kernels_py.binomial_mixture(x, lp, 9.2, 0.78, 0.0), rtol=1e-13)


def test_backends_agree_da18_mixture(backend):
    x = np.linspace(0, 300, 101)
    p0 = np.array([0.7, 0.0, 1.0])
    C = np.array([9.2, 5.0, 7.0])
    w = np.array([0.78, 1.0, 0.9])
    mu = np.array([1.0, 1.0, 1.0])
    g = np.ones(3)
    np.testing.assert_allclose(backend.da18_mixture(x, p0, C, w, mu, 365.0, g),
                               _kernels_py.da18_mixture(x, p0, C, w, mu, 365.0, g), rtol=1e-13)


def test_markov_occupancy_bit_identical(backend, rng):
    u = rng.random((40, 365))
    got = backend.markov_occupancy(u, 0.2, 0.6, 0.3)
    assert got.dtype == np.uint8
    np.testing.assert_array_equal(got, _kernels_py.markov_occupancy(u, 0.2, 0.6, 0.3))


def test_markov_occupancy_rule_by_hand(backend):
    u = np.array([[0.1, 0.5, 0.65, 0.9, 0.15]])
    # wet (0.1<0.3), wet (0.5<p11), dry (0.65>p11), dry (0.9>p01), wet (0.15<p01)
    np.testing.assert_array_equal(backend.markov_occupancy(u, 0.2, 0.6, 0.3),
                                  [[1, 1, 0, 0, 1]])


@pytest.mark.parametrize("offset", [-1, 0])
def test_dispatch_matches_reference_across_threshold(offset):
    rng = np.random.default_rng(12)
    m = kernels.VECTOR_THRESHOLD + offset
    x = np.sort(rng.uniform(0, 200, m))
    S = 30
    C, w = rng.uniform(2, 20, S), rng.uniform(0.4, 1.6, S)
    mu, n, g = np.zeros(S), rng.integers(0, 200, S), np.ones(S)
    np.testing.assert_allclose(kernels.power_mixture(x, C, w, mu, n, g),
                               _kernels_py.power_mixture(x, C, w, mu, n, g), rtol=1e-12, atol=1e-300)
    p0 = rng.uniform(0, 1, S)
    np.testing.assert_allclose(kernels.da18_mixture(x, p0, C, w, mu, 365.0, g),
                               _kernels_py.da18_mixture(x, p0, C, w, mu, 365.0, g),
                               rtol=1e-12, atol=1e-300)
