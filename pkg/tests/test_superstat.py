import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mevdist.distributions import BinomialOccurrence, WeibullParams, weibull_cdf
from mevdist.errors import DataError, DomainError
from mevdist.ingest import YearBlock
from mevdist.mevd import annual_max_cdf
from mevdist.simulator import HyperParams, OccurrenceSpec, simulate_station
from mevdist.superstat import (Da18Model, _da18_at, closed_form_quantile, da18_annual_cdf,
                               da18_cdf, equivalence_grid, fit_da18, ks_statistic,
                               mevd_binomial_cdf, verify_equivalence)

THETA = WeibullParams(9.2, 0.78)


class TestDa18Annual:
    def test_lower_limit(self):
        theta = WeibullParams(5, 1.2, 2.0)
        for x in (-1.0, 0.0, 2.0):
            assert da18_annual_cdf(0.7, theta, 365, x) == pytest.approx(0.7 ** 365, rel=1e-12)

    def test_no_dry_days(self):
        x = np.linspace(0, 150, 61)
        np.testing.assert_allclose(da18_annual_cdf(0.0, THETA, 120, x),
                                   annual_max_cdf(THETA, 120, x), rtol=1e-15, atol=0)

    def test_extended_precision(self):
        # [0.7 + 0.3 F(100)]**365 to 50 digits
        assert da18_annual_cdf(0.7, THETA, 365, 100.0) == pytest.approx(0.83818552181794114497,
                                                                       rel=1e-13)

    @given(st.floats(0, 1), st.integers(1, 400))
    @settings(max_examples=50)
    def test_bounds_and_monotone(self, p0, N):
        v = da18_annual_cdf(p0, THETA, N, np.linspace(0, 400, 300))
        assert np.all(np.diff(v) >= -1e-15)
        floor = p0 ** N if p0 ** N > 1e-300 else 0.0  # below 1e-300 powers flush to 0
        assert np.all(v >= floor * (1 - 1e-12)) and np.all(v <= 1.0)


class TestDa18Model:
    def test_single_year(self):
        m = Da18Model(((0.7, THETA),))
        x = np.linspace(0, 150, 31)
        np.testing.assert_allclose(da18_cdf(m, x), da18_annual_cdf(0.7, THETA, 365, x), rtol=1e-15)

    def test_identical_years(self):
        a = Da18Model(((0.6, THETA),) * 4, mu=1.5)
        b = Da18Model(((0.6, THETA),), mu=1.5)
        x = np.linspace(0, 150, 31)
        np.testing.assert_allclose(a.cdf(x), b.cdf(x), rtol=1e-14)

    def test_floor(self):
        m = Da18Model(((0.6, THETA), (0.9, WeibullParams(3, 1))))
        x = np.linspace(-5, 300, 100)
        floor = np.mean([0.6 ** 365, 0.9 ** 365])
        assert np.all(m.cdf(x) >= floor * (1 - 1e-12))
        assert m.cdf(-1.0) == pytest.approx(floor, rel=1e-12)

    def test_quantile_round_trip(self):
        m = Da18Model(((0.6, THETA), (0.75, WeibullParams(12, 0.7))), mu=0.8)
        for p in (0.5, 0.9, 0.99, 0.999):
            assert abs(m.cdf(m.quantile(p)) - p) <= 1e-9

    def test_invalid(self):
        with pytest.raises(DomainError):
            Da18Model(((1.2, THETA),))
        with pytest.raises(DomainError):
            Da18Model(((0.5, THETA),), mu=-1)
        with pytest.raises(DomainError):
            Da18Model(())


class TestBinomialSum:
    def test_all_dry(self):
        occ = BinomialOccurrence(365, 1.0)
        np.testing.assert_array_equal(mevd_binomial_cdf(occ, THETA, np.array([0.0, 5.0, 1e3])), 1.0)

    def test_one_day_year(self):
        occ = BinomialOccurrence(1, 0.35)
        x = np.linspace(0, 80, 41)
        np.testing.assert_allclose(mevd_binomial_cdf(occ, THETA, x),
                                   0.35 + 0.65 * weibull_cdf(THETA, x), rtol=1e-14)

    def test_equals_closed_form(self):
        occ = BinomialOccurrence(365, 0.7)
        x = equivalence_grid(occ, THETA)
        np.testing.assert_allclose(mevd_binomial_cdf(occ, THETA, x),
                                   da18_annual_cdf(0.7, THETA, 365, x), rtol=0, atol=1e-12)


class TestVerifyEquivalence:
    def test_pass(self):
        occ = BinomialOccurrence(365, 0.55)
        theta = WeibullParams(5.0, 0.7)
        rep = verify_equivalence(equivalence_grid(occ, theta), occ, theta)
        assert rep.passed and rep.max_abs_dev <= 1e-10
        assert set(rep.to_dict()) == {"max_abs_dev", "argmax_x", "pass"}

    def test_no_dry_days_exact(self):
        occ = BinomialOccurrence(365, 0.0)
        rep = verify_equivalence(equivalence_grid(occ, THETA), occ, THETA)
        assert rep.max_abs_dev == 0.0

    def test_exact_small_case(self):
        # both sides as exact rationals in F and p0: a polynomial identity
        N = 3
        for p0 in (Fraction(0), Fraction(1, 7), Fraction(1, 2), Fraction(9, 10), Fraction(1)):
            for F in (Fraction(0), Fraction(1, 3), Fraction(5, 8), Fraction(1)):
                lhs = sum(math.comb(N, n) * p0 ** (N - n) * (1 - p0) ** n * F ** n
                          for n in range(N + 1))
                assert lhs == (p0 + (1 - p0) * F) ** N

    def test_corrupted_closed_form_fails(self):
        occ = BinomialOccurrence(365, 0.7)
        grid = equivalence_grid(occ, THETA)

        def corrupted(p0, theta, N_t, x):
            return da18_annual_cdf(p0, theta, N_t - 1, x)

        rep = verify_equivalence(grid, occ, THETA, closed_form=corrupted)
        assert not rep.passed
        dev = np.abs(mevd_binomial_cdf(occ, THETA, grid) - corrupted(0.7, THETA, 365, grid))
        assert rep.argmax_x == grid[np.argmax(dev)]

    def test_empty_grid(self):
        with pytest.raises(DomainError):
            verify_equivalence([], BinomialOccurrence(3, 0.5), THETA)

    def test_grid_covers_annual_maximum(self):
        occ = BinomialOccurrence(365, 0.7)
        grid = equivalence_grid(occ, THETA)
        assert grid.size == 1000
        z = da18_annual_cdf(0.7, THETA, 365, grid)
        assert z.min() < 1e-6 and z.max() == pytest.approx(0.9999, abs=1e-8)
        np.testing.assert_allclose(da18_annual_cdf(0.7, THETA, 365,
                                                   closed_form_quantile(occ, THETA, [0.3, 0.9])),
                                   [0.3, 0.9], rtol=1e-12)


class TestKs:
    def identity(self, x):
        return np.clip(x, 0, 1)

    def test_sample_at_quantiles(self):
        n = 37
        assert ks_statistic(self.identity, np.arange(1, n + 1) / (n + 1)) == pytest.approx(1 / (n + 1))

    def test_below_support(self):
        assert ks_statistic(self.identity, [-3.0, -2.0, -1.0]) == 1.0

    def test_uniform_sample(self):
        rng = np.random.default_rng(11)
        assert ks_statistic(self.identity, rng.random(10_000)) < 0.025

    def test_relabel_invariance(self, rng):
        x = rng.random(200)
        a = ks_statistic(self.identity, x)
        b = ks_statistic(lambda y: self.identity(np.log(y)), np.exp(x))
        assert a == pytest.approx(b, abs=1e-15)

    def test_matches_scipy(self, rng):
        from scipy.stats import kstest
        x = rng.weibull(0.8, 300) * 9
        assert ks_statistic(lambda v: weibull_cdf(WeibullParams(9, 0.8), v), x) == pytest.approx(
            kstest(x, lambda v: weibull_cdf(WeibullParams(9, 0.8), v)).statistic, rel=1e-12)

    def test_empty(self):
        with pytest.raises(DomainError):
            ks_statistic(self.identity, [])


class TestFitDa18:
    def blocks(self, years, seed):
        st_ = simulate_station(OccurrenceSpec.binomial(0.7), HyperParams(), years, seed)
        return st_.to_blocks()

    def test_p0_frequency(self, rng):
        blocks = [YearBlock(2000 + i, 100, rng.weibull(0.8, 100) * 9 + 0.01, 365) for i in range(4)]
        model = fit_da18(blocks)
        for p0, _ in model.years:
            assert p0 == pytest.approx(1 - 100 / 365, rel=1e-15)

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_never_worse_than_zero_position(self, seed):
        blocks = self.blocks(30, seed)
        maxima = [b.maximum for b in blocks]
        model = fit_da18(blocks, maxima)
        ks0 = ks_statistic(_da18_at(blocks, 0.0, 365, "pwm", 2).cdf, maxima)
        assert model.ks <= ks0
        assert model.ks == pytest.approx(ks_statistic(model.cdf, maxima), rel=1e-12)
        assert 0 <= model.mu <= 0.95 * min(maxima)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_zero_position_recovered(self, seed):
        blocks = self.blocks(200, seed)
        maxima = [b.maximum for b in blocks]
        model = fit_da18(blocks, maxima)
        # within one step of the coarse scan that sets the golden-section bracket
        assert model.mu <= 0.95 * min(maxima) / 10

    def test_needs_three_years(self, rng):
        blocks = [YearBlock(2000 + i, 50, rng.weibull(0.8, 50) * 9 + 0.01, 365) for i in range(2)]
        with pytest.raises(DataError):
            fit_da18(blocks)
