"""Doubly stochastic daily series generator used as a Monte Carlo oracle.

Random stream layout (generator version ``RNG_VERSION``): years are grouped
in blocks of ``YEARS_PER_STREAM``; block b draws from
``PCG64(SeedSequence(seed, spawn_key=(b,)))``. Only ``Generator.random`` is
called, once per block, for a (years, 2 + 2 N_T) array. Row y belongs to
year y: column 0 drives C, column 1 drives w, the next N_T columns drive
occupancy and the last N_T turn into Weibull magnitudes by inversion (used
on wet days only). Everything else is a deterministic transform, so a
station can be regenerated exactly from this description, and a shorter
run is always a prefix of a longer one with the same seed.
"""
from __future__ import annotations

import calendar
import datetime as dt
import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

from . import kernels
from .distributions import WeibullParams, empirical_cdf
from .errors import DataError, DomainError
from .ingest import YearBlock
from .mevd import MevdModel

RNG_VERSION = "pcg64-seedseq-block1000-rowmajor-v2"
YEARS_PER_STREAM = 1000
ORACLE_MIN_SIZE = 100


class OccurrenceKind(str, enum.Enum):
    BINOMIAL = "binomial"
    MARKOV1 = "markov1"


@dataclass(frozen=True)
class OccurrenceSpec:
    """Daily wet/dry process over ``N_T`` days per year.

    BINOMIAL: each day dry with probability ``p0``. MARKOV1: ``p01`` =
    P(wet | previous dry), ``p11`` = P(wet | previous wet), and the first day
    is wet with probability ``p_init``.
    """

    kind: OccurrenceKind
    N_T: int = 365
    p0: float | None = None
    p01: float | None = None
    p11: float | None = None
    p_init: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", OccurrenceKind(self.kind))
        if int(self.N_T) != self.N_T or self.N_T < 1:
            raise DomainError(f"N_T must be a positive integer, got {self.N_T}")
        object.__setattr__(self, "N_T", int(self.N_T))
        if self.kind is OccurrenceKind.BINOMIAL:
            names = ("p0",)
        else:
            names = ("p01", "p11", "p_init")
            if self.p_init is None and self.p01 is not None and self.p11 is not None:
                object.__setattr__(self, "p_init", self.stationary_wet_fraction)
        for name in names:
            value = getattr(self, name)
            if value is None or not 0.0 <= float(value) <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {value}")
            object.__setattr__(self, name, float(value))

    @classmethod
    def binomial(cls, p0, N_T=365):
        return cls(OccurrenceKind.BINOMIAL, N_T, p0=p0)

    @classmethod
    def markov1(cls, p01=0.2, p11=0.5, p_init=None, N_T=365):
        # default transition probabilities are illustrative, not fitted to any climate
        return cls(OccurrenceKind.MARKOV1, N_T, p01=p01, p11=p11, p_init=p_init)

    @property
    def stationary_wet_fraction(self):
        if self.kind is OccurrenceKind.BINOMIAL:
            return 1.0 - self.p0
        denom = self.p01 + 1.0 - self.p11
        return self.p01 / denom if denom > 0 else 0.0

    def to_dict(self):
        d = {"kind": self.kind.value, "N_T": self.N_T}
        for name in ("p0", "p01", "p11", "p_init"):
            if getattr(self, name) is not None:
                d[name] = getattr(self, name)
        return d


@dataclass(frozen=True)
class HyperParams:
    """Year-to-year Weibull parameters: lognormal C, positive-truncated normal w.

    Zero spreads give fixed parameters. Defaults are a testing device.
    """

    C_median: float = 9.0
    C_log_sd: float = 0.2
    w_mean: float = 0.8
    w_sd: float = 0.08

    def __post_init__(self):
        if not (self.C_median > 0 and self.C_log_sd >= 0 and self.w_mean > 0 and self.w_sd >= 0):
            raise DomainError("need C_median > 0, w_mean > 0 and non-negative spreads")

    @classmethod
    def fixed(cls, C, w):
        return cls(C, 0.0, w, 0.0)

    def transform(self, u_c, u_w):
        """Map uniforms to (C, w) arrays."""
        C = self.C_median * np.exp(self.C_log_sd * ndtri(u_c)) if self.C_log_sd else \
            np.full(np.shape(u_c), float(self.C_median))
        if self.w_sd:
            lo = ndtr(-self.w_mean / self.w_sd)
            w = self.w_mean + self.w_sd * ndtri(lo + u_w * (1.0 - lo))
            w = np.maximum(w, np.finfo(float).tiny)
        else:
            w = np.full(np.shape(u_w), float(self.w_mean))
        return C, w

    def to_dict(self):
        return {"C_median": self.C_median, "C_log_sd": self.C_log_sd,
                "w_mean": self.w_mean, "w_sd": self.w_sd}


def _check_seed(seed):
    if int(seed) != seed or not 0 <= seed < 2 ** 64:
        raise DomainError(f"seed must be an integer in [0, 2**64), got {seed}")
    return int(seed)


def _stream(seed, block):
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _simulate_block(occ, hyper, seed, block, n_years):
    """Draw one stream block: (C, w, wet mask, daily values)."""
    rng = _stream(seed, block)
    N = occ.N_T
    u = rng.random((n_years, 2 + 2 * N))
    # random() is on [0, 1); nudge off 0 so ndtri and log stay finite
    C, w = hyper.transform(np.maximum(u[:, 0], 1e-300), u[:, 1])
    u_occ = u[:, 2:2 + N]
    if occ.kind is OccurrenceKind.BINOMIAL:
        wet = u_occ < 1.0 - occ.p0
    else:
        wet = kernels.markov_occupancy(u_occ, occ.p01, occ.p11, occ.p_init).astype(bool)
    u_mag = np.maximum(u[:, 2 + N:][wet], 2.0 ** -53)
    rows = np.nonzero(wet)[0]
    values = np.zeros((n_years, N))
    values[wet] = C[rows] * np.power(-np.log1p(-u_mag), 1.0 / w[rows])
    return C, w, wet, values


def _blocks(years):
    for block, start in enumerate(range(0, years, YEARS_PER_STREAM)):
        yield block, min(YEARS_PER_STREAM, years - start)


@dataclass(frozen=True)
class SyntheticStation:
    values: np.ndarray = field(repr=False)
    C: np.ndarray = field(repr=False)
    w: np.ndarray = field(repr=False)
    seed: int
    occurrence: OccurrenceSpec
    hyper: HyperParams
    start_year: int = 1900

    @property
    def years(self):
        return self.values.shape[0]

    @property
    def n_events(self):
        return np.count_nonzero(self.values > 0, axis=1)

    def true_params(self):
        return [WeibullParams(c, w) for c, w in zip(self.C, self.w)]

    def true_mevd_model(self):
        """MEVD built from the generating (theta_i, n_i) of every year."""
        return MevdModel(tuple(zip(self.true_params(), self.n_events.tolist())),
                         years=tuple(range(self.start_year, self.start_year + self.years)))

    def to_blocks(self):
        blocks = []
        for i, row in enumerate(self.values):
            mags = row[row > 0]
            blocks.append(YearBlock(self.start_year + i, int(mags.size), mags, row.size))
        return blocks

    def write_csv(self, fh):
        """Write ``date,value`` rows. Calendar days beyond N_T are written as NA."""
        if self.occurrence.N_T > 365:
            raise DataError("CSV export needs N_T <= 365")
        last = self.start_year + self.years - 1
        if self.start_year < 1 or last > 9999:
            raise DataError(f"years {self.start_year}..{last} do not fit the ISO calendar")
        fh.write("date,value\n")
        one = dt.timedelta(days=1)
        for i, row in enumerate(self.values):
            year = self.start_year + i
            day = dt.date(year, 1, 1)
            ndays = 366 if calendar.isleap(year) else 365
            text = [repr(float(v)) if v > 0 else "0" for v in row]
            for d in range(ndays):
                fh.write(f"{day.isoformat()},{text[d] if d < row.size else 'NA'}\n")
                day += one


def simulate_station(occ: OccurrenceSpec, hyper: HyperParams, years, seed,
                     start_year=1900) -> SyntheticStation:
    """Simulate ``years`` years of daily values."""
    if int(years) != years or years < 1:
        raise DomainError(f"years must be a positive integer, got {years}")
    seed = _check_seed(seed)
    parts = [_simulate_block(occ, hyper, seed, b, n) for b, n in _blocks(int(years))]
    C = np.concatenate([p[0] for p in parts])
    w = np.concatenate([p[1] for p in parts])
    values = np.concatenate([p[3] for p in parts])
    for arr in (C, w, values):
        arr.setflags(write=False)
    return SyntheticStation(values, C, w, seed, occ, hyper, int(start_year))


@dataclass(frozen=True)
class MaximaSample:
    """Annual maxima of years with events; dry years are only counted.

    ``n_events``, ``C`` and ``w`` cover every simulated year (when known).
    """

    values: np.ndarray
    n_absent: int
    n_events: np.ndarray | None = field(default=None, repr=False)
    C: np.ndarray | None = field(default=None, repr=False)
    w: np.ndarray | None = field(default=None, repr=False)

    def true_mevd_model(self):
        return MevdModel(tuple((WeibullParams(c, w), int(n))
                               for c, w, n in zip(self.C, self.w, self.n_events)))


def _maxima_from_values(values):
    n_events = np.count_nonzero(values > 0, axis=1)
    return values.max(axis=1), n_events


def simulate_annual_maxima(occ: OccurrenceSpec, hyper: HyperParams, years, seed) -> MaximaSample:
    """Annual maxima of a station, streamed block by block.

    Identical to ``empirical_annual_maxima(simulate_station(...))`` for the
    same inputs, without holding the daily record in memory.
    """
    if int(years) != years or years < 1:
        raise DomainError(f"years must be a positive integer, got {years}")
    seed = _check_seed(seed)
    maxima, counts, Cs, ws = [], [], [], []
    for b, n in _blocks(int(years)):
        C, w, _, values = _simulate_block(occ, hyper, seed, b, n)
        m, k = _maxima_from_values(values)
        maxima.append(m)
        counts.append(k)
        Cs.append(C)
        ws.append(w)
    m = np.concatenate(maxima)
    k = np.concatenate(counts)
    return MaximaSample(m[k > 0], int(np.count_nonzero(k == 0)), k, np.concatenate(Cs),
                        np.concatenate(ws))


def empirical_annual_maxima(station: SyntheticStation) -> MaximaSample:
    m, k = _maxima_from_values(station.values)
    return MaximaSample(m[k > 0], int(np.count_nonzero(k == 0)), k, np.asarray(station.C),
                        np.asarray(station.w))


def oracle_cdf(maxima):
    """Empirical CDF of simulated maxima; refuses samples too small to certify anything."""
    values = maxima.values if isinstance(maxima, MaximaSample) else maxima
    values = np.asarray(values, dtype=float)
    if values.size < ORACLE_MIN_SIZE:
        raise DomainError(f"oracle needs at least {ORACLE_MIN_SIZE} maxima, got {values.size}")
    return empirical_cdf(values)


def oracle_return_levels(maxima, T_r):
    """Empirical (1 - 1/T_r) quantiles of simulated maxima, dry years included as zeros."""
    if isinstance(maxima, MaximaSample):
        values = np.concatenate([maxima.values, np.zeros(maxima.n_absent)])
    else:
        values = np.asarray(maxima, dtype=float)
    if values.size < ORACLE_MIN_SIZE:
        raise DomainError(f"oracle needs at least {ORACLE_MIN_SIZE} maxima, got {values.size}")
    return {float(t): float(np.quantile(values, 1.0 - 1.0 / t)) for t in T_r}
