"""Daily CSV parsing and calendar-year blocking."""
from __future__ import annotations

import calendar
import csv
import datetime as dt
import io
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DomainError

log = logging.getLogger(__name__)

DEFAULT_NA = ("", "NA")


@dataclass(frozen=True)
class DailySeries:
    """Dated daily values; missing days are NaN."""

    dates: tuple
    values: np.ndarray
    units_label: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (len(self.dates),):
            raise DataError("dates and values differ in length")
        if np.any(values[~np.isnan(values)] < 0) or np.any(np.isinf(values)):
            raise DataError("values must be missing or finite and non-negative")
        for a, b in zip(self.dates, self.dates[1:]):
            if b <= a:
                raise DataError(f"dates must be strictly increasing ({a} then {b})")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.dates)


@dataclass(frozen=True, eq=False)
class YearBlock:
    year: int
    n_events: int
    magnitudes: np.ndarray = field(repr=False)
    n_observed_days: int

    def __post_init__(self):
        mags = np.asarray(self.magnitudes, dtype=float)
        if mags.size != self.n_events:
            raise DataError("n_events must equal the number of magnitudes", year=self.year)
        if not self.n_events <= self.n_observed_days <= 366:
            raise DataError("need n_events <= n_observed_days <= 366", year=self.year)
        mags.setflags(write=False)
        object.__setattr__(self, "magnitudes", mags)

    def __eq__(self, other):
        if not isinstance(other, YearBlock):
            return NotImplemented
        return (self.year, self.n_events, self.n_observed_days) == (
            other.year, other.n_events, other.n_observed_days) and np.array_equal(
            self.magnitudes, other.magnitudes)

    __hash__ = None

    @property
    def maximum(self):
        """Largest magnitude, or None for a year without events."""
        return float(self.magnitudes.max()) if self.n_events else None


def _open_text(stream):
    if isinstance(stream, (bytes, bytearray)):
        return io.StringIO(bytes(stream).decode("utf-8-sig"), newline="")
    if isinstance(stream, str):
        return io.StringIO(stream, newline="")
    if isinstance(stream, io.TextIOBase):
        return stream
    return io.TextIOWrapper(stream, encoding="utf-8-sig", newline="")


def parse_daily_csv(stream, na_values=DEFAULT_NA, units_label="", source=None) -> DailySeries:
    """Parse ``date,value`` rows (ISO dates) into a :class:`DailySeries`.

    ``stream`` may be bytes, text, or a binary/text file object. A leading
    ``date,value`` header is skipped. Values listed in ``na_values`` (after
    stripping whitespace) are missing.
    """
    na = {s.strip() for s in na_values}
    dates, values = [], []
    reader = csv.reader(_open_text(stream))
    for lineno, row in enumerate(reader, start=1):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 2:
            raise DataError(f"expected 2 fields, got {len(row)}", line=lineno, source=source)
        raw_date, raw_value = row[0].strip(), row[1].strip()
        if lineno == 1 and raw_date.lower() == "date" and raw_value.lower() == "value":
            continue
        try:
            day = dt.date.fromisoformat(raw_date)
        except ValueError:
            raise DataError(f"bad ISO date {raw_date!r}", line=lineno, source=source) from None
        if raw_value in na:
            value = np.nan
        else:
            try:
                value = float(raw_value)
            except ValueError:
                raise DataError(f"bad value {raw_value!r}", line=lineno, source=source) from None
            if not np.isfinite(value):
                raise DataError(f"non-finite value {raw_value!r}", line=lineno, source=source)
            if value < 0:
                raise DataError(f"negative value {value}", line=lineno, source=source)
        if dates and day <= dates[-1]:
            kind = "duplicate" if day == dates[-1] else "decreasing"
            raise DataError(f"{kind} date {day}", line=lineno, source=source)
        dates.append(day)
        values.append(value)
    return DailySeries(tuple(dates), np.array(values, dtype=float), units_label)


def _year_slices(series):
    years = np.fromiter((d.year for d in series.dates), dtype=np.int64, count=len(series))
    # dates are strictly increasing, so each year is one contiguous run
    uniq, starts = np.unique(years, return_index=True)
    ends = np.append(starts[1:], years.size)
    return [(int(y), slice(int(a), int(b))) for y, a, b in zip(uniq, starts, ends)]


def coverage_by_year(series: DailySeries) -> dict:
    """Fraction of non-missing days per calendar year present in the series."""
    out = {}
    for year, sl in _year_slices(series):
        count = int(np.count_nonzero(~np.isnan(series.values[sl])))
        out[year] = count / (366 if calendar.isleap(year) else 365)
    return out


def blockify(series: DailySeries, wet_threshold=0.0, min_coverage=0.9) -> list:
    """Split a series into calendar-year :class:`YearBlock` objects.

    Events are values strictly greater than ``wet_threshold``. Years whose
    fraction of non-missing days is below ``min_coverage`` are dropped and
    logged; no imputation is done.
    """
    if not (np.isfinite(wet_threshold) and wet_threshold >= 0):
        raise DomainError(f"wet_threshold must be >= 0, got {wet_threshold}")
    if not 0.0 <= min_coverage <= 1.0:
        raise DomainError(f"min_coverage must lie in [0, 1], got {min_coverage}")

    blocks, dropped = [], []
    for year, sl in _year_slices(series):
        v = series.values[sl]
        v = v[~np.isnan(v)]
        if v.size / (366 if calendar.isleap(year) else 365) < min_coverage:
            dropped.append(year)
            continue
        mags = v[v > wet_threshold]
        blocks.append(YearBlock(int(year), int(mags.size), mags, int(v.size)))
    if dropped:
        log.warning("dropped %d year(s) below coverage %.3f: %s", len(dropped), min_coverage,
                    ", ".join(map(str, dropped)))
    if not blocks:
        raise DataError(f"no year meets min_coverage={min_coverage}")
    return blocks


def annual_maxima(blocks) -> np.ndarray:
    """Maxima of years that have at least one event."""
    return np.array([b.maximum for b in blocks if b.n_events], dtype=float)
