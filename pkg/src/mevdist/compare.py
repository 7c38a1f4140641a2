"""Short-window skill of MEVD, DA18 and GEV return levels against a known truth."""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, MevdError
from .fitting import ExcludedYearWarning, fit_gev_annual_maxima, fit_station
from .mevd import model_quantile
from .superstat import fit_da18

MODELS = ("MEVD", "DA18", "GEV")


@dataclass(frozen=True)
class CompareRow:
    model: str
    T_r: float
    S: int
    mean_rel_err: float
    q05: float
    q95: float
    n_windows: int
    n_failed: int


def window_starts(n_years, window, overlap=False):
    if window < 1 or window > n_years:
        raise DomainError(f"window of {window} years does not fit a {n_years}-year record")
    step = 1 if overlap else window
    return list(range(0, n_years - window + 1, step))


def _fit_gev(blocks):
    report = fit_gev_annual_maxima([b.maximum if b.n_events else 0.0 for b in blocks])
    return report.params if report.converged else None


_FITTERS = {
    "MEVD": lambda blocks, estimator: fit_station(blocks, estimator),
    "DA18": lambda blocks, estimator: fit_da18(blocks, method=estimator),
    "GEV": lambda blocks, estimator: _fit_gev(blocks),
}


def _fit_all(blocks, estimator, models):
    """Fit each requested model; a model whose fit fails maps to None."""
    fitted = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ExcludedYearWarning)
        for m in models:
            try:
                fitted[m] = _FITTERS[m](blocks, estimator)
            except MevdError:
                fitted[m] = None
    return fitted


def window_errors(blocks, window, T_r, truth, estimator="pwm", overlap=False, models=MODELS):
    """Absolute relative errors ``|level - truth| / truth`` per model, T_r and window.

    Returns ``{(model, T_r): array over windows}``; a failed fit gives NaN.
    """
    periods = [float(t) for t in T_r]
    errors = {(m, t): [] for m in models for t in periods}
    for start in window_starts(len(blocks), window, overlap):
        sub = blocks[start:start + window]
        fitted = _fit_all(sub, estimator, models)
        for m in models:
            model = fitted[m]
            for t in periods:
                try:
                    level = model_quantile(model, 1.0 - 1.0 / t) if model is not None else math.nan
                except MevdError:
                    level = math.nan
                errors[(m, t)].append(abs(level - truth[t]) / truth[t])
    return {k: np.array(v) for k, v in errors.items()}


def compare_windows(blocks, window, T_r, truth, estimator="pwm", overlap=False, models=MODELS):
    errors = window_errors(blocks, window, T_r, truth, estimator, overlap, models)
    rows = []
    for (m, t), err in errors.items():
        ok = err[np.isfinite(err)]
        if ok.size:
            q05, q95 = np.quantile(ok, [0.05, 0.95])
            mean = ok.mean()
        else:
            mean = q05 = q95 = math.nan
        rows.append(CompareRow(m, t, window, float(mean), float(q05), float(q95), err.size,
                               int(err.size - ok.size)))
    return rows


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["model", "T_r", "S", "mean_rel_err", "q05", "q95"])
    for r in rows:
        writer.writerow([r.model, repr(r.T_r), r.S, repr(r.mean_rel_err), repr(r.q05),
                         repr(r.q95)])
    return buf.getvalue()
