import math

import numpy as np
import pytest

from mevdist.compare import compare_windows, rows_to_csv, window_errors, window_starts
from mevdist.errors import DomainError
from mevdist.fitting import fit_station
from mevdist.mevd import mevd_quantile
from mevdist.simulator import HyperParams, OccurrenceSpec, simulate_station


@pytest.fixture(scope="module")
def blocks():
    return simulate_station(OccurrenceSpec.binomial(0.7), HyperParams(), 40, 11).to_blocks()


def test_window_starts():
    assert window_starts(10, 5) == [0, 5]
    assert window_starts(23, 5) == [0, 5, 10, 15]
    assert window_starts(7, 5, overlap=True) == [0, 1, 2]
    assert window_starts(5, 5) == [0]
    for bad in (0, 6):
        with pytest.raises(DomainError):
            window_starts(5, bad)


def test_errors_are_absolute_relative(blocks):
    truth = {100.0: 150.0}
    err = window_errors(blocks, 10, [100], truth, models=("MEVD",))[("MEVD", 100.0)]
    assert err.shape == (4,)
    level = mevd_quantile(fit_station(blocks[10:20]), 0.99)
    assert err[1] == abs(level - 150.0) / 150.0


def test_failed_model_is_isolated(blocks):
    # 4 maxima are too few for the L-moment GEV fit, but enough for MEVD and DA18
    rows = {r.model: r for r in compare_windows(blocks, 4, [10], {10.0: 100.0})}
    assert rows["GEV"].n_failed == rows["GEV"].n_windows == 10 and math.isnan(rows["GEV"].mean_rel_err)
    assert rows["MEVD"].n_failed == 0 and rows["DA18"].n_failed == 0
    assert np.isfinite(rows["MEVD"].mean_rel_err)


def test_summaries(blocks):
    truth = {10.0: 100.0, 50.0: 160.0}
    errs = window_errors(blocks, 8, [10, 50], truth)
    rows = compare_windows(blocks, 8, [10, 50], truth)
    assert [(r.model, r.T_r) for r in rows] == list(errs)
    for r in rows:
        e = errs[(r.model, r.T_r)]
        assert r.n_windows == 5 and r.S == 8
        assert r.mean_rel_err == pytest.approx(np.mean(e), rel=1e-15)
        assert (r.q05, r.q95) == tuple(np.quantile(e, [0.05, 0.95]))


def test_csv(blocks):
    rows = compare_windows(blocks, 20, [10], {10.0: 100.0})
    lines = rows_to_csv(rows).splitlines()
    assert lines[0] == "model,T_r,S,mean_rel_err,q05,q95"
    fields = lines[1].split(",")
    assert fields[:3] == ["MEVD", "10.0", "20"] and float(fields[3]) == rows[0].mean_rel_err
