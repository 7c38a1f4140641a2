import json

import numpy as np
import pytest

from mevdist import serialize
from mevdist.distributions import GevParams, WeibullParams
from mevdist.errors import DataError
from mevdist.mevd import MevdModel
from mevdist.superstat import Da18Model

X = np.linspace(0.0, 400.0, 97)


def roundtrip(d):
    return serialize.model_from_dict(json.loads(serialize.dumps(d)))


def test_mevd_roundtrip_is_exact():
    rng = np.random.default_rng(3)
    model = MevdModel([(WeibullParams(rng.uniform(1, 20), rng.uniform(0.4, 1.5), rng.uniform(0, 1)),
                        int(rng.integers(1, 200))) for _ in range(12)],
                      years=range(1990, 2002), method="MLE")
    back = roundtrip(serialize.mevd_to_dict(model))
    assert back.entries == model.entries and back.years == model.years and back.method == "MLE"
    np.testing.assert_array_equal(back.cdf(X), model.cdf(X))


def test_mevd_without_years():
    model = MevdModel([(WeibullParams(5.0, 0.8), 100)])
    assert roundtrip(serialize.mevd_to_dict(model)).years is None


def test_da18_roundtrip_keeps_shared_mu():
    model = Da18Model(((0.7, WeibullParams(8.0, 0.8)), (0.75, WeibullParams(10.0, 0.7))),
                      mu=1.25, labels=(2000, 2001), ks=0.05)
    back = roundtrip(serialize.da18_to_dict(model, method="PWM"))
    assert back.mu == 1.25 and back.ks == 0.05 and back.labels == (2000, 2001)
    np.testing.assert_array_equal(back.cdf(X), model.cdf(X))


def test_gev_roundtrip():
    params = GevParams(30.0, 10.0, -0.1)
    assert roundtrip(serialize.gev_to_dict(params, n_used=40)) == params


def test_dumps_is_canonical():
    a = serialize.dumps({"b": 1, "a": [1.5, 2]})
    assert a == serialize.dumps({"a": [1.5, 2], "b": 1}) and a.endswith("\n")


@pytest.mark.parametrize("d", [
    {"schema": "mevdist.other/1"},
    {},
    {"schema": serialize.MEVD_SCHEMA},
    {"schema": serialize.GEV_SCHEMA, "location": 1.0},
    {"schema": serialize.DA18_SCHEMA, "years": [{"p0": 0.5}], "N_t": 365, "mu": 0.0},
])
def test_bad_documents(d):
    with pytest.raises(DataError):
        serialize.model_from_dict(d)


def test_load_model_rejects_non_json(tmp_path):
    p = tmp_path / "m.json"
    p.write_text("not json")
    with pytest.raises(DataError, match="not a JSON model file"):
        serialize.load_model(p)
