"""JSON model files. Each carries a ``schema`` string with a version suffix."""
from __future__ import annotations

import json

from .distributions import GevParams, WeibullParams
from .errors import DataError
from .mevd import MevdModel
from .superstat import Da18Model

MEVD_SCHEMA = "mevdist.mevd/1"
DA18_SCHEMA = "mevdist.da18/1"
GEV_SCHEMA = "mevdist.gev/1"


def mevd_to_dict(model: MevdModel):
    years = model.years or (None,) * model.S
    return {
        "schema": MEVD_SCHEMA,
        "method": model.method,
        "S": model.S,
        "entries": [
            {"year": y, "n": n, "C": t.scale_C, "w": t.shape_w, "mu": t.position_mu}
            for y, (t, n) in zip(years, model.entries)
        ],
    }


def da18_to_dict(model: Da18Model, method=None):
    labels = model.labels or (None,) * model.S
    return {
        "schema": DA18_SCHEMA,
        "method": method,
        "N_t": model.N_t,
        "mu": model.mu,
        "ks": model.ks,
        "S": model.S,
        "years": [
            {"year": y, "p0": p0, "C": t.scale_C, "w": t.shape_w}
            for y, (p0, t) in zip(labels, model.years)
        ],
    }


def gev_to_dict(params: GevParams, n_used=None):
    return {
        "schema": GEV_SCHEMA,
        "method": "LMOM",
        "n_used": n_used,
        "location": params.location,
        "scale": params.scale,
        "shape_xi": params.shape_xi,
    }


def model_from_dict(d):
    schema = d.get("schema")
    try:
        if schema == MEVD_SCHEMA:
            entries = tuple((WeibullParams(e["C"], e["w"], e.get("mu", 0.0)), e["n"])
                            for e in d["entries"])
            years = tuple(e["year"] for e in d["entries"])
            return MevdModel(entries, years=None if None in years else years,
                             method=d.get("method"))
        if schema == DA18_SCHEMA:
            years = tuple((y["p0"], WeibullParams(y["C"], y["w"])) for y in d["years"])
            labels = tuple(y["year"] for y in d["years"])
            return Da18Model(years, N_t=d["N_t"], mu=d["mu"],
                             labels=None if None in labels else labels, ks=d.get("ks"))
        if schema == GEV_SCHEMA:
            return GevParams(d["location"], d["scale"], d["shape_xi"])
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed {schema} model file: {exc}") from None
    raise DataError(f"unknown model schema {schema!r}")


def dumps(d):
    return json.dumps(d, indent=2, sort_keys=True) + "\n"


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"not a JSON model file: {exc}", source=path) from None
    return model_from_dict(d)
