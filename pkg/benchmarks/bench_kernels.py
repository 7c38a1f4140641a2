"""Time the Cython kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel runs on a scalar input (the root-finding path) and on a
2000-point grid (vectorized CDF and KS evaluation). The ``dispatch`` column
is what ``mevdist.kernels`` actually calls.
"""
import argparse
import timeit

import numpy as np

from mevdist import _kernels_py, kernels
from mevdist.distributions import BinomialOccurrence, binomial_logpmf_table

try:
    from mevdist import _ckernels
except ImportError:
    _ckernels = None


def cases(rng):
    S = 200
    C = rng.lognormal(np.log(9), 0.2, S)
    w = rng.normal(0.8, 0.08, S)
    mu = np.zeros(S)
    n = rng.integers(80, 140, S).astype(np.int64)
    weight = np.ones(S)
    p0 = rng.uniform(0.6, 0.8, S)
    logpmf = binomial_logpmf_table(BinomialOccurrence(365, 0.7))
    out = {}
    for m in (1, 2000):
        x = np.linspace(0.1, 300, m) if m > 1 else np.array([60.0])
        out[f"power_mixture S={S} m={m}"] = ("power_mixture", (x, C, w, mu, n, weight))
        out[f"da18_mixture S={S} m={m}"] = ("da18_mixture", (x, p0, C, w, mu, 365.0, weight))
        out[f"binomial_mixture N=365 m={m}"] = ("binomial_mixture",
                                               (x, logpmf, C[0], w[0], 0.0))
    u = rng.random((1000, 365))
    out["markov_occupancy 1000x365"] = ("markov_occupancy", (u, 0.2, 0.5, 0.2 / 0.7))
    return out


def best(f, args, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(lambda: f(*args), number=1), 1e-7)))
    return min(timeit.repeat(lambda: f(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = [("numpy", _kernels_py)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    backends.append(("dispatch", kernels))
    print(f"backend: {kernels.BACKEND}, vector threshold {kernels.VECTOR_THRESHOLD}")
    print(f"{'kernel':34s}" + "".join(f"{name:>12s}" for name, _ in backends) + "  numpy/cython")
    for label, (fn, a) in cases(np.random.default_rng(0)).items():
        times = [best(getattr(mod, fn), a, args.repeat) for _, mod in backends]
        row = f"{label:34s}" + "".join(f"{t * 1e3:10.3f}ms" for t in times)
        if _ckernels is not None:
            row += f"  {times[0] / times[1]:9.1f}x"
        print(row)
    if _ckernels is None:
        print("compiled extension not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
