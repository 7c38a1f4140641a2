"""Kernel backend selection.

The Cython extension is used when it imports; otherwise the numpy versions
are. Set ``MEVDIST_PURE_PYTHON=1`` to force the fallback.

With the extension present, the elementwise kernels still hand large arrays
to numpy: its vectorized exp/log/pow beat scalar libm calls once there are a
few hundred points, while the compiled loops win by orders of magnitude on
the small and scalar inputs that root finding produces. The binomial sum
follows the same switch although it is compiled faster at every size: it
exists to be checked against the closed form, and both sides must see the
same log F for the no-dry-day case to agree exactly. The Markov recursion is
compiled at every size.
"""
import os

import numpy as np

from . import _kernels_py

# below this many evaluation points the compiled loops are faster
VECTOR_THRESHOLD = 256

if os.environ.get("MEVDIST_PURE_PYTHON"):
    _impl = None
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = None

BACKEND = "python" if _impl is None else "cython"


def _by_size(name):
    small = getattr(_impl, name)
    large = getattr(_kernels_py, name)

    def dispatch(x, *args):
        f = small if np.size(x) < VECTOR_THRESHOLD else large
        return f(x, *args)

    dispatch.__name__ = name
    dispatch.__doc__ = large.__doc__
    return dispatch


if _impl is None:
    weibull_logsf_power = _kernels_py.weibull_logsf_power
    log_cdf_from_t = _kernels_py.log_cdf_from_t
    power_mixture = _kernels_py.power_mixture
    binomial_mixture = _kernels_py.binomial_mixture
    da18_mixture = _kernels_py.da18_mixture
    markov_occupancy = _kernels_py.markov_occupancy
else:
    weibull_logsf_power = _by_size("weibull_logsf_power")
    log_cdf_from_t = _impl.log_cdf_from_t
    power_mixture = _by_size("power_mixture")
    binomial_mixture = _by_size("binomial_mixture")
    da18_mixture = _by_size("da18_mixture")
    markov_occupancy = _impl.markov_occupancy

__all__ = [
    "BACKEND",
    "VECTOR_THRESHOLD",
    "weibull_logsf_power",
    "log_cdf_from_t",
    "power_mixture",
    "binomial_mixture",
    "da18_mixture",
    "markov_occupancy",
]
