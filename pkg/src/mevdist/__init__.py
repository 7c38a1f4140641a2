"""Metastatistical extreme value distribution (MEVD) for intermittent block maxima."""
from .distributions import (BinomialOccurrence, EmpiricalCDF, GevParams, WeibullParams,
                            binomial_pmf, empirical_cdf, gev_cdf, gev_quantile, weibull_cdf,
                            weibull_quantile)
from .errors import DataError, DegenerateModelError, DomainError, MevdError, NumericalError
from .fitting import (FitReport, Method, fit_gev_annual_maxima, fit_station, fit_weibull_mle,
                      fit_weibull_pwm)
from .ingest import DailySeries, YearBlock, blockify, parse_daily_csv
from .kernels import BACKEND
from .mevd import (MevdModel, ReturnLevelTable, annual_max_cdf, mevd_cdf, mevd_quantile,
                   order_statistic_cdf, return_levels)
from .simulator import (HyperParams, OccurrenceSpec, SyntheticStation, empirical_annual_maxima,
                        oracle_cdf, simulate_annual_maxima, simulate_station)
from .superstat import (Da18Model, da18_annual_cdf, da18_cdf, fit_da18, ks_statistic,
                        mevd_binomial_cdf, verify_equivalence)

__version__ = "0.1.0"

__all__ = [
    "annual_max_cdf",
    "BACKEND",
    "binomial_pmf",
    "BinomialOccurrence",
    "blockify",
    "da18_annual_cdf",
    "da18_cdf",
    "Da18Model",
    "DailySeries",
    "DataError",
    "DegenerateModelError",
    "DomainError",
    "empirical_annual_maxima",
    "empirical_cdf",
    "EmpiricalCDF",
    "fit_da18",
    "fit_gev_annual_maxima",
    "fit_station",
    "fit_weibull_mle",
    "fit_weibull_pwm",
    "FitReport",
    "gev_cdf",
    "gev_quantile",
    "GevParams",
    "HyperParams",
    "ks_statistic",
    "Method",
    "mevd_binomial_cdf",
    "mevd_cdf",
    "mevd_quantile",
    "MevdError",
    "MevdModel",
    "NumericalError",
    "OccurrenceSpec",
    "oracle_cdf",
    "order_statistic_cdf",
    "parse_daily_csv",
    "return_levels",
    "ReturnLevelTable",
    "simulate_annual_maxima",
    "simulate_station",
    "SyntheticStation",
    "verify_equivalence",
    "weibull_cdf",
    "weibull_quantile",
    "WeibullParams",
    "YearBlock",
]
