"""Generalized numbers, hyperseries, power series and transforms on a gauge grid."""

from .config import Settings, load_settings
from .gauge_net import Ball, Gauge, GenComplex, GridPoint, sharp_compare, valuation
from .hypernat import HyperNatural, ni, rni, rpi
from .hyperseq import HyperSequence, hyperlimit, is_cauchy
from .hyperseries import (
    SeriesSequence,
    constant_series,
    exponential_series,
    geometric_series,
    hypersum,
    ratio_test,
    root_test,
    sum_hyperseries,
)
from .hps import HpsCoefficients, dirac_delta, radius, setconv_membership
from .ghf_analytic import GhfNet, goursat_coefficients, identity_continuation, liouville_check, zero_isolation
from .hft import GsfNet, delta1, paley_wiener_suite, riemann_lebesgue, support_report

__all__ = [
    "Ball", "Gauge", "GenComplex", "GridPoint", "GhfNet", "GsfNet", "HpsCoefficients", "HyperNatural",
    "HyperSequence", "SeriesSequence", "Settings", "constant_series", "delta1", "dirac_delta",
    "exponential_series", "geometric_series", "goursat_coefficients", "hyperlimit", "hypersum",
    "identity_continuation", "is_cauchy", "liouville_check", "load_settings", "ni",
    "paley_wiener_suite", "radius", "ratio_test", "riemann_lebesgue", "rni", "root_test", "rpi",
    "setconv_membership", "sharp_compare", "sum_hyperseries", "support_report", "valuation", "zero_isolation",
]
