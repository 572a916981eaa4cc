"""Spherical partial sums of multiple Fourier series and integrals.

A numpy library for the lattice geometry, windowed convolution kernels,
partial-sum operators, and empirical bound verification used when studying
where spherical partial sums converge for square-integrable data vanishing
on a ball.
"""

__version__ = "0.1.0"

from . import errors
from .verify import (
    DEFAULT_SCAN,
    LEMMA_CLAIMS,
    LOCALIZATION_SCAN,
    FittedConstant,
    ScanRange,
    VerificationReport,
    campaign_passed,
    integral_trend_trace,
    run_localization_integral,
    run_localization_series,
    run_riesz_thresholds,
    series_trend_trace,
    smooth_annulus_fixture,
    verify_all,
    verify_lemma,
)

__all__ = [
    "errors",
    "__version__",
    "DEFAULT_SCAN",
    "LEMMA_CLAIMS",
    "LOCALIZATION_SCAN",
    "FittedConstant",
    "ScanRange",
    "VerificationReport",
    "campaign_passed",
    "integral_trend_trace",
    "run_localization_integral",
    "run_localization_series",
    "run_riesz_thresholds",
    "series_trend_trace",
    "smooth_annulus_fixture",
    "verify_all",
    "verify_lemma",
]
