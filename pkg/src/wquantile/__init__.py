"""Weighted quantile estimators, quantile exponential smoothing and mixtures.

Quick start::

    >>> from wquantile import WeightedSample, whd_quantile
    >>> round(whd_quantile(WeightedSample([1, 2, 4, 8, 16]), 0.5), 3)
    5.04
"""
from .errors import DomainError, EmptySampleError, UnsupportedTypeError, WeightedQuantileError
from .ess import KISH, EssKind, huggins_roy_ess, kish_ess, parse_ess
from .estimators import (
    EstimatorKind,
    HdCdf,
    HfCdf,
    QuantileCdf,
    ThdCdf,
    estimate,
    hd_cdf,
    hf_cdf,
    hf_h,
    linear_coefficients,
    thd_cdf,
    validate_probs,
    whd_quantile,
    whf_quantile,
    wquantile_generic,
    wthd_quantile,
)
from .mixture import (
    MixtureComponent,
    MixtureSpec,
    build_mixture_sample,
    mixture_quantile_curve,
    probability_grid,
    shift_curve,
)
from .sample import SortedWeightedSample, WeightedSample, drop_missing, normalize_weights, prepare, sort_and_cut
from .smoothing import DecaySpec, MovingQuantileTracker, assign_group_weights, decay_weights
from .special import BetaShape, UnitInterval, beta_hdi, beta_pdf, log_beta, reg_inc_beta

__version__ = "0.1.0"

__all__ = [
    "WeightedQuantileError",
    "DomainError",
    "EmptySampleError",
    "UnsupportedTypeError",
    "BetaShape",
    "UnitInterval",
    "log_beta",
    "reg_inc_beta",
    "beta_pdf",
    "beta_hdi",
    "EssKind",
    "KISH",
    "kish_ess",
    "huggins_roy_ess",
    "parse_ess",
    "WeightedSample",
    "SortedWeightedSample",
    "drop_missing",
    "normalize_weights",
    "sort_and_cut",
    "prepare",
    "EstimatorKind",
    "QuantileCdf",
    "HdCdf",
    "ThdCdf",
    "HfCdf",
    "hd_cdf",
    "thd_cdf",
    "hf_cdf",
    "hf_h",
    "linear_coefficients",
    "wquantile_generic",
    "validate_probs",
    "estimate",
    "whd_quantile",
    "wthd_quantile",
    "whf_quantile",
    "DecaySpec",
    "decay_weights",
    "assign_group_weights",
    "MovingQuantileTracker",
    "MixtureComponent",
    "MixtureSpec",
    "build_mixture_sample",
    "mixture_quantile_curve",
    "shift_curve",
    "probability_grid",
]
