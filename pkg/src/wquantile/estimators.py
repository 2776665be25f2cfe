"""Weighted quantile estimators built as L-estimators over cut points.

Every estimator here has the same shape: a CDF ``F`` on [0, 1] chosen from
the effective sample size and the target probability, coefficients
``W_i = F(t_i) - F(t_{i-1})`` over the sample's cut points, and the estimate
``sum(W_i * x_(i))``. Only ``F`` differs between estimators:

* Harrell-Davis: the Beta((n*+1)p, (n*+1)(1-p)) CDF;
* trimmed Harrell-Davis: the same CDF truncated to its highest density
  interval and renormalized;
* Hyndman-Fan types 4-9: the uniform CDF on [(h*-1)/n*, h*/n*].

With unit weights the cut points are ``i/n`` and the classic non-weighted
estimators are recovered.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import DomainError, UnsupportedTypeError
from .ess import KISH, EssKind
from .sample import SortedWeightedSample, WeightedSample, prepare
from .special import BetaShape, UnitInterval, beta_hdi, reg_inc_beta

__all__ = [
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
    "whd_quantile",
    "wthd_quantile",
    "whf_quantile",
    "estimate",
    "validate_probs",
    "HF_TYPES",
]

HF_TYPES = range(4, 10)

SampleLike = Union[WeightedSample, SortedWeightedSample]


@dataclass(frozen=True)
class EstimatorKind:
    """Estimator selector: ``hd``, ``thd`` (optional width) or ``hf`` (type 4..9)."""

    name: str
    width: float | None = None
    hf_type: int | None = None

    def __post_init__(self):
        if self.name not in ("hd", "thd", "hf"):
            raise DomainError(f"unknown estimator {self.name!r}")
        if self.name == "hf":
            if self.hf_type not in HF_TYPES:
                raise UnsupportedTypeError(f"Unsupported type: {self.hf_type}")
        elif self.hf_type is not None:
            raise DomainError("hf_type only applies to Hyndman-Fan estimators")
        if self.width is not None:
            if self.name != "thd":
                raise DomainError("width only applies to the trimmed Harrell-Davis estimator")
            _check_width(self.width)

    @classmethod
    def hd(cls) -> "EstimatorKind":
        return cls("hd")

    @classmethod
    def thd(cls, width: float | None = None) -> "EstimatorKind":
        return cls("thd", width=width)

    @classmethod
    def hf(cls, hf_type: int = 7) -> "EstimatorKind":
        return cls("hf", hf_type=hf_type)

    @classmethod
    def parse(cls, text: str, width: float | None = None) -> "EstimatorKind":
        """Parse ``hd``, ``thd`` or ``type4`` .. ``type9``."""
        text = text.strip().lower()
        if text == "hd":
            return cls.hd()
        if text == "thd":
            return cls.thd(width)
        if text.startswith("type"):
            try:
                k = int(text[4:])
            except ValueError:
                raise UnsupportedTypeError(f"Unsupported type: {text[4:]!r}") from None
            return cls.hf(k)
        raise DomainError(f"unknown estimator {text!r}")

    @property
    def open_interval(self) -> bool:
        """Whether the estimator is only defined for p strictly inside (0, 1)."""
        return self.name != "hf"

    def __str__(self) -> str:
        if self.name == "hf":
            return f"type{self.hf_type}"
        return self.name


def _check_width(width: float) -> None:
    if not (0 < width <= 1):
        raise DomainError(f"THD width must be in (0, 1], got {width}")


def _check_p(p: float, open_interval: bool) -> None:
    if math.isnan(p) or not 0 <= p <= 1:
        raise DomainError(f"probability must be in [0, 1], got {p}")
    if open_interval and p in (0, 1):
        raise DomainError(
            f"Harrell-Davis estimators are defined only for p in (0, 1), got {p}"
        )


class QuantileCdf:
    """A CDF on [0, 1] assigning linear coefficients to cut-point segments."""

    n_star: float
    p: float

    def __call__(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class HdCdf(QuantileCdf):
    def __init__(self, n_star: float, p: float):
        _check_p(p, open_interval=True)
        self.n_star = n_star
        self.p = p
        self.shape = BetaShape((n_star + 1) * p, (n_star + 1) * (1 - p))

    def __call__(self, t):
        return reg_inc_beta(t, self.shape)

    def __repr__(self):
        return f"HdCdf(n_star={self.n_star!r}, p={self.p!r})"


class ThdCdf(HdCdf):
    def __init__(self, n_star: float, p: float, width: float):
        super().__init__(n_star, p)
        _check_width(width)
        self.width = width
        self.hdi: UnitInterval = beta_hdi(self.shape, width)

    def __call__(self, t):
        # One kernel call: HDI ends first, then the points strictly inside.
        lo, hi = self.hdi.lo, self.hdi.hi
        t = np.asarray(t, dtype=float)
        inside = (t > lo) & (t < hi)
        vals = reg_inc_beta(np.concatenate(([lo, hi], t[inside])), self.shape)
        cdf_lo, cdf_hi = vals[0], vals[1]
        out = np.where(t >= hi, 1.0, 0.0)
        out[inside] = (vals[2:] - cdf_lo) / (cdf_hi - cdf_lo)
        return out

    def __repr__(self):
        return f"ThdCdf(n_star={self.n_star!r}, p={self.p!r}, width={self.width!r})"


class HfCdf(QuantileCdf):
    def __init__(self, hf_type: int, n_star: float, p: float):
        self.hf_type = hf_type
        self.n_star = n_star
        self.p = p
        self.h = hf_h(hf_type, n_star, p)

    @property
    def segment(self) -> tuple[float, float]:
        """Support [(h-1)/n, h/n] of the uniform distribution behind F."""
        return (self.h - 1) / self.n_star, self.h / self.n_star

    def __call__(self, t):
        return np.clip(np.asarray(t, dtype=float) * self.n_star - self.h + 1, 0.0, 1.0)

    def __repr__(self):
        return f"HfCdf(type={self.hf_type}, n_star={self.n_star!r}, p={self.p!r})"


def hd_cdf(n_star: float, p: float) -> HdCdf:
    return HdCdf(n_star, p)


def thd_cdf(n_star: float, p: float, width: float | None = None) -> ThdCdf:
    """Trimmed Harrell-Davis CDF; ``width`` defaults to ``1/sqrt(n_star)``."""
    if width is None:
        width = 1 / math.sqrt(n_star)
    return ThdCdf(n_star, p, width)


def hf_cdf(hf_type: int, n_star: float, p: float) -> HfCdf:
    return HfCdf(hf_type, n_star, p)


def hf_h(hf_type: int, n: float, p: float) -> float:
    """Hyndman-Fan interpolation position, clamped to [1, n]."""
    if hf_type not in HF_TYPES:
        raise UnsupportedTypeError(f"Unsupported type: {hf_type}")
    _check_p(p, open_interval=False)
    if hf_type == 4:
        h = n * p
    elif hf_type == 5:
        h = n * p + 0.5
    elif hf_type == 6:
        h = (n + 1) * p
    elif hf_type == 7:
        h = (n - 1) * p + 1
    elif hf_type == 8:
        h = (n + 1 / 3) * p + 1 / 3
    else:
        h = (n + 1 / 4) * p + 3 / 8
    return max(min(h, n), 1.0)


def _sorted(sample: SampleLike) -> SortedWeightedSample:
    if isinstance(sample, SortedWeightedSample):
        return sample
    if isinstance(sample, WeightedSample):
        return prepare(sample)
    raise TypeError(f"expected a WeightedSample, got {type(sample).__name__}")


def linear_coefficients(sample: SortedWeightedSample, cdf: QuantileCdf) -> np.ndarray:
    """Coefficients ``F(t_i) - F(t_{i-1})`` attached to the order statistics."""
    values = cdf(sample.cut_points)
    return np.diff(values)


def wquantile_generic(sample: SortedWeightedSample, p: float, cdf: QuantileCdf) -> float:
    """Linear combination of order statistics with coefficients from ``cdf``.

    ``p`` is carried by ``cdf``; it is accepted here to mirror the estimator
    signature and checked for consistency.
    """
    if cdf.p != p:
        raise DomainError(f"cdf was built for p={cdf.p}, asked for p={p}")
    coef = linear_coefficients(sample, cdf)
    return float(np.dot(coef, sample.ordered_values))


def _cdf_for(kind: EstimatorKind, n_star: float, p: float) -> QuantileCdf:
    if kind.name == "hd":
        return hd_cdf(n_star, p)
    if kind.name == "thd":
        return thd_cdf(n_star, p, kind.width)
    return hf_cdf(kind.hf_type, n_star, p)


def validate_probs(kind: EstimatorKind, probs: Iterable[float]) -> list[float]:
    """Check every probability against the estimator's domain, naming the first bad index."""
    probs = [float(p) for p in np.atleast_1d(np.asarray(probs, dtype=float))]
    for i, p in enumerate(probs):
        try:
            _check_p(p, kind.open_interval)
        except DomainError as exc:
            raise DomainError(f"probs[{i}]: {exc}") from None
    return probs


def estimate(
    sample: SampleLike,
    kind: EstimatorKind,
    probs: Iterable[float],
    ess: EssKind = KISH,
) -> np.ndarray:
    """Estimate several quantiles of one weighted sample.

    Sorting and the effective sample size are computed once and shared by
    all probabilities. Every probability is validated before any work is
    done; the first invalid one raises :class:`DomainError` naming its index.
    """
    probs = validate_probs(kind, probs)
    srt = _sorted(sample)
    n_star = ess(srt.ordered_weights)
    out = np.empty(len(probs))
    for i, p in enumerate(probs):
        out[i] = wquantile_generic(srt, p, _cdf_for(kind, n_star, p))
    return out


def whd_quantile(sample: SampleLike, p: float, ess: EssKind = KISH) -> float:
    """Weighted Harrell-Davis quantile estimate, ``0 < p < 1``."""
    return float(estimate(sample, EstimatorKind.hd(), [p], ess)[0])


def wthd_quantile(
    sample: SampleLike, p: float, width: float | None = None, ess: EssKind = KISH
) -> float:
    """Weighted trimmed Harrell-Davis estimate; width defaults to ``1/sqrt(n*)``."""
    return float(estimate(sample, EstimatorKind.thd(width), [p], ess)[0])


def whf_quantile(
    sample: SampleLike, p: float, hf_type: int = 7, ess: EssKind = KISH
) -> float:
    """Weighted Hyndman-Fan estimate of the given type (4..9)."""
    return float(estimate(sample, EstimatorKind.hf(hf_type), [p], ess)[0])
