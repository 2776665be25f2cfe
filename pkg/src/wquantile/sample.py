"""Weighted samples and their weighted order statistics."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptySampleError

__all__ = [
    "WeightedSample",
    "SortedWeightedSample",
    "drop_missing",
    "normalize_weights",
    "sort_and_cut",
    "prepare",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WeightedSample:
    """Values paired with non-negative weights.

    ``NaN`` (or ``None`` on input) marks a missing value. Weights may not be
    missing. If ``weights`` is omitted every element gets weight 1.
    """

    values: np.ndarray
    weights: np.ndarray

    def __init__(self, values, weights=None):
        x = np.array(values, dtype=float).ravel()
        if x.size == 0:
            raise EmptySampleError("sample is empty")
        w = np.ones_like(x) if weights is None else np.array(weights, dtype=float).ravel()
        if w.shape != x.shape:
            raise DomainError(f"got {x.size} values but {w.size} weights")
        if not np.all(np.isfinite(w)):
            raise DomainError("weights must be finite and not missing")
        if np.any(w < 0):
            raise DomainError("weights must be non-negative")
        if np.any(np.isinf(x)):
            raise DomainError("values must be finite")
        object.__setattr__(self, "values", _frozen(x))
        object.__setattr__(self, "weights", _frozen(w))

    def __len__(self) -> int:
        return self.values.size

    @property
    def has_missing(self) -> bool:
        return bool(np.isnan(self.values).any())


@dataclass(frozen=True, eq=False)
class SortedWeightedSample:
    """Order statistics with carried weights and cumulative cut points.

    ``cut_points`` has ``n + 1`` entries, starts at exactly 0 and ends at
    exactly 1; the ``i``-th order statistic owns ``[cut_points[i], cut_points[i+1]]``.
    """

    ordered_values: np.ndarray
    ordered_weights: np.ndarray
    normalized_weights: np.ndarray
    cut_points: np.ndarray

    def __len__(self) -> int:
        return self.ordered_values.size

    @property
    def support(self) -> tuple[float, float]:
        """Smallest and largest value carrying positive weight."""
        pos = self.ordered_values[self.ordered_weights > 0]
        return float(pos[0]), float(pos[-1])


def drop_missing(sample: WeightedSample) -> WeightedSample:
    """Remove pairs whose value is missing."""
    keep = ~np.isnan(sample.values)
    if not keep.any():
        raise EmptySampleError("all values are missing")
    if keep.all():
        result = sample
    else:
        result = WeightedSample(sample.values[keep], sample.weights[keep])
    if not result.weights.sum() > 0:
        raise EmptySampleError("total weight of non-missing values is zero")
    return result


def normalize_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if not total > 0:
        raise EmptySampleError("weights sum to zero")
    return w / total


def sort_and_cut(sample: WeightedSample) -> SortedWeightedSample:
    """Sort a sample (stable on ties) and build its cut points.

    Cut points are prefix sums of the normalized weights. Every cut point
    from the last positively weighted element onwards is pinned to 1 so the
    linear coefficients add up to exactly one and trailing zero weights get
    exactly zero coefficient.
    """
    if sample.has_missing:
        raise DomainError("sample contains missing values; call drop_missing first")
    order = np.argsort(sample.values, kind="stable")
    x = sample.values[order]
    w = sample.weights[order]
    wn = normalize_weights(w)
    cut = np.empty(x.size + 1)
    cut[0] = 0.0
    np.cumsum(wn, out=cut[1:])
    np.minimum(cut, 1.0, out=cut)
    last = np.flatnonzero(w > 0)[-1]
    cut[last + 1:] = 1.0
    return SortedWeightedSample(_frozen(x), _frozen(w), _frozen(wn), _frozen(cut))


def prepare(sample: WeightedSample) -> SortedWeightedSample:
    """``drop_missing`` followed by ``sort_and_cut``."""
    return sort_and_cut(drop_missing(sample))
