"""Quantile exponential smoothing.

Older observations get exponentially decaying weights ``2^(-age / half_life)``
and the distribution at the tail of the series is summarized with a weighted
quantile estimator. :class:`MovingQuantileTracker` maintains this estimate
incrementally, dropping observations once their weight is negligible.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EmptySampleError
from .estimators import EstimatorKind, estimate
from .ess import KISH, EssKind
from .sample import WeightedSample

__all__ = [
    "DecaySpec",
    "decay_weights",
    "assign_group_weights",
    "MovingQuantileTracker",
]

DEFAULT_WEIGHT_FLOOR = 1e-6


@dataclass(frozen=True)
class DecaySpec:
    """Half-life (in samples or in groups) and the eviction floor.

    ``weight_floor = 0`` disables eviction entirely.
    """

    half_life: float
    weight_floor: float = DEFAULT_WEIGHT_FLOOR

    def __post_init__(self):
        if not (self.half_life > 0) or math.isinf(self.half_life):
            raise DomainError(f"half-life must be positive and finite, got {self.half_life}")
        if not (0 <= self.weight_floor < 1):
            raise DomainError(f"weight floor must be in [0, 1), got {self.weight_floor}")

    def weight(self, age):
        return np.exp2(-np.asarray(age, dtype=float) / self.half_life)

    @property
    def max_age(self) -> float:
        """Largest age that can still carry a normalized weight >= weight_floor.

        An element of age ``a`` never has normalized weight below
        ``2^(-a/h) * (1 - 2^(-1/h))`` (the geometric series bounds the total),
        so everything older than the returned age is negligible by
        construction. Infinite when eviction is disabled.
        """
        if self.weight_floor == 0:
            return math.inf
        ratio = -math.expm1(-math.log(2) / self.half_life)
        return max(0.0, self.half_life * math.log2(ratio / self.weight_floor))

    @property
    def retained_bound(self) -> float:
        """Upper bound on the number of retained elements in index mode."""
        if self.weight_floor == 0:
            return math.inf
        return math.ceil(self.half_life * math.log2(1 / self.weight_floor)) + 1


def decay_weights(n: int, half_life: float) -> np.ndarray:
    """Weights ``2^(-(n - i) / half_life)`` for ``i = 1..n``; the newest gets 1."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if not half_life > 0:
        raise DomainError(f"half-life must be positive, got {half_life}")
    ages = np.arange(n - 1, -1, -1, dtype=float)
    return np.exp2(-ages / half_life)


def assign_group_weights(group_ids, half_life: float) -> np.ndarray:
    """Per-group decay: every element of group ``g`` gets ``2^(-(g_max - g) / half_life)``."""
    g = np.asarray(group_ids)
    if g.ndim != 1 or g.size == 0:
        raise DomainError("group ids must be a non-empty vector")
    if not half_life > 0:
        raise DomainError(f"half-life must be positive, got {half_life}")
    if np.any(np.diff(g) < 0):
        raise DomainError("group ids must be nondecreasing")
    return np.exp2(-(g[-1] - g).astype(float) / half_life)


@dataclass
class MovingQuantileTracker:
    """Running weighted quantiles at the tail of a stream.

    Each pushed value has an age: its distance (in samples, or in groups
    when group ids are supplied) from the newest value. Weights are derived
    from ages at query time, so nothing drifts over long streams. Pushing is
    single-writer; :meth:`quantiles` works on a snapshot of the retained pairs.
    """

    decay: DecaySpec
    kind: EstimatorKind = field(default_factory=EstimatorKind.hf)
    ess: EssKind = KISH
    _values: deque = field(default_factory=deque, init=False, repr=False)
    _stamps: deque = field(default_factory=deque, init=False, repr=False)
    _clock: int = field(default=-1, init=False, repr=False)
    _grouped: bool | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        # Ages are integers, so the cutoff can be kept as one.
        max_age = self.decay.max_age
        self._max_age = math.inf if math.isinf(max_age) else math.floor(max_age)

    def __len__(self) -> int:
        return len(self._values)

    def push(self, value: float, group: int | None = None) -> "MovingQuantileTracker":
        """Add the newest observation; returns ``self`` for chaining.

        Either always pass ``group`` or never: with groups, ages count group
        steps and group ids must be nondecreasing.
        """
        value = float(value)
        if math.isnan(value):
            raise DomainError("cannot push a missing value")
        grouped = group is not None
        if self._grouped is None:
            self._grouped = grouped
        elif self._grouped != grouped:
            raise DomainError("mixing grouped and ungrouped pushes")
        if grouped:
            group = int(group)
            if group < self._clock and self._values:
                raise DomainError(f"group ids must be nondecreasing, got {group} after {self._clock}")
            self._clock = group
        else:
            self._clock += 1
        self._values.append(value)
        self._stamps.append(self._clock)
        horizon = self._clock - self._max_age
        while self._stamps[0] < horizon:
            self._stamps.popleft()
            self._values.popleft()
        return self

    def extend(self, values, groups=None) -> "MovingQuantileTracker":
        if groups is None:
            for v in values:
                self.push(v)
        else:
            for v, g in zip(values, groups, strict=True):
                self.push(v, g)
        return self

    def snapshot(self) -> WeightedSample:
        """Retained values with their current decay weights."""
        if not self._values:
            raise EmptySampleError("tracker is empty")
        stamps = np.fromiter(self._stamps, dtype=float, count=len(self._stamps))
        values = np.fromiter(self._values, dtype=float, count=len(self._values))
        return WeightedSample(values, self.decay.weight(self._clock - stamps))

    def quantiles(self, probs) -> np.ndarray:
        return estimate(self.snapshot(), self.kind, probs, self.ess)

    def quantile(self, p: float) -> float:
        return float(self.quantiles([p])[0])
