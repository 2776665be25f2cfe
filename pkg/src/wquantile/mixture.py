"""Weighted samples for mixture distributions and their quantile curves."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, EmptySampleError
from .estimators import EstimatorKind, estimate
from .ess import KISH, EssKind
from .sample import WeightedSample

__all__ = [
    "MixtureComponent",
    "MixtureSpec",
    "build_mixture_sample",
    "mixture_quantile_curve",
    "shift_curve",
    "probability_grid",
]


@dataclass(frozen=True, eq=False)
class MixtureComponent:
    sample: np.ndarray
    weight: float

    def __init__(self, sample, weight: float):
        x = np.array(sample, dtype=float).ravel()
        if x.size == 0:
            raise EmptySampleError("mixture component is empty")
        if not (weight > 0) or not np.isfinite(weight):
            raise DomainError(f"mixture weight must be positive, got {weight}")
        object.__setattr__(self, "sample", x)
        object.__setattr__(self, "weight", float(weight))


@dataclass(frozen=True)
class MixtureSpec:
    components: tuple[MixtureComponent, ...]

    def __init__(self, components: Sequence):
        comps = tuple(
            c if isinstance(c, MixtureComponent) else MixtureComponent(*c) for c in components
        )
        if not comps:
            raise EmptySampleError("mixture has no components")
        object.__setattr__(self, "components", comps)


def build_mixture_sample(spec: MixtureSpec) -> WeightedSample:
    """Concatenate the components; each element gets ``weight / component size``.

    Every component therefore carries total mass equal to its mixture weight,
    whatever its size.
    """
    values = np.concatenate([c.sample for c in spec.components])
    weights = np.concatenate(
        [np.full(c.sample.size, c.weight / c.sample.size) for c in spec.components]
    )
    return WeightedSample(values, weights)


def mixture_quantile_curve(
    spec: MixtureSpec,
    kind: EstimatorKind,
    p_grid,
    ess: EssKind = KISH,
) -> tuple[np.ndarray, np.ndarray]:
    """Quantile estimates of the mixture over a probability grid, as ``(p, q)``."""
    p = np.asarray(p_grid, dtype=float).ravel()
    q = estimate(build_mixture_sample(spec), kind, p, ess)
    return p, q


def shift_curve(
    first: MixtureSpec,
    second: MixtureSpec,
    kind: EstimatorKind,
    p_grid,
    ess: EssKind = KISH,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Doksum shift ``q2(p) - q1(p)`` between two mixtures; returns ``(p, q1, q2)``."""
    p, q1 = mixture_quantile_curve(first, kind, p_grid, ess)
    _, q2 = mixture_quantile_curve(second, kind, p_grid, ess)
    return p, q1, q2


def probability_grid(start: float, stop: float, step: float) -> np.ndarray:
    """Inclusive arithmetic grid, rounded to kill accumulated step error.

    >>> probability_grid(0.01, 0.99, 0.01).size
    99
    """
    if not step > 0:
        raise DomainError(f"grid step must be positive, got {step}")
    if stop < start:
        raise DomainError(f"grid stop {stop} is below start {start}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)
