"""Seeded regeneration of the three simulation studies as tidy tables.

* ``sim1``: running median (Hyndman-Fan type 7, half-life 10) over six
  series of length 1000;
* ``sim2``: running quartiles over a four-segment series of length 500
  for half-lives 5, 10 and 30;
* ``sim3``: type-7 quantile curves of six weighted mixtures built from
  100-element component samples, 50 trials each, p = 0.01..0.99.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .estimators import EstimatorKind
from .mixture import MixtureSpec, mixture_quantile_curve, probability_grid
from .rng import Cauchy, Exponential, Mixture, Normal, Rng, Uniform
from .smoothing import DecaySpec, MovingQuantileTracker

__all__ = [
    "Table",
    "SINE_AMPLITUDE",
    "SINE_PERIOD",
    "SINE_DRIFT",
    "OUTLIER_EVERY",
    "OUTLIER_SIZE",
    "sim1_series",
    "sim2_series",
    "SIM3_MIXTURES",
    "mixture_true_quantile",
    "running_estimates",
    "run_sim1",
    "run_sim2",
    "sim3_trial",
    "run_sim3",
    "SIMULATIONS",
]

# Series (e) of sim1: deterministic rising sine wave plus periodic outliers.
SINE_AMPLITUDE = 1.0
SINE_PERIOD = 100
SINE_DRIFT = 0.01
OUTLIER_EVERY = 50
OUTLIER_SIZE = 10.0

# First element of every Rng key, one per study.
_SIM1, _SIM2, _SIM3 = 1, 2, 3


@dataclass
class Table:
    name: str
    header: tuple[str, ...]
    rows: list[tuple]


def _sine_with_outliers(i: int, rng: Rng) -> float:
    x = SINE_DRIFT * i + SINE_AMPLITUDE * math.sin(2 * math.pi * i / SINE_PERIOD)
    if i % OUTLIER_EVERY == 0:
        x += OUTLIER_SIZE
    return x


def _dispersing(i: int, rng: Rng) -> float:
    j = (i - 1) // 100 + 1
    mean = (2 * (j % 2) - 1) * (j / 2 + ((i - 1) % 100) / 100)
    return Normal(mean, 1.0).draw(rng)


_SIM1_SERIES: dict[str, Callable[[int, Rng], float]] = {
    "a": lambda i, rng: Normal(10.0 if i <= 900 else 20.0, 1.0).draw(rng),
    "b": lambda i, rng: Normal(10.0 + i / 100, 1.0).draw(rng),
    "c": lambda i, rng: Normal(0.0, 1.0).draw(rng),
    "d": lambda i, rng: Cauchy(0.0, 1.0).draw(rng),
    "e": _sine_with_outliers,
    "f": _dispersing,
}


def sim1_series(name: str, seed: int, n: int = 1000) -> np.ndarray:
    """Series ``a``..``f`` of the median smoothing study, indexed from 1."""
    generator = _SIM1_SERIES[name]
    rng = Rng(seed, _SIM1, ord(name) - ord("a"))
    return np.array([generator(i, rng) for i in range(1, n + 1)])


_S4 = Mixture(((0.4, Normal(-10, 1)), (0.2, Normal(0, 1)), (0.4, Normal(10, 1))))


def sim2_series(seed: int) -> np.ndarray:
    """Four segments: N(0,1), N(10,1), N(0,1) for 100 each, then a trimodal mixture for 200."""
    rng = Rng(seed, _SIM2)
    out = []
    for i in range(1, 501):
        if i <= 100 or 200 < i <= 300:
            out.append(Normal(0, 1).draw(rng))
        elif i <= 200:
            out.append(Normal(10, 1).draw(rng))
        else:
            out.append(_S4.draw(rng))
    return np.array(out)


# Normal parameters are (mean, sd); exponential parameters are (rate, shift).
SIM3_MIXTURES: dict[str, Mixture] = {
    "a": Mixture(((0.75, Normal(0, 1)), (0.25, Normal(5, 3)))),
    "b": Mixture(((0.99, Normal(0, 1)), (0.01, Normal(100, 10)))),
    "c": Mixture(((0.5, Uniform(0, 1)), (0.5, Uniform(5, 10)))),
    "d": Mixture(((0.1, Uniform(0, 1)), (0.9, Uniform(20, 30)))),
    "e": Mixture(((0.7, Exponential(1)), (0.2, Exponential(2)), (0.1, Exponential(3)))),
    "f": Mixture(((0.3, Exponential(1, 0)), (0.3, Exponential(1, 10)), (0.4, Exponential(1, 20)))),
}


def mixture_true_quantile(mixture: Mixture, p: float) -> float:
    """Smallest x with F(x) >= p, by bisection on the mixture CDF."""
    lo, hi = -1.0, 1.0
    while mixture.cdf(lo) >= p:
        lo *= 2
    while mixture.cdf(hi) < p:
        hi *= 2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if mixture.cdf(mid) >= p:
            hi = mid
        else:
            lo = mid
    return hi


def running_estimates(
    values: np.ndarray,
    probs,
    half_life: float,
    weight_floor: float = 0.0,
    kind: EstimatorKind | None = None,
) -> np.ndarray:
    """Estimates after every prefix of ``values``; shape ``(len(values), len(probs))``."""
    tracker = MovingQuantileTracker(
        DecaySpec(half_life, weight_floor), kind or EstimatorKind.hf(7)
    )
    out = np.empty((len(values), len(probs)))
    for i, v in enumerate(values):
        out[i] = tracker.push(v).quantiles(probs)
    return out


def run_sim1(seed: int, weight_floor: float = 0.0) -> list[Table]:
    rows = []
    for name in _SIM1_SERIES:
        x = sim1_series(name, seed)
        med = running_estimates(x, [0.5], half_life=10, weight_floor=weight_floor)[:, 0]
        rows.extend((name, i + 1, x[i], med[i]) for i in range(x.size))
    return [Table("sim1", ("series", "index", "value", "median"), rows)]


SIM2_HALF_LIVES = (5, 10, 30)
SIM2_PROBS = (0.25, 0.5, 0.75)


def run_sim2(seed: int, weight_floor: float = 0.0) -> list[Table]:
    x = sim2_series(seed)
    rows = []
    for h in SIM2_HALF_LIVES:
        est = running_estimates(x, SIM2_PROBS, half_life=h, weight_floor=weight_floor)
        for i in range(x.size):
            rows.extend((h, i + 1, x[i], p, est[i, k]) for k, p in enumerate(SIM2_PROBS))
    return [Table("sim2", ("half_life", "index", "value", "p", "estimate"), rows)]


SIM3_TRIALS = 50
SIM3_COMPONENT_SIZE = 100


def sim3_trial(name: str, trial: int, seed: int) -> MixtureSpec:
    mixture = SIM3_MIXTURES[name]
    rng = Rng(seed, _SIM3, ord(name) - ord("a"), trial)
    return MixtureSpec(
        [
            ([dist.draw(rng) for _ in range(SIM3_COMPONENT_SIZE)], w)
            for w, dist in mixture.parts
        ]
    )


def run_sim3(seed: int, trials: int = SIM3_TRIALS) -> list[Table]:
    grid = probability_grid(0.01, 0.99, 0.01)
    kind = EstimatorKind.hf(7)
    rows = []
    for name, mixture in SIM3_MIXTURES.items():
        truth = [mixture_true_quantile(mixture, p) for p in grid]
        for trial in range(1, trials + 1):
            _, q = mixture_quantile_curve(sim3_trial(name, trial, seed), kind, grid)
            rows.extend((name, trial, grid[k], q[k], truth[k]) for k in range(grid.size))
    return [Table("sim3", ("mixture", "trial", "p", "estimate", "true"), rows)]


SIMULATIONS = {"sim1": run_sim1, "sim2": run_sim2, "sim3": run_sim3}
