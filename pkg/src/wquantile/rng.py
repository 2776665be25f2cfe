"""Seedable random variates with explicit, portable algorithms.

Uniform doubles come from numpy's PCG64 bit generator (its stream is fixed
across platforms and numpy versions); every other distribution is derived
from those uniforms here, so simulated data depends on nothing else.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Rng",
    "Normal",
    "Cauchy",
    "Uniform",
    "Exponential",
    "Mixture",
]

U64_MAX = 2**64 - 1


class Rng:
    """Random stream identified by ``(seed, *key)``.

    Independent streams for trials / series use distinct keys, so parallel
    and serial runs produce identical data.
    """

    def __init__(self, seed: int, *key: int):
        if not (0 <= seed <= U64_MAX):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
        seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))
        self._bits = np.random.Generator(np.random.PCG64(seq))
        self._spare: float | None = None

    def uniform01(self) -> float:
        """Uniform double in the open interval (0, 1)."""
        while True:
            u = float(self._bits.random())
            if u > 0.0:
                return u

    def normal(self) -> float:
        """Standard normal via the Marsaglia polar method."""
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        while True:
            u = 2.0 * self.uniform01() - 1.0
            v = 2.0 * self.uniform01() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break
        factor = math.sqrt(-2.0 * math.log(s) / s)
        self._spare = v * factor
        return u * factor


@dataclass(frozen=True)
class Normal:
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        if not self.sd > 0:
            raise DomainError("normal sd must be positive")

    def draw(self, rng: Rng) -> float:
        return self.mean + self.sd * rng.normal()

    def cdf(self, x: float) -> float:
        return 0.5 * math.erfc(-(x - self.mean) / (self.sd * math.sqrt(2.0)))


@dataclass(frozen=True)
class Cauchy:
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not self.scale > 0:
            raise DomainError("Cauchy scale must be positive")

    def draw(self, rng: Rng) -> float:
        return self.loc + self.scale * math.tan(math.pi * (rng.uniform01() - 0.5))

    def cdf(self, x: float) -> float:
        return 0.5 + math.atan((x - self.loc) / self.scale) / math.pi


@dataclass(frozen=True)
class Uniform:
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.a < self.b:
            raise DomainError("uniform bounds must satisfy a < b")

    def draw(self, rng: Rng) -> float:
        return self.a + (self.b - self.a) * rng.uniform01()

    def cdf(self, x: float) -> float:
        return min(1.0, max(0.0, (x - self.a) / (self.b - self.a)))


@dataclass(frozen=True)
class Exponential:
    rate: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError("exponential rate must be positive")

    def draw(self, rng: Rng) -> float:
        return self.shift - math.log(rng.uniform01()) / self.rate

    def cdf(self, x: float) -> float:
        if x <= self.shift:
            return 0.0
        return -math.expm1(-self.rate * (x - self.shift))


@dataclass(frozen=True)
class Mixture:
    """Finite mixture; ``parts`` is a sequence of ``(weight, distribution)``."""

    parts: tuple

    def __post_init__(self):
        if not self.parts or any(w <= 0 for w, _ in self.parts):
            raise DomainError("mixture needs positive weights")

    @property
    def weights(self) -> np.ndarray:
        w = np.array([w for w, _ in self.parts], dtype=float)
        return w / w.sum()

    def draw(self, rng: Rng) -> float:
        u = rng.uniform01()
        acc = 0.0
        for w, dist in zip(self.weights, (d for _, d in self.parts)):
            acc += w
            if u < acc:
                return dist.draw(rng)
        return self.parts[-1][1].draw(rng)

    def cdf(self, x: float) -> float:
        return float(sum(w * d.cdf(x) for w, (_, d) in zip(self.weights, self.parts)))
