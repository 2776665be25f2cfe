"""Beta-distribution primitives used by the Harrell-Davis family of estimators.

The regularized incomplete beta function is evaluated with the classic
continued fraction (modified Lentz), vectorized over ``t`` so that all cut
points of a sample are processed in one pass.
"""
from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, gammaln

from .errors import DomainError

__all__ = [
    "BetaShape",
    "UnitInterval",
    "log_beta",
    "reg_inc_beta",
    "beta_pdf",
    "beta_hdi",
]

HDI_EPS = 1e-9

_CF_EPS = 1e-16
# Below this many points the float loop beats vectorized numpy.
_SCALAR_CF_MAX = 64
_CF_TINY = 1e-300
_CF_MAX_ITER = 100_000
_NEAR_MEAN_SD = 1.0


@dataclass(frozen=True)
class BetaShape:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError(
                f"beta shape parameters must be positive, got ({self.alpha}, {self.beta})"
            )
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise DomainError("beta shape parameters must be finite")

    @property
    def mode(self) -> float:
        """Mode of the density; meaningful only when both shapes exceed 1."""
        return (self.alpha - 1) / (self.alpha + self.beta - 2)


@dataclass(frozen=True)
class UnitInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise DomainError(f"invalid unit interval [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo


def log_beta(shape: BetaShape) -> float:
    """Natural logarithm of the complete beta function B(alpha, beta)."""
    return float(betaln(shape.alpha, shape.beta))


def _check_unit(t: np.ndarray) -> None:
    if np.any(np.isnan(t)) or np.any(t < 0.0) or np.any(t > 1.0):
        raise DomainError("argument must lie in [0, 1]")


def _betacf(t: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Continued fraction for the incomplete beta function, elementwise."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(t)
    d = 1.0 / _nonzero(1.0 - qab * t / qap)
    h = d.copy()
    active = np.ones(t.shape, dtype=bool)
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * t / ((qam + m2) * (a + m2))
        d = 1.0 / _nonzero(1.0 + aa * d)
        c = _nonzero(1.0 + aa / c)
        h = np.where(active, h * d * c, h)

        aa = -(a + m) * (qab + m) * t / ((a + m2) * (qap + m2))
        d = 1.0 / _nonzero(1.0 + aa * d)
        c = _nonzero(1.0 + aa / c)
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > _CF_EPS
        if not active.any():
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def _betacf_scalar(t: float, a: float, b: float) -> float:
    """Same recurrence as :func:`_betacf` on plain floats; avoids array overhead."""
    tiny = _CF_TINY
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * t / qap
    d = 1.0 / (tiny if abs(d) < tiny else d)
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * t / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = 1.0 / (tiny if abs(d) < tiny else d)
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        h = h * d * c
        aa = -(a + m) * (qab + m) * t / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = 1.0 / (tiny if abs(d) < tiny else d)
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        delta = d * c
        h = h * delta
        if not abs(delta - 1.0) > _CF_EPS:
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def _nonzero(v: np.ndarray) -> np.ndarray:
    return np.where(np.abs(v) < _CF_TINY, _CF_TINY, v)


# Bernoulli-series coefficients of ln(Gamma(z)) minus its Stirling part.
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360,
             1 / 156, -3617 / 122400)
_STIRLING_MIN = 10.0


def _stirling_corr(z):
    z = np.asarray(z, dtype=float)
    zi2 = 1.0 / (z * z)
    acc = np.zeros_like(z)
    for coef in reversed(_STIRLING):
        acc = acc * zi2 + coef
    return acc / z


def _log1pmx(u, ratio):
    """log(1 + u) - u without cancellation, where ``ratio`` = 1 + u.

    ``ratio`` is passed separately so that it keeps full relative precision
    when it is tiny and ``1 + u`` would round to zero.
    """
    u = np.asarray(u, dtype=float)
    out = np.log(ratio) - u
    small = np.abs(u) < 0.5
    if small.any():
        us = u[small]
        acc = np.zeros_like(us)
        power = us * us
        for k in range(2, 60):
            term = power / k
            acc = acc - term if k % 2 == 0 else acc + term
            power = power * us
        out[small] = acc
    return out


def _log_front(x, a, b):
    """log(x^a (1-x)^b / B(a, b)), elementwise.

    For large shapes the naive sum cancels badly; rewrite around the mean
    x0 = a / (a + b), where the linear terms cancel exactly, and expand the
    gamma functions of the large arguments with Stirling's series.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        naive = a * np.log(x) + b * np.log1p(-x) - betaln(a, b)
    big_a = a >= _STIRLING_MIN
    big_b = b >= _STIRLING_MIN
    if not np.any(big_a | big_b):
        return naive
    ab = a + b
    x0 = a / ab
    y0 = b / ab
    with np.errstate(divide="ignore", invalid="ignore"):
        # x - x0 without rounding x0 first.
        dx = (x * b - (1.0 - x) * a) / ab
        body = a * _log1pmx(dx / x0, x / x0) + b * _log1pmx(-dx / y0, (1.0 - x) / y0)
        both = (0.5 * (np.log(a) + np.log(b) - np.log(ab) - np.log(2 * np.pi))
                - _stirling_corr(a) - _stirling_corr(b) + _stirling_corr(ab))
        only_a = (0.5 * np.log(x0) + b * np.log(b) - b - gammaln(b)
                  - _stirling_corr(a) + _stirling_corr(ab))
        only_b = (0.5 * np.log(y0) + a * np.log(a) - a - gammaln(a)
                  - _stirling_corr(b) + _stirling_corr(ab))
    scale = np.where(big_a & big_b, both, np.where(big_a, only_a, only_b))
    return np.where(big_a | big_b, body + scale, naive)


def reg_inc_beta(t, shape: BetaShape):
    """Regularized incomplete beta function I_t(alpha, beta).

    Accepts a scalar or an array of ``t`` values in [0, 1] and returns the
    same kind. Endpoints map exactly to 0 and 1.
    """
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _check_unit(t)
    a, b = float(shape.alpha), float(shape.beta)
    out = np.zeros_like(t)
    out[t == 1.0] = 1.0
    inner = (t > 0.0) & (t < 1.0)
    if inner.any():
        x = t[inner]
        # Evaluate the fraction where it converges fast, reflecting otherwise.
        # Within a standard deviation of the mean the fraction is better
        # conditioned with the smaller shape first.
        mean = a / (a + b)
        sd = np.sqrt(a * b / (a + b + 1)) / (a + b)
        flip = x > mean
        if a != b:
            near = np.abs(x - mean) <= _NEAR_MEAN_SD * sd
            flip = np.where(near, a > b, flip)
        xx = np.where(flip, 1.0 - x, x)
        aa = np.where(flip, b, a)
        bb = np.where(flip, a, b)
        front = np.exp(_log_front(xx, aa, bb)) / aa
        if xx.size <= _SCALAR_CF_MAX:
            cf = np.array([_betacf_scalar(*v) for v in zip(xx.tolist(), aa.tolist(), bb.tolist())])
        else:
            cf = _betacf(xx, aa, bb)
        val = front * cf
        val = np.where(flip, 1.0 - val, val)
        out[inner] = np.clip(val, 0.0, 1.0)
    return float(out[0]) if scalar else out


def beta_pdf(t, shape: BetaShape):
    """Beta density; returns +inf at a boundary where the density diverges."""
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _check_unit(t)
    a, b = float(shape.alpha), float(shape.beta)
    lbeta = betaln(a, b)
    out = np.empty_like(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_pdf = (a - 1.0) * np.log(t) + (b - 1.0) * np.log1p(-t) - lbeta
        out[:] = np.exp(log_pdf)
    # (a - 1) * log(0) is nan when a == 1; resolve boundaries explicitly.
    for edge, power in ((0.0, a), (1.0, b)):
        mask = t == edge
        if not mask.any():
            continue
        if power < 1.0:
            out[mask] = np.inf
        elif power > 1.0:
            out[mask] = 0.0
        else:
            out[mask] = np.exp(-lbeta)
    return float(out[0]) if scalar else out


def beta_hdi(shape: BetaShape, width: float) -> UnitInterval:
    """Highest density interval of the given width for Beta(alpha, beta).

    Border cases follow the usual convention: a density that is monotone on
    [0, 1] gets an interval glued to the side where it is largest. When both
    shapes are at most 1 there is no interior mode and the whole unit
    interval is returned.
    """
    if not width > 0:
        raise DomainError(f"HDI width must be positive, got {width}")
    a, b = shape.alpha, shape.beta
    eps = HDI_EPS
    if a < 1 + eps and b < 1 + eps:
        return UnitInterval(0.0, 1.0)
    if a < 1 + eps and b > 1:
        return UnitInterval(0.0, min(width, 1.0))
    if a > 1 and b < 1 + eps:
        return UnitInterval(max(1.0 - width, 0.0), 1.0)
    if width > 1 - eps:
        return UnitInterval(0.0, 1.0)

    mode = shape.mode
    lo = max(0.0, mode - width)
    hi = min(mode, 1.0 - width)
    lbeta = float(betaln(a, b))

    def log_pdf(t: float) -> float:
        if t <= 0.0:
            return -math.inf
        if t >= 1.0:
            return -math.inf
        return (a - 1.0) * math.log(t) + (b - 1.0) * math.log1p(-t) - lbeta

    def gap_sign(left: float) -> bool:
        # True when the density at the left end is at least the right one.
        return log_pdf(left) >= log_pdf(min(left + width, 1.0))

    if gap_sign(lo):
        return UnitInterval(lo, min(lo + width, 1.0))
    if not gap_sign(hi):
        return UnitInterval(hi, min(hi + width, 1.0))
    # Bisect over the ordered bit patterns of non-negative doubles: at most
    # 64 steps down to two adjacent floats, even when the root is tiny.
    lo_bits, hi_bits = _bits(lo), _bits(hi)
    while hi_bits - lo_bits > 1:
        mid = (lo_bits + hi_bits) // 2
        if gap_sign(_from_bits(mid)):
            hi_bits = mid
        else:
            lo_bits = mid
    left = _from_bits(hi_bits)
    return UnitInterval(left, min(left + width, 1.0))


def _bits(x: float) -> int:
    return struct.unpack("<q", struct.pack("<d", x))[0]


def _from_bits(n: int) -> float:
    return struct.unpack("<d", struct.pack("<q", n))[0]
