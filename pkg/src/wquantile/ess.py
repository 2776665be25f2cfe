"""Effective sample size of a weighted sample.

Kish's formula is the default everywhere; the Huggins-Roy family is
available through :class:`EssKind` for experimentation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptySampleError

__all__ = ["EssKind", "KISH", "kish_ess", "huggins_roy_ess", "parse_ess"]


def _as_weights(weights) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise EmptySampleError("weights must be a non-empty vector")
    if np.any(np.isnan(w)) or np.any(w < 0):
        raise DomainError("weights must be non-negative")
    return w


def kish_ess(weights) -> float:
    """Kish's effective sample size ``(sum w)^2 / sum w^2``.

    Scale invariant; zero weights do not contribute.
    """
    w = _as_weights(weights)
    total = w.sum()
    if not total > 0:
        raise EmptySampleError("all weights are zero")
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        squares = np.dot(w, w)
        ess = total * total / squares
    if not math.isfinite(ess) or squares == 0:
        # Extreme magnitudes: normalize first so the squares stay representable.
        wn = w / total
        ess = 1.0 / np.dot(wn, wn)
    return float(ess)


def huggins_roy_ess(normalized_weights, beta: float) -> float:
    """Huggins-Roy effective sample size ``ESS_beta`` of normalized weights.

    Parameters
    ----------
    normalized_weights : array-like
        Non-negative weights that already sum to one.
    beta : float
        Family parameter, ``0 <= beta <= inf``. ``beta = 2`` is Kish's formula.
    """
    w = _as_weights(normalized_weights)
    if abs(w.sum() - 1.0) > 1e-12:
        raise DomainError(f"weights must be normalized, sum is {w.sum()!r}")
    if math.isnan(beta) or beta < 0:
        raise DomainError(f"Huggins-Roy beta must be >= 0, got {beta}")
    return _huggins_roy(w, beta)


def _huggins_roy(w: np.ndarray, beta: float) -> float:
    positive = w[w > 0]
    if beta == 0:
        return float(positive.size)
    if beta == 1:
        return float(np.exp(-np.sum(positive * np.log(positive))))
    if math.isinf(beta):
        return float(1.0 / positive.max())
    return float(np.sum(positive**beta) ** (1.0 / (1.0 - beta)))


@dataclass(frozen=True)
class EssKind:
    """Which effective sample size to plug into an estimator.

    ``beta=None`` selects Kish; otherwise the Huggins-Roy member with that
    ``beta`` (``math.inf`` allowed).
    """

    beta: float | None = None

    def __post_init__(self):
        if self.beta is not None and (math.isnan(self.beta) or self.beta < 0):
            raise DomainError(f"Huggins-Roy beta must be >= 0, got {self.beta}")

    @property
    def is_kish(self) -> bool:
        return self.beta is None

    def __call__(self, weights) -> float:
        if self.beta is None:
            return kish_ess(weights)
        w = _as_weights(weights)
        total = w.sum()
        if not total > 0:
            raise EmptySampleError("all weights are zero")
        return _huggins_roy(w / total, self.beta)

    def __str__(self) -> str:
        if self.beta is None:
            return "kish"
        if math.isinf(self.beta):
            return "hr:inf"
        return f"hr:{self.beta:g}"


KISH = EssKind()


def parse_ess(text: str) -> EssKind:
    """Parse ``kish``, ``hr:<beta>`` or ``hr:inf``."""
    text = text.strip().lower()
    if text == "kish":
        return KISH
    if text.startswith("hr:"):
        value = text[3:]
        try:
            beta = math.inf if value in ("inf", "infinity") else float(value)
        except ValueError:
            raise DomainError(f"invalid Huggins-Roy beta {value!r}") from None
        return EssKind(beta)
    raise DomainError(f"unknown effective sample size {text!r}")
