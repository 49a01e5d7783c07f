"""Object-attention, colorname-attention and their combination.

Attention maps are (H, W) float64 arrays, nonnegative and normalized to sum
to 1. The colorname weight for a pixel p and a reference color c is

    exp(-||RGB_p - RGB_c||^2 / (127.5^2 * t))

(channel-sum of squared differences), so larger t flattens the map and
smaller t sharpens it. The adaptive temperature solver picks t by driving
the effective support (exp of the map entropy) of the combined attention to
a target fraction of the object-attention's effective support.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, ProcessingError
from .images import ensure_image, load_mask

_SCALE = 127.5**2

_LOG_T_LO = -3.0
_LOG_T_HI = 3.0
_BISECT_ITERS = 60


@dataclass(frozen=True)
class TemperatureSpec:
    """Either a fixed temperature or an adaptive entropy target.

    In adaptive mode `value` is the target fraction in (0, 1): the solved
    temperature makes the combined attention's effective support equal that
    fraction of the object-attention's effective support.
    """

    mode: str
    value: float

    def __post_init__(self):
        if self.mode == "fixed":
            if not (np.isfinite(self.value) and self.value > 0):
                raise ConfigError(f"fixed temperature must be > 0, got {self.value!r}")
        elif self.mode == "adaptive":
            if not (np.isfinite(self.value) and 0.0 < self.value < 1.0):
                raise ConfigError(f"adaptive target fraction must lie in (0,1), got {self.value!r}")
        else:
            raise ConfigError(f"unknown temperature mode {self.mode!r}")

    @classmethod
    def fixed(cls, t: float) -> "TemperatureSpec":
        return cls(mode="fixed", value=float(t))

    @classmethod
    def adaptive(cls, target_fraction: float) -> "TemperatureSpec":
        return cls(mode="adaptive", value=float(target_fraction))


class TemperatureResult(NamedTuple):
    t: float
    degenerate: bool


def _normalize(weights: np.ndarray) -> np.ndarray:
    total = weights.sum()
    if total <= 0.0:
        raise ProcessingError("attention weights sum to zero")
    return weights / total


def entropy(att: np.ndarray) -> float:
    """Shannon entropy (nats) of an attention map."""
    w = np.asarray(att, dtype=np.float64).reshape(-1)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


def effective_support(att: np.ndarray) -> float:
    """exp(entropy): the equivalent number of uniformly weighted pixels."""
    return float(np.exp(entropy(att)))


def object_attention(img: np.ndarray, mask: str | Path | np.ndarray | None = None) -> np.ndarray:
    """Spatial prior over garment pixels.

    With a mask (file path or (H, W) array, nonzero = foreground, graded
    values allowed) the mask is normalized to sum 1. Without one, a centered
    isotropic Gaussian prior with sigma = 0.25 * min(width, height) is used.
    """
    img = ensure_image(img)
    h, w = img.shape[:2]
    if mask is None:
        sigma = 0.25 * min(w, h)
        ys = np.arange(h, dtype=np.float64) - (h - 1) / 2.0
        xs = np.arange(w, dtype=np.float64) - (w - 1) / 2.0
        d2 = ys[:, None] ** 2 + xs[None, :] ** 2
        return _normalize(np.exp(-d2 / (2.0 * sigma**2)))
    if isinstance(mask, (str, Path)):
        mask = load_mask(mask)
    m = np.asarray(mask, dtype=np.float64)
    if m.shape != (h, w):
        raise ProcessingError(f"mask shape {m.shape} does not match image {(h, w)}")
    if np.any(m < 0.0):
        raise ProcessingError("mask values must be nonnegative")
    if not np.any(m > 0.0):
        raise ProcessingError("empty object region")
    return _normalize(m)


def _squared_rgb_distance(img: np.ndarray, c) -> np.ndarray:
    diff = img.astype(np.float64) - np.asarray(c, dtype=np.float64)
    return np.sum(diff * diff, axis=-1)


def colorname_attention(img: np.ndarray, c, t: float) -> np.ndarray:
    """Attention favoring pixels whose RGB is close to the reference color c."""
    if not t > 0:
        raise ConfigError(f"temperature must be > 0, got {t!r}")
    img = ensure_image(img)
    d2 = _squared_rgb_distance(img, c)
    # Shift by the minimum before exponentiating; normalization cancels the
    # shift and the sharpest pixel never underflows to an all-zero map.
    logits = -(d2 - d2.min()) / (_SCALE * t)
    return _normalize(np.exp(logits))


def combine(obj: np.ndarray, ca: np.ndarray) -> np.ndarray:
    """Elementwise product of two attention maps, renormalized to sum 1."""
    obj = np.asarray(obj, dtype=np.float64)
    ca = np.asarray(ca, dtype=np.float64)
    if obj.shape != ca.shape:
        raise ProcessingError(f"attention shapes differ: {obj.shape} vs {ca.shape}")
    product = obj * ca
    total = product.sum()
    if total <= 0.0:
        raise ProcessingError("disjoint attentions")
    return product / total


def _combined_support_at(obj: np.ndarray, d2: np.ndarray, t: float) -> float:
    # Stabilize relative to the minimum distance over the object support so
    # the product never underflows to zero everywhere.
    on = obj > 0.0
    logits = -(d2 - d2[on].min()) / (_SCALE * t)
    weights = np.zeros_like(d2)
    weights[on] = obj[on] * np.exp(logits[on])
    return effective_support(weights / weights.sum())


def solve_temperature(
    img: np.ndarray, c, obj: np.ndarray, spec: TemperatureSpec
) -> TemperatureResult:
    """Resolve a TemperatureSpec to a concrete temperature.

    Fixed mode returns the value verbatim. Adaptive mode bisects log t over
    [1e-3, 1e3] (60 iterations) for the t whose combined attention has
    effective support closest to target_fraction times the object
    attention's effective support; the effective support is monotone in t,
    which makes the bisection well-posed. An image whose pixels are all at
    one RGB distance from c has t-invariant entropy: the midpoint
    temperature is returned with the degenerate flag set.
    """
    if spec.mode == "fixed":
        return TemperatureResult(t=spec.value, degenerate=False)
    img = ensure_image(img)
    obj = np.asarray(obj, dtype=np.float64)
    if obj.shape != img.shape[:2]:
        raise ProcessingError(f"attention shape {obj.shape} does not match image")
    d2 = _squared_rgb_distance(img, c)
    support_d2 = d2[obj > 0.0]
    midpoint = 10.0 ** ((_LOG_T_LO + _LOG_T_HI) / 2.0)
    if support_d2.max() - support_d2.min() <= 0.0:
        return TemperatureResult(t=midpoint, degenerate=True)
    target = spec.value * effective_support(obj)
    lo, hi = _LOG_T_LO, _LOG_T_HI
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if _combined_support_at(obj, d2, 10.0**mid) < target:
            lo = mid
        else:
            hi = mid
    return TemperatureResult(t=10.0 ** (0.5 * (lo + hi)), degenerate=False)
