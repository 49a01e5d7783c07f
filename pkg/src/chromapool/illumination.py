"""Contrast normalization and color-constancy correction.

The correction pathway is: global histogram stretching (one linear map
shared by all three channels, so channel balance is untouched), then a
per-channel Von Kries division by an estimated illuminant. The illuminant
estimators are classical scene statistics: gray-world (channel means),
max-RGB (channel maxima) and shades-of-gray (Minkowski p-norms).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ProcessingError
from .images import ensure_image

GRAY_WORLD = "gray_world"
MAX_RGB = "max_rgb"
SHADES_OF_GRAY = "shades_of_gray"

ESTIMATORS = (GRAY_WORLD, MAX_RGB, SHADES_OF_GRAY)

# Channels with no evidence (an all-zero channel) get this gain floor so the
# Von Kries division stays defined.
_GAIN_FLOOR = 1.0 / 255.0


@dataclass(frozen=True)
class Illuminant:
    """Per-channel gains of the scene illuminant, normalized so max = 1."""

    gains: tuple[float, float, float]

    def __post_init__(self):
        g = np.asarray(self.gains, dtype=np.float64)
        if g.shape != (3,):
            raise ConfigError(f"illuminant needs exactly 3 gains, got {self.gains!r}")
        if not np.all(np.isfinite(g)) or np.any(g <= 0.0) or np.any(g > 1.0 + 1e-12):
            raise ConfigError(f"illuminant gains must lie in (0, 1]: {self.gains!r}")
        if abs(g.max() - 1.0) > 1e-9:
            raise ConfigError(f"illuminant gains must be normalized to max 1: {self.gains!r}")

    @classmethod
    def from_raw(cls, raw) -> "Illuminant":
        """Build an illuminant from unnormalized per-channel magnitudes."""
        raw = np.asarray(raw, dtype=np.float64)
        if raw.shape != (3,) or not np.all(np.isfinite(raw)) or np.any(raw < 0.0):
            raise ConfigError(f"invalid raw illuminant magnitudes: {raw!r}")
        peak = raw.max()
        if peak <= 0.0:
            raise ProcessingError("no illuminant evidence (all channels zero)")
        gains = np.maximum(raw / peak, _GAIN_FLOOR)
        return cls(tuple(float(v) for v in gains))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.gains, dtype=np.float64)


def histogram_stretch(img: np.ndarray, clip_percentile: float = 1.0) -> np.ndarray:
    """Stretch global contrast with a single linear map shared by all channels.

    The map sends the clip_percentile / (100 - clip_percentile) bounds of the
    per-pixel brightness (max channel) distribution to 0 and 255; outputs
    clamp to [0, 255]. Using the brightest channel keeps any uniform-color
    image degenerate (returned unchanged) and makes clip 0 exactly
    idempotent: after one pass the brightness extremes sit at 0 and 255, so
    a second pass is the identity map.
    """
    img = ensure_image(img)
    if not 0.0 <= clip_percentile < 50.0:
        raise ConfigError(f"clip_percentile must lie in [0, 50): {clip_percentile!r}")
    brightness = img.max(axis=2).reshape(-1).astype(np.float64)
    lo = np.percentile(brightness, clip_percentile)
    hi = np.percentile(brightness, 100.0 - clip_percentile)
    if hi <= lo:
        return img.copy()
    scale = 255.0 / (hi - lo)
    out = np.rint((img.astype(np.float64) - lo) * scale)
    return np.clip(out, 0, 255).astype(np.uint8)


def estimate_illuminant(
    img: np.ndarray, method: str = GRAY_WORLD, p: float = 6.0
) -> Illuminant:
    """Estimate the scene illuminant with a classical statistical estimator.

    gray_world uses per-channel means, max_rgb per-channel maxima and
    shades_of_gray per-channel Minkowski p-norms (which converge to max_rgb
    as p grows). Raises ProcessingError on an all-black image.
    """
    img = ensure_image(img)
    if img.size == 0:
        raise ProcessingError("empty image")
    flat = img.reshape(-1, 3).astype(np.float64)
    if method == GRAY_WORLD:
        raw = flat.mean(axis=0)
    elif method == MAX_RGB:
        raw = flat.max(axis=0)
    elif method == SHADES_OF_GRAY:
        if p <= 0:
            raise ConfigError(f"shades_of_gray needs p > 0, got {p!r}")
        # Work on [0,1] so large p cannot overflow.
        raw = np.mean((flat / 255.0) ** p, axis=0) ** (1.0 / p) * 255.0
    else:
        raise ConfigError(f"unknown illuminant estimator {method!r}")
    return Illuminant.from_raw(raw)


def von_kries_correct(img: np.ndarray, ill: Illuminant) -> np.ndarray:
    """Discount the illuminant by dividing each channel by its gain.

    A diagonal chromatic adaptation transform; results clamp to [0, 255]
    and gains (1, 1, 1) leave the image unchanged.
    """
    img = ensure_image(img)
    out = np.rint(img.astype(np.float64) / ill.as_array())
    return np.clip(out, 0, 255).astype(np.uint8)
