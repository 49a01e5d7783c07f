"""End-to-end mono- and multi-color extraction.

The chain is: contrast stretch -> Von Kries correction -> first-stage color
naming under the object-attention -> per-name colorname-attention ->
combined-attention-weighted pooling of the corrected RGB pixels -> color
count rule -> non-maximum suppression over CIEDE2000.

Correction is opt-in: the statistical illuminant estimators assume a
neutral-on-average or white-referenced scene, and on scenes violating that
(a single saturated garment filling the frame) they would "correct" the
garment color itself away. Both knobs accept an off position (estimator
"none", clip_percentile None).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .attention import TemperatureSpec, colorname_attention, combine, solve_temperature
from .colorspace import ciede2000, rgb_to_lab
from .errors import ConfigError, ProcessingError
from .illumination import ESTIMATORS, estimate_illuminant, histogram_stretch, von_kries_correct
from .images import ensure_image
from .palette import Palette, name_histogram

ESTIMATOR_NONE = "none"


@dataclass(frozen=True)
class ColorPrediction:
    """One extracted color: pooled RGB, first-stage name, mass share, rank."""

    rgb: tuple[int, int, int]
    name: str
    mass: float
    rank: int


@dataclass(frozen=True)
class PipelineConfig:
    estimator: str = ESTIMATOR_NONE
    shades_p: float = 6.0
    temperature: TemperatureSpec = field(default_factory=lambda: TemperatureSpec.fixed(0.15))
    clip_percentile: float | None = None
    max_colors: int = 3
    mass_threshold: float = 0.15
    nms_delta: float = 12.0
    candidate_names: int = 6

    def __post_init__(self):
        if self.estimator not in (*ESTIMATORS, ESTIMATOR_NONE):
            raise ConfigError(f"unknown estimator {self.estimator!r}")
        if self.clip_percentile is not None and not 0.0 <= self.clip_percentile < 50.0:
            raise ConfigError(f"clip_percentile must lie in [0, 50): {self.clip_percentile!r}")
        if self.max_colors < 1:
            raise ConfigError(f"max_colors must be >= 1, got {self.max_colors!r}")
        if not 0.0 < self.mass_threshold < 1.0:
            raise ConfigError(f"mass_threshold must lie in (0,1), got {self.mass_threshold!r}")
        if not self.nms_delta > 0:
            raise ConfigError(f"nms_delta must be > 0, got {self.nms_delta!r}")
        if self.candidate_names < 1:
            raise ConfigError(f"candidate_names must be >= 1, got {self.candidate_names!r}")
        if self.shades_p <= 0:
            raise ConfigError(f"shades_p must be > 0, got {self.shades_p!r}")


def correct_image(img: np.ndarray, cfg: PipelineConfig) -> np.ndarray:
    """Apply the configured contrast stretch and Von Kries correction."""
    img = ensure_image(img)
    if cfg.clip_percentile is not None:
        img = histogram_stretch(img, cfg.clip_percentile)
    if cfg.estimator != ESTIMATOR_NONE:
        ill = estimate_illuminant(img, cfg.estimator, cfg.shades_p)
        img = von_kries_correct(img, ill)
    return img


def _pool_rgb(img: np.ndarray, att: np.ndarray) -> tuple[int, int, int]:
    pooled = np.tensordot(att, img.astype(np.float64), axes=([0, 1], [0, 1]))
    return tuple(int(v) for v in np.clip(np.rint(pooled), 0, 255))


def _pooled_candidates(
    corrected: np.ndarray, obj: np.ndarray, cfg: PipelineConfig, p: Palette, n: int
) -> list[ColorPrediction]:
    """Pool one RGB per top-n histogram name; mass is the name's vote share."""
    hist = name_histogram(corrected, obj, p)
    candidates: list[ColorPrediction] = []
    for entry, mass in hist[:n]:
        t = solve_temperature(corrected, entry.rgb, obj, cfg.temperature)
        try:
            combined = combine(obj, colorname_attention(corrected, entry.rgb, t.t))
        except ProcessingError:
            if not candidates:
                raise
            continue
        candidates.append(
            ColorPrediction(
                rgb=_pool_rgb(corrected, combined),
                name=entry.name,
                mass=mass,
                rank=len(candidates) + 1,
            )
        )
    return candidates


def extract_mono(
    img: np.ndarray, obj: np.ndarray, cfg: PipelineConfig, p: Palette
) -> ColorPrediction:
    """Extract the single main color of the attended region."""
    corrected = correct_image(img, cfg)
    top = _pooled_candidates(corrected, obj, cfg, p, n=1)[0]
    return replace(top, mass=1.0, rank=1)


def extract_multi(
    img: np.ndarray, obj: np.ndarray, cfg: PipelineConfig, p: Palette
) -> list[ColorPrediction]:
    """Extract up to cfg.max_colors colors, ranked by attention mass.

    Candidates share the object-attention but each gets its own
    colorname-attention. All candidates are pooled, the color-count rule
    fixes how many colors to emit, and NMS removes pooled colors too close
    to an accepted one before the count caps the survivors. Suppressing
    before capping lets a distinct lower-mass color take the slot of a
    suppressed near-duplicate (two nearby reds never shadow a white).
    """
    corrected = correct_image(img, cfg)
    candidates = _pooled_candidates(corrected, obj, cfg, p, n=cfg.candidate_names)
    count = estimate_color_count(
        [c.mass for c in candidates], cfg.mass_threshold, cfg.max_colors
    )
    return nms_colors(candidates, cfg.nms_delta)[:count]


def estimate_color_count(
    masses, mass_threshold: float = 0.15, max_colors: int = 3
) -> int:
    """Number of candidate masses at or above the threshold, clamped to [1, max_colors]."""
    if len(masses) == 0:
        raise ProcessingError("no candidates to count")
    passing = sum(1 for m in masses if m >= mass_threshold)
    return max(1, min(max_colors, passing))


def nms_colors(preds: list[ColorPrediction], delta: float) -> list[ColorPrediction]:
    """Greedy suppression of colors within CIEDE2000 `delta` of an accepted one.

    `preds` must already be sorted by descending mass; the survivors keep
    that order and get ranks 1..n.
    """
    if not delta > 0:
        raise ConfigError(f"nms delta must be > 0, got {delta!r}")
    accepted: list[ColorPrediction] = []
    accepted_labs: list[np.ndarray] = []
    for pred in preds:
        lab = rgb_to_lab(pred.rgb)
        if all(ciede2000(lab, kept) >= delta for kept in accepted_labs):
            accepted.append(replace(pred, rank=len(accepted) + 1))
            accepted_labs.append(lab)
    return accepted
