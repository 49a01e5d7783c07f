"""Small visual outputs: prediction swatches and attention heatmaps."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .images import save_image
from .pipeline import ColorPrediction

_BAR_HEIGHT = 48
_BAR_WIDTH = 96


def write_swatch(preds: list[ColorPrediction], path: str | Path) -> None:
    """Write ranked color bars (left to right) as a PNG preview."""
    if not preds:
        raise ValueError("no predictions to render")
    swatch = np.zeros((_BAR_HEIGHT, _BAR_WIDTH * len(preds), 3), dtype=np.uint8)
    for i, pred in enumerate(preds):
        swatch[:, i * _BAR_WIDTH : (i + 1) * _BAR_WIDTH] = pred.rgb
    save_image(swatch, path)


def write_heatmap(att: np.ndarray, path: str | Path) -> None:
    """Write an attention map as a grayscale PNG (peak weight = white)."""
    att = np.asarray(att, dtype=np.float64)
    peak = att.max()
    scaled = att / peak if peak > 0 else att
    gray = np.clip(np.rint(scaled * 255.0), 0, 255).astype(np.uint8)
    save_image(np.stack([gray, gray, gray], axis=-1), path)
