import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from chromapool.palette import default_palette


@pytest.fixture(scope="session")
def palette():
    return default_palette()


def flat_image(color, width=16, height=16):
    img = np.empty((height, width, 3), dtype=np.uint8)
    img[:] = color
    return img


def ellipse_scene(fg, bg, width=64, height=64, ax=20.0, ay=14.0):
    """Flat background with a centered elliptical foreground; returns (img, mask)."""
    img = flat_image(bg, width, height)
    ys, xs = np.mgrid[0:height, 0:width]
    inside = ((xs - width / 2) / ax) ** 2 + ((ys - height / 2) / ay) ** 2 <= 1.0
    img[inside] = fg
    return img, inside.astype(np.float64)


def striped_scene(colors, fractions, bg, width=64, height=64):
    """Vertical stripes inside a centered rectangle; returns (img, mask)."""
    assert abs(sum(fractions) - 1.0) < 1e-9
    img = flat_image(bg, width, height)
    mask = np.zeros((height, width), dtype=np.float64)
    x0, x1 = width // 8, width - width // 8
    y0, y1 = height // 8, height - height // 8
    edges = np.cumsum([0.0, *fractions]) * (x1 - x0) + x0
    for color, lo, hi in zip(colors, edges[:-1], edges[1:]):
        img[y0:y1, int(round(lo)) : int(round(hi))] = color
        mask[y0:y1, int(round(lo)) : int(round(hi))] = 1.0
    return img, mask
