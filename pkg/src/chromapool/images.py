"""Image and mask file ingestion (PNG and binary PPM) and PNG output.

Images are plain numpy arrays of shape (H, W, 3), dtype uint8; masks are
(H, W) float64 arrays with values in [0, 255]. Alpha channels are dropped
on load.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image as PILImage
from PIL import UnidentifiedImageError

from .errors import NotFoundError, ParseError


def load_image(path: str | Path) -> np.ndarray:
    """Load an 8-bit RGB image from PNG or binary PPM (P6)."""
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"image file not found: {path}")
    try:
        with PILImage.open(path) as img:
            if img.mode == "RGBA":
                arr = np.asarray(img)[..., :3]
            else:
                arr = np.asarray(img.convert("RGB"))
    except UnidentifiedImageError as exc:
        raise ParseError(f"cannot decode image {path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read image {path}: {exc}") from exc
    return np.ascontiguousarray(arr, dtype=np.uint8)


def save_image(img: np.ndarray, path: str | Path) -> None:
    """Write an (H, W, 3) uint8 image as PNG."""
    img = np.asarray(img, dtype=np.uint8)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {img.shape}")
    PILImage.fromarray(img, mode="RGB").save(Path(path), format="PNG")


def load_mask(path: str | Path) -> np.ndarray:
    """Load an 8-bit grayscale mask; nonzero values mark the object.

    Graded values are kept so soft masks act as weights.
    """
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"mask file not found: {path}")
    try:
        with PILImage.open(path) as img:
            arr = np.asarray(img.convert("L"))
    except UnidentifiedImageError as exc:
        raise ParseError(f"cannot decode mask {path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read mask {path}: {exc}") from exc
    return arr.astype(np.float64)


def save_mask(mask: np.ndarray, path: str | Path) -> None:
    """Write an (H, W) uint8 mask as grayscale PNG."""
    mask = np.asarray(mask, dtype=np.uint8)
    if mask.ndim != 2:
        raise ValueError(f"expected (H, W) mask, got shape {mask.shape}")
    PILImage.fromarray(mask, mode="L").save(Path(path), format="PNG")


def ensure_image(img: np.ndarray) -> np.ndarray:
    """Validate and normalize an in-memory image to (H, W, 3) uint8."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected (H, W, 3) image, got shape {arr.shape}")
    return arr.astype(np.uint8, copy=False)
