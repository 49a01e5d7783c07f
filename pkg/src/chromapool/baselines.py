"""Reference baselines: unsupervised K-means pixel clustering and
colorname-RGB lookup.

K-means runs in Lab space (clusters match perception better than in raw
RGB) with k-means++ seeding from an explicit seed, multiple restarts and
Lloyd iterations until the centroids move less than `tol`. Colors are
ranked by the number of pixels in each cluster.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .colorspace import lab_to_rgb, rgb_to_lab
from .errors import ConfigError, ProcessingError
from .images import ensure_image
from .palette import Palette, name_histogram, nearest_name
from .pipeline import ColorPrediction


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    seed: int = 0
    max_iters: int = 100
    tol: float = 1e-4
    n_init: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k!r}")
        if self.max_iters < 1:
            raise ConfigError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if self.tol < 0:
            raise ConfigError(f"tol must be >= 0, got {self.tol!r}")
        if self.n_init < 1:
            raise ConfigError(f"n_init must be >= 1, got {self.n_init!r}")


def _plus_plus_init(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    centers[0] = points[rng.integers(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for i in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[i] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centers[i]) ** 2, axis=1))
    return centers


def _lloyd(
    points: np.ndarray, centers: np.ndarray, max_iters: int, tol: float
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    k = centers.shape[0]
    labels = np.zeros(points.shape[0], dtype=np.int64)
    history: list[float] = []
    for _ in range(max_iters):
        d2 = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
        labels = np.argmin(d2, axis=1)
        history.append(float(d2[np.arange(points.shape[0]), labels].sum()))
        new_centers = centers.copy()
        for i in range(k):
            members = points[labels == i]
            if members.shape[0] == 0:
                # Revive an empty cluster at the point farthest from its center.
                worst = int(np.argmax(d2[np.arange(points.shape[0]), labels]))
                new_centers[i] = points[worst]
            else:
                new_centers[i] = members.mean(axis=0)
        shift = np.sqrt(np.sum((new_centers - centers) ** 2, axis=1)).max()
        centers = new_centers
        if shift < tol:
            break
    d2 = np.sum((points[:, None, :] - centers[None, :, :]) ** 2, axis=2)
    labels = np.argmin(d2, axis=1)
    objective = float(d2[np.arange(points.shape[0]), labels].sum())
    history.append(objective)
    return centers, labels, objective, history


def kmeans_lab(
    points: np.ndarray, cfg: KMeansConfig
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    """Cluster (N, 3) Lab points; returns (centers, labels, objective, history).

    `history` is the per-iteration objective of the winning restart (always
    non-increasing). Deterministic given cfg.seed.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != 3:
        raise ValueError(f"expected (N, 3) Lab points, got {points.shape}")
    if points.shape[0] < cfg.k:
        raise ProcessingError(
            f"insufficient pixels: {points.shape[0]} points for k={cfg.k}"
        )
    rng = np.random.default_rng(cfg.seed)
    best = None
    for _ in range(cfg.n_init):
        centers = _plus_plus_init(points, cfg.k, rng)
        result = _lloyd(points, centers, cfg.max_iters, cfg.tol)
        if best is None or result[2] < best[2]:
            best = result
    return best


def kmeans_palette(
    img: np.ndarray, mask: np.ndarray, cfg: KMeansConfig, palette: Palette | None = None
) -> list[ColorPrediction]:
    """Dominant colors of the masked region via K-means over pixel Labs.

    Clusters the Lab values of pixels with mask weight > 0 and returns the
    centroids as RGB, ranked by descending member count. Names come from
    the palette when one is given, otherwise from the cluster index.
    """
    img = ensure_image(img)
    m = np.asarray(mask, dtype=np.float64)
    if m.shape != img.shape[:2]:
        raise ProcessingError(f"mask shape {m.shape} does not match image {img.shape[:2]}")
    pixels = img[m > 0.0]
    if pixels.shape[0] < cfg.k:
        raise ProcessingError(
            f"insufficient pixels: {pixels.shape[0]} in mask support for k={cfg.k}"
        )
    centers, labels, _, _ = kmeans_lab(rgb_to_lab(pixels), cfg)
    counts = np.bincount(labels, minlength=cfg.k)
    order = np.argsort(-counts, kind="stable")
    preds = []
    for rank, i in enumerate(order, start=1):
        rgb = tuple(int(v) for v in lab_to_rgb(centers[i]))
        name = nearest_name(rgb, palette).name if palette is not None else f"cluster-{i}"
        preds.append(
            ColorPrediction(rgb=rgb, name=name, mass=float(counts[i] / labels.size), rank=rank)
        )
    return preds


def colorname_rgb_baseline(
    img: np.ndarray, obj: np.ndarray, palette: Palette, n: int
) -> list[ColorPrediction]:
    """Name-then-lookup baseline: top-n names, each mapped to its canonical RGB.

    No pooling refinement; predictions are palette RGBs verbatim. Returns
    fewer than n entries when fewer names have nonzero mass.
    """
    if n < 1:
        raise ConfigError(f"n must be >= 1, got {n!r}")
    hist = name_histogram(img, obj, palette)
    return [
        ColorPrediction(rgb=entry.rgb, name=entry.name, mass=mass, rank=rank)
        for rank, (entry, mass) in enumerate(hist[:n], start=1)
    ]
