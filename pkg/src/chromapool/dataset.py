"""Annotation file format and the synthetic garment-image generator.

Annotations are JSONL, one object per line, with keys: image, mask
(optional), category, colors (list of [r, g, b] in decreasing importance,
length 1-3) and illuminant (optional [g_r, g_g, g_b] synthetic ground
truth). Image and mask paths are stored relative to the annotations file.

Ground-truth colors are recorded before noise and before the synthetic
illuminant is applied, i.e. as the garment would look under ideal white
light.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .colorspace import ciede2000, rgb_to_lab
from .errors import ConfigError, ParseError, ProcessingError
from .images import save_image, save_mask

CATEGORIES = ("top", "dress", "coat", "pants", "shoes")

SHAPES = ("ellipse", "rectangle", "stripes:2", "stripes:3")

# Garment colors keep this much CIEDE2000 separation from each other and
# from the background so ground truths stay distinct under NMS.
_MIN_COLOR_SEP = 30.0
_MIN_BG_SEP = 20.0
_CHANNEL_LO, _CHANNEL_HI = 10, 220


@dataclass(frozen=True)
class Annotation:
    image_path: str
    category: str
    colors: tuple[tuple[int, int, int], ...]
    mask_path: str | None = None
    illuminant: tuple[float, float, float] | None = None

    def __post_init__(self):
        if not self.image_path:
            raise ConfigError("annotation image path must be non-empty")
        if not 1 <= len(self.colors) <= 3:
            raise ConfigError(f"annotation needs 1-3 colors, got {len(self.colors)}")


@dataclass(frozen=True)
class SynthSpec:
    seed: int
    count: int
    shape: str = "ellipse"
    noise_sigma: float = 0.0
    illuminant_gains: tuple[float, float, float] | None = None
    background: tuple[int, int, int] = (200, 200, 200)
    width: int = 128
    height: int = 128

    def __post_init__(self):
        if self.count < 1:
            raise ConfigError(f"count must be >= 1, got {self.count!r}")
        if self.shape not in SHAPES:
            raise ConfigError(f"unknown shape {self.shape!r}; choose from {SHAPES}")
        if not 0.0 <= self.noise_sigma <= 30.0:
            raise ConfigError(f"noise_sigma must lie in [0, 30], got {self.noise_sigma!r}")
        if self.illuminant_gains is not None:
            g = self.illuminant_gains
            if len(g) != 3 or any(not 0.0 < v <= 1.0 for v in g):
                raise ConfigError(f"illuminant gains must lie in (0, 1]: {g!r}")
        if any(not 0 <= v <= 255 for v in self.background):
            raise ConfigError(f"background channels out of range: {self.background!r}")
        if self.width < 16 or self.height < 16:
            raise ConfigError("images must be at least 16x16")

    @property
    def n_colors(self) -> int:
        return int(self.shape.split(":")[1]) if self.shape.startswith("stripes") else 1


def _sample_colors(rng: np.random.Generator, n: int, background) -> list[tuple[int, int, int]]:
    bg_lab = rgb_to_lab(background)
    colors: list[tuple[int, int, int]] = []
    labs: list[np.ndarray] = []
    for _ in range(200 * n):
        c = tuple(int(v) for v in rng.integers(_CHANNEL_LO, _CHANNEL_HI + 1, size=3))
        lab = rgb_to_lab(c)
        if ciede2000(lab, bg_lab) < _MIN_BG_SEP:
            continue
        if any(ciede2000(lab, other) < _MIN_COLOR_SEP for other in labs):
            continue
        colors.append(c)
        labs.append(lab)
        if len(colors) == n:
            return colors
    raise ProcessingError("could not sample sufficiently separated garment colors")


def _region_mask(spec: SynthSpec, rng: np.random.Generator) -> np.ndarray:
    w, h = spec.width, spec.height
    cx = w / 2.0 + rng.uniform(-0.04, 0.04) * w
    cy = h / 2.0 + rng.uniform(-0.04, 0.04) * h
    ax = rng.uniform(0.33, 0.45) * w
    ay = rng.uniform(0.30, 0.42) * h
    ys = np.arange(h)[:, None]
    xs = np.arange(w)[None, :]
    if spec.shape == "ellipse":
        return ((xs - cx) / ax) ** 2 + ((ys - cy) / ay) ** 2 <= 1.0
    return (np.abs(xs - cx) <= ax) & (np.abs(ys - cy) <= ay)


def _band_fractions(rng: np.random.Generator, n: int) -> list[float]:
    if n == 2:
        f1 = rng.uniform(0.55, 0.70)
        return [f1, 1.0 - f1]
    f1 = rng.uniform(0.42, 0.50)
    f2 = rng.uniform(0.29, 0.33)
    return [f1, f2, 1.0 - f1 - f2]


def _render_item(spec: SynthSpec, rng: np.random.Generator):
    region = _region_mask(spec, rng)
    colors = _sample_colors(rng, spec.n_colors, spec.background)
    canvas = np.empty((spec.height, spec.width, 3), dtype=np.float64)
    canvas[:] = spec.background
    if spec.n_colors == 1:
        canvas[region] = colors[0]
    else:
        cols = np.where(region.any(axis=0))[0]
        x0, x1 = cols.min(), cols.max() + 1
        edges = np.cumsum([0.0, *_band_fractions(rng, spec.n_colors)]) * (x1 - x0) + x0
        xs = np.arange(spec.width)[None, :]
        areas = []
        for i, color in enumerate(colors):
            band = region & (xs >= edges[i]) & (xs < edges[i + 1])
            canvas[band] = color
            areas.append(int(band.sum()))
        # Importance order must match painted area, not the sampling order.
        order = np.argsort(-np.asarray(areas), kind="stable")
        colors = [colors[i] for i in order]
    if spec.noise_sigma > 0:
        canvas += rng.normal(0.0, spec.noise_sigma, canvas.shape)
        canvas = np.clip(canvas, 0.0, 255.0)
    if spec.illuminant_gains is not None:
        canvas *= np.asarray(spec.illuminant_gains)
    img = np.clip(np.rint(canvas), 0, 255).astype(np.uint8)
    mask = np.where(region, 255, 0).astype(np.uint8)
    return img, mask, colors


def synth_generate(spec: SynthSpec, out_dir: str | Path) -> list[Annotation]:
    """Render a synthetic dataset and write images, masks and annotations.

    Fully deterministic given spec.seed (items use seeds spawned per index).
    Returns the annotation list; the same list is written to
    out_dir/annotations.jsonl.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    children = np.random.SeedSequence(spec.seed).spawn(spec.count)
    annotations: list[Annotation] = []
    for i in range(spec.count):
        rng = np.random.default_rng(children[i])
        img, mask, colors = _render_item(spec, rng)
        image_name = f"item-{i:04d}.png"
        mask_name = f"item-{i:04d}-mask.png"
        save_image(img, out_dir / image_name)
        save_mask(mask, out_dir / mask_name)
        annotations.append(
            Annotation(
                image_path=image_name,
                mask_path=mask_name,
                category=CATEGORIES[i % len(CATEGORIES)],
                colors=tuple(colors),
                illuminant=spec.illuminant_gains,
            )
        )
    write_annotations(annotations, out_dir / "annotations.jsonl")
    return annotations


def write_annotations(annotations: list[Annotation], path: str | Path) -> None:
    """Write annotations as JSONL; optional keys are omitted when absent."""
    with Path(path).open("w") as fh:
        for ann in annotations:
            record: dict = {"image": ann.image_path}
            if ann.mask_path is not None:
                record["mask"] = ann.mask_path
            record["category"] = ann.category
            record["colors"] = [list(c) for c in ann.colors]
            if ann.illuminant is not None:
                record["illuminant"] = list(ann.illuminant)
            fh.write(json.dumps(record) + "\n")


def _parse_color(value, where: str) -> tuple[int, int, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ParseError(f"{where}: colors must be [r,g,b] triples")
    channels = []
    for v in value:
        if not isinstance(v, int) or not 0 <= v <= 255:
            raise ParseError(f"{where}: channel out of range [0,255]: {v!r}")
        channels.append(v)
    return tuple(channels)


def read_annotations(path: str | Path) -> list[Annotation]:
    """Read a JSONL annotations file, reporting the line of any defect."""
    path = Path(path)
    if not path.is_file():
        raise ParseError(f"annotations file not found: {path}")
    annotations: list[Annotation] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"{where}: malformed JSON ({exc.msg})") from None
            if not isinstance(record, dict):
                raise ParseError(f"{where}: expected a JSON object")
            unknown = set(record) - {"image", "mask", "category", "colors", "illuminant"}
            if unknown:
                raise ParseError(f"{where}: unknown keys {sorted(unknown)}")
            image = record.get("image")
            if not isinstance(image, str) or not image:
                raise ParseError(f"{where}: missing or empty image path")
            category = record.get("category")
            if not isinstance(category, str) or not category:
                raise ParseError(f"{where}: missing category")
            colors_raw = record.get("colors")
            if not isinstance(colors_raw, list) or not 1 <= len(colors_raw) <= 3:
                raise ParseError(f"{where}: colors must list 1-3 entries")
            colors = tuple(_parse_color(c, where) for c in colors_raw)
            mask = record.get("mask")
            if mask is not None and (not isinstance(mask, str) or not mask):
                raise ParseError(f"{where}: mask must be a non-empty path")
            ill = record.get("illuminant")
            if ill is not None:
                if (
                    not isinstance(ill, list)
                    or len(ill) != 3
                    or any(not isinstance(v, (int, float)) or not 0.0 < v <= 1.0 for v in ill)
                ):
                    raise ParseError(f"{where}: illuminant must be three gains in (0,1]")
                ill = tuple(float(v) for v in ill)
            annotations.append(
                Annotation(
                    image_path=image,
                    mask_path=mask,
                    category=category,
                    colors=colors,
                    illuminant=ill,
                )
            )
    return annotations
