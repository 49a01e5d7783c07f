"""The 72-name color vocabulary and first-stage color naming.

The default palette is procedural: an 8-hue x 3-lightness x 3-saturation
HSL lattice. The fully desaturated plane would collapse into duplicate
grays, so its 24 slots hold an even neutral ramp instead, with the exact
black, mid gray and white entries carrying human-readable aliases. Naming
uses CIEDE2000 in Lab space, never raw RGB distance.
"""

from __future__ import annotations

import colorsys
import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .colorspace import ciede2000, rgb_to_lab
from .errors import NotFoundError, ParseError
from .images import ensure_image

_HUES = 8
_LIGHTNESS = (0.25, 0.50, 0.75)
_SATURATIONS = (1.0, 0.55)  # the third (zero) saturation level is the neutral ramp
_NEUTRAL_SLOTS = _HUES * len(_LIGHTNESS)  # 24

PALETTE_HEADER = ("name", "r", "g", "b")


@dataclass(frozen=True)
class PaletteEntry:
    name: str
    rgb: tuple[int, int, int]
    lab: tuple[float, float, float]

    @classmethod
    def make(cls, name: str, rgb: tuple[int, int, int]) -> "PaletteEntry":
        lab = rgb_to_lab(rgb)
        return cls(name=name, rgb=tuple(int(v) for v in rgb), lab=tuple(float(v) for v in lab))


@dataclass(frozen=True)
class Palette:
    """Ordered, immutable list of named reference colors."""

    entries: tuple[PaletteEntry, ...]
    _lab_array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.entries:
            raise ParseError("empty palette")
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            dupe = next(n for n in names if names.count(n) > 1)
            raise ParseError(f"duplicate palette name {dupe!r}")
        object.__setattr__(
            self, "_lab_array", np.array([e.lab for e in self.entries], dtype=np.float64)
        )

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def lab_array(self) -> np.ndarray:
        return self._lab_array


def default_palette() -> Palette:
    """Build the deterministic 72-entry default palette."""
    entries: list[PaletteEntry] = []
    for li, light in enumerate(_LIGHTNESS):
        for si, sat in enumerate(_SATURATIONS):
            for hi in range(_HUES):
                r, g, b = colorsys.hls_to_rgb(hi / _HUES, light, sat)
                rgb = (int(round(r * 255)), int(round(g * 255)), int(round(b * 255)))
                entries.append(PaletteEntry.make(f"hue{hi}-light{li}-sat{si}", rgb))
    # Neutral ramp: 24 evenly spaced grays from black to white, with exact
    # black / mid gray / white aliased by name.
    for i in range(_NEUTRAL_SLOTS):
        v = int(round(255 * i / (_NEUTRAL_SLOTS - 1)))
        if i == _NEUTRAL_SLOTS // 2:
            name, v = "gray", 128
        elif i == 0:
            name = "black"
        elif i == _NEUTRAL_SLOTS - 1:
            name = "white"
        else:
            name = f"gray-{i:02d}"
        entries.append(PaletteEntry.make(name, (v, v, v)))
    return Palette(entries=tuple(entries))


def load_palette(path: str | Path) -> Palette:
    """Parse a `name,r,g,b` CSV (with header) into a palette."""
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"palette file not found: {path}")
    entries: list[PaletteEntry] = []
    seen: set[str] = set()
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty palette") from None
        if tuple(h.strip().lower() for h in header) != PALETTE_HEADER:
            raise ParseError(f"{path}: expected header name,r,g,b, got {','.join(header)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise ParseError(f"{path}:{lineno}: expected 4 fields, got {len(row)}")
            name = row[0].strip()
            if not name:
                raise ParseError(f"{path}:{lineno}: empty color name")
            if name in seen:
                raise ParseError(f"{path}:{lineno}: duplicate color name {name!r}")
            try:
                channels = tuple(int(cell.strip()) for cell in row[1:])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-integer channel value") from None
            if any(not 0 <= v <= 255 for v in channels):
                raise ParseError(f"{path}:{lineno}: channel out of range [0,255]: {channels}")
            seen.add(name)
            entries.append(PaletteEntry.make(name, channels))
    if not entries:
        raise ParseError(f"{path}: empty palette")
    return Palette(entries=tuple(entries))


def save_palette(palette: Palette, path: str | Path) -> None:
    """Write a palette as a `name,r,g,b` CSV."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PALETTE_HEADER)
        for entry in palette:
            writer.writerow([entry.name, *entry.rgb])


def nearest_name(c, palette: Palette) -> PaletteEntry:
    """Entry with minimal CIEDE2000 distance to c; ties go to palette order."""
    lab = rgb_to_lab(np.asarray(c, dtype=np.float64))
    d = ciede2000(lab, palette.lab_array)
    return palette.entries[int(np.argmin(d))]


def _nearest_indices(pixels: np.ndarray, palette: Palette) -> np.ndarray:
    """Nearest palette index for each pixel of an (N, 3) uint8 array.

    Deduplicates pixel colors first; the distance matrix is then
    (unique colors x entries) instead of (pixels x entries).
    """
    unique, inverse = np.unique(pixels.reshape(-1, 3), axis=0, return_inverse=True)
    labs = rgb_to_lab(unique)
    d = ciede2000(labs[:, None, :], palette.lab_array[None, :, :])
    return np.argmin(d, axis=1)[inverse]


def name_histogram(
    img: np.ndarray, weights: np.ndarray, palette: Palette
) -> list[tuple[PaletteEntry, float]]:
    """Attention-weighted histogram over palette names.

    Each pixel votes its attention weight for its nearest entry. Returns
    (entry, mass) pairs with nonzero mass, sorted by descending mass with
    ties broken by palette order; masses sum to 1.
    """
    img = ensure_image(img)
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != img.shape[:2]:
        raise ValueError(f"weights shape {w.shape} does not match image {img.shape[:2]}")
    idx = _nearest_indices(img.reshape(-1, 3), palette)
    masses = np.bincount(idx, weights=w.reshape(-1), minlength=len(palette))
    order = np.argsort(-masses, kind="stable")
    return [(palette.entries[i], float(masses[i])) for i in order if masses[i] > 0.0]
