"""Flat key/value config files and the string encodings shared with the CLI.

Pipeline config files hold one `key = value` pair per line (# comments
allowed) with keys exactly matching the PipelineConfig fields:

    estimator        gray_world | max_rgb | shades_of_gray[:p] | none
    temperature      fixed:T | adaptive:FRACTION (a bare number means fixed)
    clip_percentile  percentile in [0, 50), or `none` to skip stretching
    max_colors       integer >= 1
    mass_threshold   real in (0, 1)
    nms_delta        positive real
    candidate_names  integer >= 1

Synthesis spec files use the SynthSpec fields: seed, count, shape,
noise_sigma, illuminant (three gains or `none`), background (r,g,b),
width, height.
"""

from __future__ import annotations

from pathlib import Path

from .attention import TemperatureSpec
from .dataset import SynthSpec
from .errors import ConfigError, NotFoundError
from .pipeline import PipelineConfig

PIPELINE_KEYS = (
    "estimator",
    "temperature",
    "clip_percentile",
    "max_colors",
    "mass_threshold",
    "nms_delta",
    "candidate_names",
)

SYNTH_KEYS = (
    "seed",
    "count",
    "shape",
    "noise_sigma",
    "illuminant",
    "background",
    "width",
    "height",
)


def parse_flat_file(path: str | Path) -> dict[str, str]:
    """Read `key = value` lines into a dict; `#` starts a comment."""
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"config file not found: {path}")
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"{path}:{lineno}: empty key or value")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def parse_temperature(text: str) -> TemperatureSpec:
    text = text.strip()
    try:
        if text.startswith("fixed:"):
            return TemperatureSpec.fixed(float(text.split(":", 1)[1]))
        if text.startswith("adaptive:"):
            return TemperatureSpec.adaptive(float(text.split(":", 1)[1]))
        return TemperatureSpec.fixed(float(text))
    except ValueError:
        raise ConfigError(
            f"temperature must be fixed:T, adaptive:FRACTION or a number, got {text!r}"
        ) from None


def parse_estimator(text: str) -> tuple[str, float]:
    """Split `shades_of_gray:p` into its method and norm order."""
    text = text.strip()
    if text.startswith("shades_of_gray"):
        _, _, p = text.partition(":")
        try:
            return "shades_of_gray", float(p) if p else 6.0
        except ValueError:
            raise ConfigError(f"bad shades_of_gray order {p!r}") from None
    return text, 6.0


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"{key} must be a number, got {text!r}") from None


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key} must be an integer, got {text!r}") from None


def build_pipeline_config(values: dict[str, str]) -> PipelineConfig:
    """Build a PipelineConfig from flat string values, rejecting unknown keys."""
    unknown = set(values) - set(PIPELINE_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs: dict = {}
    if "estimator" in values:
        kwargs["estimator"], kwargs["shades_p"] = parse_estimator(values["estimator"])
    if "temperature" in values:
        kwargs["temperature"] = parse_temperature(values["temperature"])
    if "clip_percentile" in values:
        text = values["clip_percentile"].strip().lower()
        kwargs["clip_percentile"] = None if text == "none" else _parse_float("clip_percentile", text)
    if "max_colors" in values:
        kwargs["max_colors"] = _parse_int("max_colors", values["max_colors"])
    if "mass_threshold" in values:
        kwargs["mass_threshold"] = _parse_float("mass_threshold", values["mass_threshold"])
    if "nms_delta" in values:
        kwargs["nms_delta"] = _parse_float("nms_delta", values["nms_delta"])
    if "candidate_names" in values:
        kwargs["candidate_names"] = _parse_int("candidate_names", values["candidate_names"])
    return PipelineConfig(**kwargs)


def _parse_triple(key: str, text: str, cast):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"{key} needs three comma-separated values, got {text!r}")
    try:
        return tuple(cast(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{key} has a malformed value in {text!r}") from None


def build_synth_spec(values: dict[str, str]) -> SynthSpec:
    """Build a SynthSpec from flat string values, rejecting unknown keys."""
    unknown = set(values) - set(SYNTH_KEYS)
    if unknown:
        raise ConfigError(f"unknown synth keys: {sorted(unknown)}")
    kwargs: dict = {}
    if "seed" in values:
        kwargs["seed"] = _parse_int("seed", values["seed"])
    if "count" in values:
        kwargs["count"] = _parse_int("count", values["count"])
    if "shape" in values:
        kwargs["shape"] = values["shape"].strip()
    if "noise_sigma" in values:
        kwargs["noise_sigma"] = _parse_float("noise_sigma", values["noise_sigma"])
    if "illuminant" in values:
        text = values["illuminant"].strip().lower()
        kwargs["illuminant_gains"] = None if text == "none" else _parse_triple("illuminant", text, float)
    if "background" in values:
        kwargs["background"] = _parse_triple("background", values["background"], int)
    if "width" in values:
        kwargs["width"] = _parse_int("width", values["width"])
    if "height" in values:
        kwargs["height"] = _parse_int("height", values["height"])
    kwargs.setdefault("seed", 0)
    kwargs.setdefault("count", 16)
    return SynthSpec(**kwargs)
