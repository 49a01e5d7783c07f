"""Pydantic request/response models for the extraction service.

Configuration strings use the same encodings as the flat config files
(`temperature="fixed:1"`, `estimator="shades_of_gray:6"`), so the CLI can
pass values through untouched.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..config import parse_estimator, parse_temperature
from ..pipeline import PipelineConfig


class PipelineConfigModel(BaseModel):
    estimator: str = "none"
    temperature: str = "fixed:0.15"
    clip_percentile: float | None = None
    max_colors: int = 3
    mass_threshold: float = 0.15
    nms_delta: float = 12.0
    candidate_names: int = 6

    def to_config(self) -> PipelineConfig:
        estimator, shades_p = parse_estimator(self.estimator)
        return PipelineConfig(
            estimator=estimator,
            shades_p=shades_p,
            temperature=parse_temperature(self.temperature),
            clip_percentile=self.clip_percentile,
            max_colors=self.max_colors,
            mass_threshold=self.mass_threshold,
            nms_delta=self.nms_delta,
            candidate_names=self.candidate_names,
        )


class PredictionModel(BaseModel):
    rgb: list[int] = Field(min_length=3, max_length=3)
    name: str
    mass: float
    rank: int


class ExtractRequest(BaseModel):
    image: str
    mask: str | None = None
    palette: str | None = None
    config: PipelineConfigModel = Field(default_factory=PipelineConfigModel)
    mode: str = "multi"  # "multi" or "mono"
    swatch: str | None = None
    heatmap: str | None = None


class ExtractResponse(BaseModel):
    predictions: list[PredictionModel]
    swatch: str | None = None
    heatmap: str | None = None


class BaselineRequest(BaseModel):
    image: str
    mask: str | None = None
    palette: str | None = None
    method: str  # "kmeans" or "colorname"
    k: int = 3
    n: int = 3
    seed: int = 0


class BaselineResponse(BaseModel):
    predictions: list[PredictionModel]


class SynthRequest(BaseModel):
    out: str
    seed: int = 0
    count: int = 16
    shape: str = "ellipse"
    noise_sigma: float = 0.0
    illuminant: list[float] | None = None
    background: list[int] = Field(default=[200, 200, 200], min_length=3, max_length=3)
    width: int = 128
    height: int = 128


class SynthResponse(BaseModel):
    annotations: str
    items: int


class EvaluateRequest(BaseModel):
    data: str
    method: str  # "pipeline", "kmeans" or "colorname"
    palette: str | None = None
    config: PipelineConfigModel = Field(default_factory=PipelineConfigModel)
    thresholds: list[float] = Field(default=[10.0, 20.0, 30.0, 40.0])
    k: int | None = None
    n: int | None = None
    seed: int = 0
    use_masks: bool = True
    jobs: int = 1
    report: str | None = None
    csv: str | None = None


class EvaluateResponse(BaseModel):
    method: str
    thresholds: list[float]
    main_color: list[float]
    multi_color: list[float]
    n_items: int
    n_gt_colors: int
    n_failed: int
    table: str
    report: str | None = None
    csv: str | None = None


class PaletteEntryModel(BaseModel):
    name: str
    rgb: list[int] = Field(min_length=3, max_length=3)


class PaletteResponse(BaseModel):
    entries: list[PaletteEntryModel]


class PaletteDumpRequest(BaseModel):
    out: str


class PaletteDumpResponse(BaseModel):
    path: str
    entries: int


class PaletteCheckRequest(BaseModel):
    path: str


class PaletteCheckResponse(BaseModel):
    path: str
    entries: int
