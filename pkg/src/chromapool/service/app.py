"""FastAPI application wrapping the extraction engine.

All endpoints operate on server-local paths: the service is meant to run
next to the data it processes (the CLI embeds it in-process by default).
Domain errors map to a stable JSON envelope {"error": code, "message": ...}.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..attention import colorname_attention, combine, object_attention, solve_temperature
from ..baselines import KMeansConfig, colorname_rgb_baseline, kmeans_palette
from ..dataset import SynthSpec, read_annotations, synth_generate
from ..errors import ChromapoolError, ConfigError, NotFoundError, ParseError, ProcessingError
from ..evaluation import EvalOptions, run_benchmark, write_per_item_csv
from ..images import load_image
from ..palette import Palette, default_palette, load_palette, save_palette
from ..pipeline import ColorPrediction, correct_image, extract_mono, extract_multi
from ..render import write_heatmap, write_swatch
from . import models

_STATUS = {
    NotFoundError: 404,
    ParseError: 400,
    ConfigError: 400,
    ProcessingError: 422,
}


def _prediction_models(preds: list[ColorPrediction]) -> list[models.PredictionModel]:
    return [
        models.PredictionModel(rgb=list(p.rgb), name=p.name, mass=p.mass, rank=p.rank)
        for p in preds
    ]


def _load_palette_arg(path: str | None) -> Palette:
    return load_palette(path) if path else default_palette()


def create_app() -> FastAPI:
    app = FastAPI(title="chromapool", version="0.1.0")

    @app.exception_handler(ChromapoolError)
    async def domain_error(request: Request, exc: ChromapoolError):
        status = next((s for t, s in _STATUS.items() if isinstance(exc, t)), 500)
        return JSONResponse(status_code=status, content={"error": exc.code, "message": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400, content={"error": "invalid_config", "message": str(exc)}
        )

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/palette/default", response_model=models.PaletteResponse)
    def palette_default():
        return models.PaletteResponse(
            entries=[
                models.PaletteEntryModel(name=e.name, rgb=list(e.rgb))
                for e in default_palette()
            ]
        )

    @app.post("/palette/dump", response_model=models.PaletteDumpResponse)
    def palette_dump(req: models.PaletteDumpRequest):
        palette = default_palette()
        save_palette(palette, req.out)
        return models.PaletteDumpResponse(path=req.out, entries=len(palette))

    @app.post("/palette/check", response_model=models.PaletteCheckResponse)
    def palette_check(req: models.PaletteCheckRequest):
        palette = load_palette(req.path)
        return models.PaletteCheckResponse(path=req.path, entries=len(palette))

    @app.post("/extract", response_model=models.ExtractResponse)
    def extract(req: models.ExtractRequest):
        if req.mode not in ("multi", "mono"):
            raise ConfigError(f"mode must be 'multi' or 'mono', got {req.mode!r}")
        cfg = req.config.to_config()
        palette = _load_palette_arg(req.palette)
        img = load_image(req.image)
        obj = object_attention(img, req.mask)
        if req.mode == "mono":
            preds = [extract_mono(img, obj, cfg, palette)]
        else:
            preds = extract_multi(img, obj, cfg, palette)
        if req.swatch:
            write_swatch(preds, req.swatch)
        if req.heatmap:
            # Recreate the combined attention of the top prediction.
            corrected = correct_image(img, cfg)
            entry = next(e for e in palette if e.name == preds[0].name)
            t = solve_temperature(corrected, entry.rgb, obj, cfg.temperature)
            combined = combine(obj, colorname_attention(corrected, entry.rgb, t.t))
            write_heatmap(combined, req.heatmap)
        return models.ExtractResponse(
            predictions=_prediction_models(preds), swatch=req.swatch, heatmap=req.heatmap
        )

    @app.post("/baseline", response_model=models.BaselineResponse)
    def baseline(req: models.BaselineRequest):
        palette = _load_palette_arg(req.palette)
        img = load_image(req.image)
        obj = object_attention(img, req.mask)
        if req.method == "kmeans":
            preds = kmeans_palette(img, obj, KMeansConfig(k=req.k, seed=req.seed), palette)
        elif req.method == "colorname":
            preds = colorname_rgb_baseline(img, obj, palette, req.n)
        else:
            raise ConfigError(f"baseline method must be 'kmeans' or 'colorname', got {req.method!r}")
        return models.BaselineResponse(predictions=_prediction_models(preds))

    @app.post("/synth", response_model=models.SynthResponse)
    def synth(req: models.SynthRequest):
        spec = SynthSpec(
            seed=req.seed,
            count=req.count,
            shape=req.shape,
            noise_sigma=req.noise_sigma,
            illuminant_gains=tuple(req.illuminant) if req.illuminant else None,
            background=tuple(req.background),
            width=req.width,
            height=req.height,
        )
        annotations = synth_generate(spec, req.out)
        return models.SynthResponse(
            annotations=str(Path(req.out) / "annotations.jsonl"), items=len(annotations)
        )

    @app.post("/evaluate", response_model=models.EvaluateResponse)
    def evaluate(req: models.EvaluateRequest):
        annotations = read_annotations(req.data)
        options = EvalOptions(
            pipeline=req.config.to_config(),
            thresholds=tuple(req.thresholds),
            kmeans_k=req.k,
            baseline_n=req.n,
            seed=req.seed,
            use_masks=req.use_masks,
            jobs=req.jobs,
        )
        result = run_benchmark(
            annotations, Path(req.data).parent, req.method, options,
            palette=_load_palette_arg(req.palette),
        )
        if req.report:
            Path(req.report).write_text(result.report_json())
        if req.csv:
            write_per_item_csv(result, req.csv)
        return models.EvaluateResponse(
            method=result.method,
            thresholds=list(result.report.thresholds),
            main_color=list(result.report.main_color),
            multi_color=list(result.report.multi_color),
            n_items=result.report.n_items,
            n_gt_colors=result.report.n_gt_colors,
            n_failed=len(result.failures),
            table=result.report.table_text(),
            report=req.report,
            csv=req.csv,
        )

    return app
