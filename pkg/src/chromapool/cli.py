"""Command-line client for the extraction service.

The CLI is a thin client: every subcommand builds a request, sends it to
the service layer (embedded in-process by default, or a remote instance via
--server / CHROMAPOOL_SERVER) and prints the JSON response. Config files
are flat key=value files (see chromapool.config); flags override file
values.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

from . import config as cfgmod
from .errors import ChromapoolError
from .pipeline import PipelineConfig

EXIT_CODES = {
    "not_found": 3,
    "parse_error": 4,
    "invalid_config": 5,
    "processing_error": 6,
    "internal": 7,
}

_EPILOG = (
    "Exit codes: 0 success; 2 usage error; 3 file not found; 4 parse error; "
    "5 invalid configuration; 6 unprocessable input; 7 internal error."
)


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # The bundled test client is the supported way to drive an ASGI app
        # synchronously; silence its import-time deprecation chatter.
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _call(server: str | None, method: str, path: str, payload: dict | None = None) -> dict:
    with _client(server) as client:
        if method == "GET":
            resp = client.get(path)
        else:
            resp = client.post(path, json=payload)
    try:
        body = resp.json()
    except ValueError:
        body = {"error": "internal", "message": resp.text}
    if resp.status_code != 200:
        code = EXIT_CODES.get(body.get("error", "internal"), 7)
        click.echo(f"error: {body.get('message', resp.text)}", err=True)
        raise SystemExit(code)
    return body


def _fail(exc: ChromapoolError):
    click.echo(f"error: {exc}", err=True)
    raise SystemExit(EXIT_CODES.get(exc.code, 7))


def _config_payload(cfg: PipelineConfig) -> dict:
    estimator = cfg.estimator
    if estimator == "shades_of_gray":
        estimator = f"shades_of_gray:{cfg.shades_p:g}"
    return {
        "estimator": estimator,
        "temperature": f"{cfg.temperature.mode}:{cfg.temperature.value:g}",
        "clip_percentile": cfg.clip_percentile,
        "max_colors": cfg.max_colors,
        "mass_threshold": cfg.mass_threshold,
        "nms_delta": cfg.nms_delta,
        "candidate_names": cfg.candidate_names,
    }


def _merge_config(config_path: str | None, overrides: dict[str, str | None]) -> PipelineConfig:
    """File values first, then flag overrides; everything validated here."""
    values = cfgmod.parse_flat_file(config_path) if config_path else {}
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    return cfgmod.build_pipeline_config(values)


def _pipeline_flags(fn):
    flags = [
        click.option("--estimator", default=None, help="gray_world | max_rgb | shades_of_gray[:p] | none"),
        click.option("--temperature", default=None, help="fixed:T or adaptive:FRACTION"),
        click.option("--clip-percentile", "clip_percentile", default=None, help="percentile in [0,50) or 'none'"),
        click.option("--max-colors", "max_colors", default=None, help="maximum colors to emit (1-3 typical)"),
        click.option("--mass-threshold", "mass_threshold", default=None, help="color-count mass threshold in (0,1)"),
        click.option("--nms-delta", "nms_delta", default=None, help="CIEDE2000 suppression radius"),
        click.option("--candidate-names", "candidate_names", default=None, help="first-stage candidates to pool"),
    ]
    for flag in reversed(flags):
        fn = flag(fn)
    return fn


@click.group(epilog=_EPILOG)
@click.option("--server", default=None, envvar="CHROMAPOOL_SERVER",
              help="Base URL of a running service; default runs the service in-process.")
@click.pass_context
def main(ctx, server):
    """Garment color extraction, baselines, synthesis and evaluation."""
    ctx.obj = server


@main.command(epilog=_EPILOG)
@click.option("--image", required=True, help="Input PNG or binary PPM.")
@click.option("--mask", default=None, help="Grayscale PNG object mask; omit for the center prior.")
@click.option("--palette", default=None, help="Palette CSV; omit for the built-in 72 names.")
@click.option("--config", "config_path", default=None, envvar="CHROMAPOOL_CONFIG",
              help="Flat key=value pipeline config file.")
@click.option("--mode", type=click.Choice(["multi", "mono"]), default="multi")
@click.option("--out", default=None, help="Directory for swatch.png and attention.png previews.")
@_pipeline_flags
@click.pass_obj
def extract(server, image, mask, palette, config_path, mode, out, **overrides):
    """Predict the color palette of the garment in IMAGE."""
    try:
        cfg = _merge_config(config_path, overrides)
    except ChromapoolError as exc:
        _fail(exc)
    payload = {"image": image, "mask": mask, "palette": palette, "mode": mode,
               "config": _config_payload(cfg)}
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        payload["swatch"] = str(Path(out) / "swatch.png")
        payload["heatmap"] = str(Path(out) / "attention.png")
    body = _call(server, "POST", "/extract", payload)
    click.echo(json.dumps(body["predictions"], indent=2))


@main.command(epilog=_EPILOG)
@click.option("--data", required=True, help="Annotations JSONL file.")
@click.option("--method", required=True, type=click.Choice(["pipeline", "kmeans", "colorname"]))
@click.option("--palette", default=None, help="Palette CSV; omit for the built-in 72 names.")
@click.option("--config", "config_path", default=None, envvar="CHROMAPOOL_CONFIG")
@click.option("--thresholds", default="10,20,30,40", help="Comma-separated CIEDE2000 thresholds.")
@click.option("--k", default=None, type=int, help="K-means cluster count; default ground-truth count.")
@click.option("--n", default=None, type=int, help="Colorname baseline names; default ground-truth count.")
@click.option("--seed", default=0, type=int, help="Seed for the K-means baseline.")
@click.option("--jobs", default=1, type=int, help="Worker threads for per-item evaluation.")
@click.option("--use-masks/--no-masks", default=True, help="Use annotation masks when present.")
@click.option("--out", default=None, help="Directory for report.json and per_item.csv.")
@_pipeline_flags
@click.pass_obj
def evaluate(server, data, method, palette, config_path, thresholds, k, n, seed, jobs,
             use_masks, out, **overrides):
    """Score METHOD over an annotated dataset."""
    try:
        cfg = _merge_config(config_path, overrides)
        ths = [float(t) for t in thresholds.split(",") if t.strip()]
    except ChromapoolError as exc:
        _fail(exc)
    except ValueError:
        click.echo(f"error: bad thresholds {thresholds!r}", err=True)
        raise SystemExit(EXIT_CODES["invalid_config"])
    payload = {"data": data, "method": method, "palette": palette,
               "config": _config_payload(cfg), "thresholds": ths, "k": k, "n": n,
               "seed": seed, "jobs": jobs, "use_masks": use_masks}
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
        payload["report"] = str(Path(out) / "report.json")
        payload["csv"] = str(Path(out) / "per_item.csv")
    body = _call(server, "POST", "/evaluate", payload)
    click.echo(body["table"])
    if body.get("n_failed"):
        click.echo(f"warning: {body['n_failed']} item(s) failed and were excluded", err=True)
    if out:
        click.echo(f"report: {body['report']}")


@main.command(epilog=_EPILOG)
@click.option("--spec", "spec_path", default=None, help="Flat key=value synthesis spec file.")
@click.option("--out", required=True, help="Output directory for images, masks, annotations.")
@click.option("--seed", default=None, type=int)
@click.option("--count", default=None, type=int)
@click.option("--shape", default=None, help="ellipse | rectangle | stripes:2 | stripes:3")
@click.option("--noise-sigma", "noise_sigma", default=None)
@click.option("--illuminant", default=None, help="Three gains 'r,g,b' or 'none'.")
@click.option("--background", default=None, help="Background color 'r,g,b'.")
@click.option("--width", default=None, type=int)
@click.option("--height", default=None, type=int)
@click.pass_obj
def synth(server, spec_path, out, **overrides):
    """Generate a synthetic garment dataset."""
    try:
        values = cfgmod.parse_flat_file(spec_path) if spec_path else {}
        for key, value in overrides.items():
            if value is not None:
                values[key] = str(value)
        spec = cfgmod.build_synth_spec(values)
    except ChromapoolError as exc:
        _fail(exc)
    payload = {
        "out": out, "seed": spec.seed, "count": spec.count, "shape": spec.shape,
        "noise_sigma": spec.noise_sigma,
        "illuminant": list(spec.illuminant_gains) if spec.illuminant_gains else None,
        "background": list(spec.background), "width": spec.width, "height": spec.height,
    }
    body = _call(server, "POST", "/synth", payload)
    click.echo(json.dumps(body, indent=2))


@main.command(epilog=_EPILOG)
@click.option("--image", required=True)
@click.option("--mask", default=None)
@click.option("--palette", default=None)
@click.option("--method", required=True, type=click.Choice(["kmeans", "colorname"]))
@click.option("--k", default=3, type=int)
@click.option("--n", default=3, type=int)
@click.option("--seed", default=0, type=int)
@click.pass_obj
def baseline(server, image, mask, palette, method, k, n, seed):
    """Run a baseline extractor on IMAGE."""
    payload = {"image": image, "mask": mask, "palette": palette, "method": method,
               "k": k, "n": n, "seed": seed}
    body = _call(server, "POST", "/baseline", payload)
    click.echo(json.dumps(body["predictions"], indent=2))


@main.group(epilog=_EPILOG)
def palette():
    """Palette CSV tooling."""


@palette.command(epilog=_EPILOG)
@click.option("--out", required=True, help="Destination CSV path.")
@click.pass_obj
def dump(server, out):
    """Write the built-in 72-entry palette as CSV."""
    body = _call(server, "POST", "/palette/dump", {"out": out})
    click.echo(json.dumps(body, indent=2))


@palette.command(epilog=_EPILOG)
@click.option("--palette", "palette_path", required=True, help="Palette CSV to validate.")
@click.pass_obj
def check(server, palette_path):
    """Validate a palette CSV file."""
    body = _call(server, "POST", "/palette/check", {"path": palette_path})
    click.echo(json.dumps(body, indent=2))


@main.command(epilog=_EPILOG)
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the extraction service with uvicorn."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    sys.exit(main())
