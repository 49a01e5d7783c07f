"""Threshold scoring and the benchmark harness.

Scores follow the percentage-within-CIEDE2000-threshold protocol at the
default thresholds 10/20/30/40. The main-color score compares the rank-1
prediction to the rank-1 ground truth per item; the multi-color score
matches predictions to ground-truth colors one-to-one (minimum total
distance, exhaustive over at most 3! assignments) and scores every
ground-truth color, counting unmatched ones as misses at every threshold.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np

from .attention import object_attention
from .baselines import KMeansConfig, colorname_rgb_baseline, kmeans_palette
from .colorspace import ciede2000, rgb_to_lab
from .dataset import Annotation
from .errors import ChromapoolError, ConfigError
from .images import load_image
from .palette import Palette, default_palette
from .pipeline import ColorPrediction, PipelineConfig, extract_multi

METHODS = ("pipeline", "kmeans", "colorname")

DEFAULT_THRESHOLDS = (10.0, 20.0, 30.0, 40.0)


def _rgb_of(pred) -> tuple[int, int, int]:
    return pred.rgb if isinstance(pred, ColorPrediction) else tuple(pred)


def match_palettes(preds, gts) -> list[tuple[int, int | None, float]]:
    """Optimal one-to-one assignment of ground-truth colors to predictions.

    Returns one (gt_index, pred_index or None, delta) triple per ground
    truth; unmatched ground truths (more truths than predictions) carry
    pred_index None and an infinite delta. Exhaustive over all injective
    mappings, exact for the 1-3 color lists used here.
    """
    if not gts:
        raise ConfigError("ground-truth color list is empty")
    gt_labs = rgb_to_lab(np.asarray([tuple(g) for g in gts], dtype=np.float64))
    if not preds:
        return [(g, None, math.inf) for g in range(len(gts))]
    pred_labs = rgb_to_lab(np.asarray([_rgb_of(p) for p in preds], dtype=np.float64))
    delta = ciede2000(gt_labs[:, None, :], pred_labs[None, :, :])
    slots: list[int | None] = list(range(len(preds)))
    slots += [None] * max(0, len(gts) - len(preds))
    best = None
    best_total = math.inf
    for perm in permutations(slots, len(gts)):
        total = sum(delta[g, s] for g, s in enumerate(perm) if s is not None)
        if total < best_total:
            best, best_total = perm, total
    return [
        (g, s, float(delta[g, s]) if s is not None else math.inf)
        for g, s in enumerate(best)
    ]


@dataclass(frozen=True)
class ScoreReport:
    thresholds: tuple[float, ...]
    main_color: tuple[float, ...]
    multi_color: tuple[float, ...]
    n_items: int
    n_gt_colors: int

    def to_dict(self) -> dict:
        return {
            "thresholds": list(self.thresholds),
            "main_color": list(self.main_color),
            "multi_color": list(self.multi_color),
            "n_items": self.n_items,
            "n_gt_colors": self.n_gt_colors,
        }

    def table_text(self) -> str:
        """Human-readable table; percentages rounded to integers for display."""
        header = " | ".join(f"<={t:g}" for t in self.thresholds)
        lines = [
            f"items: {self.n_items}   ground-truth colors: {self.n_gt_colors}",
            f"{'':12s}  {header}",
            "main color   " + "   ".join(f"{round(v):3d}" for v in self.main_color),
            "multi color  " + "   ".join(f"{round(v):3d}" for v in self.multi_color),
        ]
        return "\n".join(lines)


def threshold_score(
    annotations: list[Annotation],
    predictions: list[list[ColorPrediction]],
    thresholds=DEFAULT_THRESHOLDS,
) -> ScoreReport:
    """Score aligned prediction lists against their annotations."""
    if len(annotations) != len(predictions):
        raise ConfigError(
            f"misaligned lists: {len(annotations)} annotations vs {len(predictions)} predictions"
        )
    thresholds = tuple(float(t) for t in thresholds)
    main_deltas: list[float] = []
    multi_deltas: list[float] = []
    for ann, preds in zip(annotations, predictions):
        if preds:
            main_deltas.append(
                float(ciede2000(rgb_to_lab(preds[0].rgb), rgb_to_lab(ann.colors[0])))
            )
        else:
            main_deltas.append(math.inf)
        multi_deltas.extend(d for _, _, d in match_palettes(preds, list(ann.colors)))

    def pct(deltas: list[float], limit: float) -> float:
        if not deltas:
            return 0.0
        return 100.0 * sum(1 for d in deltas if d <= limit) / len(deltas)

    return ScoreReport(
        thresholds=thresholds,
        main_color=tuple(pct(main_deltas, t) for t in thresholds),
        multi_color=tuple(pct(multi_deltas, t) for t in thresholds),
        n_items=len(annotations),
        n_gt_colors=len(multi_deltas),
    )


@dataclass(frozen=True)
class EvalOptions:
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS
    kmeans_k: int | None = None  # None: use the ground-truth color count
    baseline_n: int | None = None  # None: use the ground-truth color count
    kmeans_n_init: int = 10
    seed: int = 0
    use_masks: bool = True
    jobs: int = 1


@dataclass(frozen=True)
class ItemResult:
    item: str
    predictions: tuple[ColorPrediction, ...]
    main_delta: float
    gt_deltas: tuple[float, ...]


@dataclass(frozen=True)
class BenchmarkResult:
    method: str
    report: ScoreReport
    items: tuple[ItemResult, ...]
    failures: tuple[tuple[str, str], ...]

    def report_dict(self) -> dict:
        out = {"method": self.method, "n_failed": len(self.failures)}
        out.update(self.report.to_dict())
        return out

    def report_json(self) -> str:
        return json.dumps(self.report_dict(), sort_keys=True, indent=2) + "\n"


def _item_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def run_benchmark(
    annotations: list[Annotation],
    base_dir: str | Path,
    method: str,
    options: EvalOptions | None = None,
    palette: Palette | None = None,
) -> BenchmarkResult:
    """Run one extraction method over a dataset and score it.

    Relative image/mask paths resolve against base_dir. Items whose
    extraction raises a chromapool error are excluded from scoring and
    reported in `failures`.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
    options = options or EvalOptions()
    palette = palette or default_palette()
    base = Path(base_dir)

    def worker(pair):
        index, ann = pair
        img = load_image(base / ann.image_path)
        mask = base / ann.mask_path if options.use_masks and ann.mask_path else None
        obj = object_attention(img, mask)
        if method == "pipeline":
            return extract_multi(img, obj, options.pipeline, palette)
        if method == "kmeans":
            cfg = KMeansConfig(
                k=options.kmeans_k or len(ann.colors),
                seed=_item_seed(options.seed, index),
                n_init=options.kmeans_n_init,
            )
            return kmeans_palette(img, obj, cfg, palette)
        return colorname_rgb_baseline(img, obj, palette, options.baseline_n or len(ann.colors))

    indexed = list(enumerate(annotations))
    if options.jobs > 1:
        with ThreadPoolExecutor(max_workers=options.jobs) as pool:
            raw = list(pool.map(lambda p: _guard(worker, p), indexed))
    else:
        raw = [_guard(worker, p) for p in indexed]

    scored_anns: list[Annotation] = []
    scored_preds: list[list[ColorPrediction]] = []
    failures: list[tuple[str, str]] = []
    items: list[ItemResult] = []
    for (index, ann), outcome in zip(indexed, raw):
        if isinstance(outcome, ChromapoolError):
            failures.append((ann.image_path, str(outcome)))
            continue
        scored_anns.append(ann)
        scored_preds.append(outcome)
    report = threshold_score(scored_anns, scored_preds, options.thresholds)
    for ann, preds in zip(scored_anns, scored_preds):
        matches = match_palettes(preds, list(ann.colors))
        main = (
            float(ciede2000(rgb_to_lab(preds[0].rgb), rgb_to_lab(ann.colors[0])))
            if preds
            else math.inf
        )
        items.append(
            ItemResult(
                item=ann.image_path,
                predictions=tuple(preds),
                main_delta=main,
                gt_deltas=tuple(d for _, _, d in matches),
            )
        )
    return BenchmarkResult(
        method=method, report=report, items=tuple(items), failures=tuple(failures)
    )


def _guard(fn, arg):
    try:
        return fn(arg)
    except ChromapoolError as exc:
        return exc


def write_per_item_csv(result: BenchmarkResult, path: str | Path) -> None:
    """Write the per-ground-truth-color deltas as `item,gt_rank,delta`."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["item", "gt_rank", "delta"])
        for item in result.items:
            for rank, delta in enumerate(item.gt_deltas, start=1):
                writer.writerow([item.item, rank, "inf" if math.isinf(delta) else f"{delta:.6f}"])
