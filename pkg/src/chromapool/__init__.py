"""Garment color extraction via attention-weighted spatial pooling."""

from .attention import (
    TemperatureResult,
    TemperatureSpec,
    colorname_attention,
    combine,
    object_attention,
    solve_temperature,
)
from .baselines import KMeansConfig, colorname_rgb_baseline, kmeans_lab, kmeans_palette
from .colorspace import ciede2000, lab_euclidean, lab_to_rgb, rgb_to_lab
from .dataset import Annotation, SynthSpec, read_annotations, synth_generate, write_annotations
from .errors import ChromapoolError, ConfigError, NotFoundError, ParseError, ProcessingError
from .evaluation import (
    BenchmarkResult,
    EvalOptions,
    ScoreReport,
    match_palettes,
    run_benchmark,
    threshold_score,
)
from .illumination import (
    Illuminant,
    estimate_illuminant,
    histogram_stretch,
    von_kries_correct,
)
from .palette import Palette, PaletteEntry, default_palette, load_palette, name_histogram, nearest_name, save_palette
from .pipeline import (
    ColorPrediction,
    PipelineConfig,
    estimate_color_count,
    extract_mono,
    extract_multi,
    nms_colors,
)

__version__ = "0.1.0"
