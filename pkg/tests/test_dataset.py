import json
from pathlib import Path

import numpy as np
import pytest

from chromapool.attention import object_attention
from chromapool.dataset import (
    Annotation,
    SynthSpec,
    read_annotations,
    synth_generate,
    write_annotations,
)
from chromapool.errors import ConfigError, ParseError
from chromapool.images import load_image, load_mask
from chromapool.palette import default_palette
from chromapool.pipeline import PipelineConfig, extract_mono


def dir_digest(path: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(path.iterdir())}


class TestSynthGenerate:
    def test_same_seed_byte_identical(self, tmp_path):
        spec = SynthSpec(seed=99, count=4, shape="stripes:2", noise_sigma=2.0, width=48, height=48)
        synth_generate(spec, tmp_path / "a")
        synth_generate(spec, tmp_path / "b")
        assert dir_digest(tmp_path / "a") == dir_digest(tmp_path / "b")

    def test_different_seed_differs(self, tmp_path):
        synth_generate(SynthSpec(seed=1, count=2, width=48, height=48), tmp_path / "a")
        synth_generate(SynthSpec(seed=2, count=2, width=48, height=48), tmp_path / "b")
        assert dir_digest(tmp_path / "a") != dir_digest(tmp_path / "b")

    def test_zero_noise_flat_fill_is_exact(self, tmp_path):
        anns = synth_generate(SynthSpec(seed=5, count=3, shape="ellipse", width=48, height=48), tmp_path)
        for ann in anns:
            img = load_image(tmp_path / ann.image_path)
            mask = load_mask(tmp_path / ann.mask_path)
            fg = img[mask > 0]
            assert np.all(fg == ann.colors[0])

    def test_illuminant_multiplies_channels(self, tmp_path):
        spec = SynthSpec(
            seed=5, count=1, shape="ellipse", illuminant_gains=(1.0, 0.5, 0.25),
            width=48, height=48,
        )
        (ann,) = synth_generate(spec, tmp_path)
        img = load_image(tmp_path / ann.image_path)
        mask = load_mask(tmp_path / ann.mask_path)
        expected = np.clip(np.rint(np.array(ann.colors[0]) * (1.0, 0.5, 0.25)), 0, 255)
        assert np.all(img[mask > 0] == expected.astype(np.uint8))

    def test_masks_nonempty_and_in_bounds(self, tmp_path):
        for shape in ("ellipse", "rectangle", "stripes:2", "stripes:3"):
            anns = synth_generate(
                SynthSpec(seed=3, count=2, shape=shape, width=40, height=40),
                tmp_path / shape.replace(":", ""),
            )
            for ann in anns:
                mask = load_mask(tmp_path / shape.replace(":", "") / ann.mask_path)
                assert mask.shape == (40, 40)
                assert (mask > 0).sum() > 0

    def test_stripe_colors_ordered_by_area(self, tmp_path):
        anns = synth_generate(
            SynthSpec(seed=13, count=4, shape="stripes:3", width=64, height=64), tmp_path
        )
        for ann in anns:
            assert len(ann.colors) == 3
            img = load_image(tmp_path / ann.image_path)
            mask = load_mask(tmp_path / ann.mask_path)
            areas = [np.all(img[mask > 0] == c, axis=-1).sum() for c in ann.colors]
            assert areas == sorted(areas, reverse=True)

    def test_extraction_recovers_ground_truth(self, tmp_path):
        # Perfect mask, zero noise, no illuminant: the pipeline must return
        # each flat color exactly.
        anns = synth_generate(SynthSpec(seed=8, count=3, width=48, height=48), tmp_path)
        palette = default_palette()
        for ann in anns:
            img = load_image(tmp_path / ann.image_path)
            obj = object_attention(img, tmp_path / ann.mask_path)
            pred = extract_mono(img, obj, PipelineConfig(), palette)
            assert pred.rgb == ann.colors[0]

    def test_spec_validation(self):
        with pytest.raises(ConfigError):
            SynthSpec(seed=0, count=0)
        with pytest.raises(ConfigError):
            SynthSpec(seed=0, count=1, shape="donut")
        with pytest.raises(ConfigError):
            SynthSpec(seed=0, count=1, noise_sigma=31.0)
        with pytest.raises(ConfigError):
            SynthSpec(seed=0, count=1, illuminant_gains=(1.0, 0.0, 0.5))


class TestAnnotationsIO:
    def test_single_line_parses(self, tmp_path):
        path = tmp_path / "a.jsonl"
        path.write_text('{"image":"a.png","category":"top","colors":[[134,71,71]]}\n')
        (ann,) = read_annotations(path)
        assert ann.image_path == "a.png"
        assert ann.colors == ((134, 71, 71),)
        assert ann.mask_path is None and ann.illuminant is None

    def test_round_trip_identity(self, tmp_path):
        rng = np.random.default_rng(2)
        annotations = []
        for i in range(50):
            n = int(rng.integers(1, 4))
            annotations.append(
                Annotation(
                    image_path=f"img-{i}.png",
                    mask_path=f"m-{i}.png" if i % 2 == 0 else None,
                    category=["top", "coat"][i % 2],
                    colors=tuple(tuple(int(v) for v in rng.integers(0, 256, 3)) for _ in range(n)),
                    illuminant=(1.0, 0.5, 0.25) if i % 3 == 0 else None,
                )
            )
        path = tmp_path / "x.jsonl"
        write_annotations(annotations, path)
        assert read_annotations(path) == annotations

    def test_malformed_line_reports_number(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text(
            '{"image":"a.png","category":"top","colors":[[1,2,3]]}\n{"image": oops\n'
        )
        with pytest.raises(ParseError, match=":2"):
            read_annotations(path)

    def test_four_colors_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        record = {"image": "a.png", "category": "top", "colors": [[1, 2, 3]] * 4}
        path.write_text(json.dumps(record) + "\n")
        with pytest.raises(ParseError, match="1-3"):
            read_annotations(path)

    def test_channel_out_of_range_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"image":"a.png","category":"top","colors":[[300,0,0]]}\n')
        with pytest.raises(ParseError, match="range"):
            read_annotations(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"image":"a.png","category":"top","colors":[[1,2,3]],"note":"x"}\n')
        with pytest.raises(ParseError, match="unknown"):
            read_annotations(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            read_annotations(tmp_path / "missing.jsonl")
