import json

import numpy as np
import pytest
from click.testing import CliRunner

from chromapool.cli import main
from chromapool.images import save_image
from conftest import flat_image


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def velvet_red_png(tmp_path):
    path = tmp_path / "vr.png"
    save_image(flat_image((134, 71, 71), 24, 24), path)
    return str(path)


class TestExtractCommand:
    def test_uniform_image_prints_exact_rgb(self, runner, velvet_red_png):
        result = runner.invoke(main, ["extract", "--image", velvet_red_png])
        assert result.exit_code == 0, result.output
        preds = json.loads(result.output)
        assert preds[0]["rgb"] == [134, 71, 71]

    def test_writes_previews(self, runner, velvet_red_png, tmp_path):
        out = tmp_path / "viz"
        result = runner.invoke(main, ["extract", "--image", velvet_red_png, "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert (out / "swatch.png").is_file()
        assert (out / "attention.png").is_file()

    def test_unknown_flag_is_usage_error(self, runner, velvet_red_png):
        result = runner.invoke(main, ["extract", "--image", velvet_red_png, "--frobnicate", "1"])
        assert result.exit_code == 2
        assert "no such option" in result.output.lower()

    def test_missing_file_exit_3(self, runner):
        result = runner.invoke(main, ["extract", "--image", "/nowhere/img.png"])
        assert result.exit_code == 3
        assert "error:" in result.output

    def test_bad_config_value_exit_5(self, runner, velvet_red_png):
        result = runner.invoke(
            main, ["extract", "--image", velvet_red_png, "--temperature", "fixed:-1"]
        )
        assert result.exit_code == 5

    def test_config_file_and_flag_override(self, runner, velvet_red_png, tmp_path):
        # File forces gray-world (which grays out a uniform colored image);
        # the flag must win and restore the exact color.
        cfg = tmp_path / "run.cfg"
        cfg.write_text("estimator = gray_world\n")
        body = runner.invoke(main, ["extract", "--image", velvet_red_png, "--config", str(cfg)])
        assert json.loads(body.output)[0]["rgb"] != [134, 71, 71]
        body = runner.invoke(
            main,
            ["extract", "--image", velvet_red_png, "--config", str(cfg), "--estimator", "none"],
        )
        assert json.loads(body.output)[0]["rgb"] == [134, 71, 71]

    def test_config_via_env_var(self, runner, velvet_red_png, tmp_path):
        cfg = tmp_path / "env.cfg"
        cfg.write_text("max_colors = 2\n")
        result = runner.invoke(
            main, ["extract", "--image", velvet_red_png], env={"CHROMAPOOL_CONFIG": str(cfg)}
        )
        assert result.exit_code == 0, result.output

    def test_unparseable_config_exit_5(self, runner, velvet_red_png, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("estimator gray_world\n")
        result = runner.invoke(main, ["extract", "--image", velvet_red_png, "--config", str(cfg)])
        assert result.exit_code == 5


class TestPaletteCommands:
    def test_dump_then_check(self, runner, tmp_path):
        out = tmp_path / "pal.csv"
        result = runner.invoke(main, ["palette", "dump", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["entries"] == 72
        result = runner.invoke(main, ["palette", "check", "--palette", str(out)])
        assert result.exit_code == 0
        assert json.loads(result.output)["entries"] == 72

    def test_check_bad_palette_exit_4(self, runner, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("name,r,g,b\nx,1,2\n")
        result = runner.invoke(main, ["palette", "check", "--palette", str(bad)])
        assert result.exit_code == 4


class TestSynthEvaluateBaseline:
    def test_synth_evaluate_round_trip(self, runner, tmp_path):
        data = tmp_path / "suite"
        result = runner.invoke(
            main,
            ["synth", "--out", str(data), "--seed", "3", "--count", "5",
             "--shape", "ellipse", "--width", "48", "--height", "48"],
        )
        assert result.exit_code == 0, result.output
        annotations = json.loads(result.output)["annotations"]

        out = tmp_path / "run"
        result = runner.invoke(
            main,
            ["evaluate", "--data", annotations, "--method", "pipeline", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        report = json.loads((out / "report.json").read_text())
        assert report["main_color"][0] == 100.0
        assert (out / "per_item.csv").is_file()

    def test_synth_spec_file_with_override(self, runner, tmp_path):
        spec = tmp_path / "synth.cfg"
        spec.write_text("seed = 9\ncount = 3\nshape = rectangle\nwidth = 40\nheight = 40\n")
        result = runner.invoke(
            main, ["synth", "--spec", str(spec), "--out", str(tmp_path / "d"), "--count", "2"]
        )
        assert result.exit_code == 0, result.output
        assert json.loads(result.output)["items"] == 2

    def test_evaluate_deterministic_reports(self, runner, tmp_path):
        data = tmp_path / "suite"
        runner.invoke(
            main,
            ["synth", "--out", str(data), "--seed", "6", "--count", "4",
             "--shape", "stripes:2", "--width", "48", "--height", "48"],
        )
        for sub in ("a", "b"):
            result = runner.invoke(
                main,
                ["evaluate", "--data", str(data / "annotations.jsonl"), "--method", "kmeans",
                 "--seed", "11", "--out", str(tmp_path / sub)],
            )
            assert result.exit_code == 0, result.output
        assert (tmp_path / "a/report.json").read_bytes() == (tmp_path / "b/report.json").read_bytes()

    def test_baseline_command(self, runner, tmp_path):
        img = flat_image((20, 20, 20), 16, 16)
        img[:, 8:] = (220, 220, 220)
        save_image(img, tmp_path / "i.png")
        result = runner.invoke(
            main, ["baseline", "--image", str(tmp_path / "i.png"), "--method", "kmeans", "--k", "2"]
        )
        assert result.exit_code == 0, result.output
        assert len(json.loads(result.output)) == 2

    def test_evaluate_bad_thresholds_exit_5(self, runner, tmp_path):
        result = runner.invoke(
            main, ["evaluate", "--data", "x.jsonl", "--method", "pipeline",
                   "--thresholds", "ten,twenty"],
        )
        assert result.exit_code == 5

    def test_evaluate_with_custom_palette(self, runner, tmp_path):
        data = tmp_path / "suite"
        runner.invoke(
            main,
            ["synth", "--out", str(data), "--seed", "2", "--count", "3",
             "--shape", "ellipse", "--width", "40", "--height", "40"],
        )
        pal = tmp_path / "pal.csv"
        runner.invoke(main, ["palette", "dump", "--out", str(pal)])
        result = runner.invoke(
            main,
            ["evaluate", "--data", str(data / "annotations.jsonl"), "--method", "colorname",
             "--palette", str(pal)],
        )
        assert result.exit_code == 0, result.output


class TestHelp:
    def test_exit_codes_documented(self, runner):
        result = runner.invoke(main, ["--help"])
        assert result.exit_code == 0
        assert "Exit codes" in result.output
        for sub in ("extract", "evaluate", "synth", "baseline", "palette", "serve"):
            assert sub in result.output
