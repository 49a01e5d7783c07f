import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from skimage import color as skcolor

from chromapool.errors import NotFoundError, ParseError
from chromapool.palette import (
    Palette,
    PaletteEntry,
    default_palette,
    load_palette,
    name_histogram,
    nearest_name,
    save_palette,
)
from conftest import flat_image


class TestDefaultPalette:
    def test_has_72_entries(self, palette):
        assert len(palette) == 72

    def test_names_unique(self, palette):
        names = [e.name for e in palette]
        assert len(set(names)) == len(names)

    def test_rgbs_distinct(self, palette):
        assert len({e.rgb for e in palette}) == 72

    def test_contains_black_white_midgray(self, palette):
        rgbs = {e.rgb for e in palette}
        assert {(0, 0, 0), (255, 255, 255), (128, 128, 128)} <= rgbs

    def test_deterministic_regeneration(self, palette, tmp_path):
        save_palette(default_palette(), tmp_path / "a.csv")
        save_palette(default_palette(), tmp_path / "b.csv")
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_lab_cache_consistent(self, palette):
        from chromapool.colorspace import rgb_to_lab

        for entry in palette:
            assert np.allclose(entry.lab, rgb_to_lab(entry.rgb))


class TestLoadPalette:
    def test_parses_rows(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("name,r,g,b\nvelvet red,134,71,71\ndark purple,60,40,90\n")
        pal = load_palette(path)
        assert pal.entries[0].name == "velvet red"
        assert pal.entries[0].rgb == (134, 71, 71)

    def test_round_trip(self, palette, tmp_path):
        save_palette(palette, tmp_path / "p.csv")
        again = load_palette(tmp_path / "p.csv")
        assert [e.name for e in again] == [e.name for e in palette]
        assert [e.rgb for e in again] == [e.rgb for e in palette]

    def test_header_only_is_empty(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("name,r,g,b\n")
        with pytest.raises(ParseError, match="empty palette"):
            load_palette(path)

    def test_channel_out_of_range_names_line(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("name,r,g,b\nok,1,2,3\nx,300,0,0\n")
        with pytest.raises(ParseError, match=":3"):
            load_palette(path)

    def test_duplicate_name(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("name,r,g,b\nx,1,2,3\nx,4,5,6\n")
        with pytest.raises(ParseError, match="duplicate"):
            load_palette(path)

    def test_bad_header(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("nome,r,g,b\nx,1,2,3\n")
        with pytest.raises(ParseError, match="header"):
            load_palette(path)

    def test_non_integer_channel(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("name,r,g,b\nx,1,2,z\n")
        with pytest.raises(ParseError, match="non-integer"):
            load_palette(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(NotFoundError):
            load_palette(tmp_path / "nope.csv")


class TestNearestName:
    def test_exact_entry_wins(self, palette):
        for entry in palette.entries[::7]:
            assert nearest_name(entry.rgb, palette).name == entry.name

    def test_tie_breaks_to_palette_order(self):
        pal = Palette(
            entries=(
                PaletteEntry.make("first", (10, 20, 30)),
                PaletteEntry.make("second", (10, 20, 30)),
            )
        )
        assert nearest_name((10, 20, 31), pal).name == "first"

    def test_agrees_with_bruteforce_oracle(self, palette):
        # Independent distance oracle (scikit-image CIEDE2000) over every
        # entry, on the same Lab coordinates the palette caches.
        from chromapool.colorspace import rgb_to_lab

        rng = np.random.default_rng(23)
        colors = rng.integers(0, 256, size=(10_000, 3))
        d = skcolor.deltaE_ciede2000(
            rgb_to_lab(colors)[:, None, :], palette.lab_array[None, :, :]
        )
        oracle = np.argmin(d, axis=1)
        ours = np.array([palette.entries.index(nearest_name(c, palette)) for c in colors[:400]])
        assert np.array_equal(ours, oracle[:400])
        # Vectorized check over the full 10k via the same internal path.
        from chromapool.palette import _nearest_indices

        assert np.array_equal(_nearest_indices(colors.astype(np.uint8), palette), oracle)


class TestNameHistogram:
    def test_single_color_image(self, palette):
        img = flat_image((134, 71, 71))
        w = np.full((16, 16), 1 / 256)
        hist = name_histogram(img, w, palette)
        assert len(hist) == 1
        assert hist[0][1] == pytest.approx(1.0)
        assert hist[0][0].name == nearest_name((134, 71, 71), palette).name

    def test_half_and_half(self, palette):
        img = flat_image((255, 0, 0))
        img[:, 8:] = (0, 0, 255)
        w = np.full((16, 16), 1 / 256)
        hist = name_histogram(img, w, palette)
        assert len(hist) == 2
        assert hist[0][1] == pytest.approx(0.5)
        assert hist[1][1] == pytest.approx(0.5)

    @given(
        img=arrays(np.uint8, (6, 5, 3), elements=st.integers(0, 255)),
        weights=arrays(np.float64, (6, 5), elements=st.floats(0.01, 1.0)),
    )
    @settings(max_examples=50, deadline=None)
    def test_masses_sum_to_one(self, palette, img, weights):
        weights = weights / weights.sum()
        hist = name_histogram(img, weights, palette)
        assert all(m > 0 for _, m in hist)
        assert sum(m for _, m in hist) == pytest.approx(1.0, abs=1e-9)

    def test_weight_shape_mismatch(self, palette):
        with pytest.raises(ValueError):
            name_histogram(flat_image((1, 2, 3)), np.ones((4, 4)), palette)
