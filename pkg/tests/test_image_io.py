"""PNG/PPM image and PNG/PGM mask codecs."""

import numpy as np
import pytest

from patchfill.errors import InputError
from patchfill.image_io import (
    decode_image,
    decode_mask,
    encode_png,
    load_image,
    load_mask,
    save_image,
)
from patchfill.raster import OBJECT, SOURCE, RasterImage

from conftest import textured_rgb


@pytest.fixture
def image():
    rgb = textured_rgb(23, 17, seed=12)
    return RasterImage.from_rgb(rgb)


class TestImageRoundTrip:
    def test_png(self, image, tmp_path):
        path = tmp_path / "img.png"
        save_image(image, path)
        loaded = load_image(path)
        assert np.array_equal(loaded.pixels, image.pixels)

    def test_ppm_binary(self, image, tmp_path):
        path = tmp_path / "img.ppm"
        save_image(image, path)
        raw = path.read_bytes()
        assert raw.startswith(b"P6")
        loaded = load_image(path)
        assert np.array_equal(loaded.pixels[..., :3], image.pixels[..., :3])
        assert np.all(loaded.pixels[..., 3] == 255)

    def test_png_bytes_round_trip(self, image):
        assert np.array_equal(decode_image(encode_png(image)).pixels, image.pixels)

    def test_rgba_alpha_preserved(self, tmp_path):
        rgba = np.zeros((5, 6, 4), np.uint8)
        rgba[..., 3] = 77
        img = RasterImage(rgba)
        path = tmp_path / "a.png"
        save_image(img, path)
        assert np.all(load_image(path).pixels[..., 3] == 77)


class TestMaskLoading:
    def test_pgm_mask(self, tmp_path):
        luma = np.zeros((6, 8), np.uint8)
        luma[2:4, 3:6] = 200
        header = f"P5\n8 6\n255\n".encode()
        (tmp_path / "m.pgm").write_bytes(header + luma.tobytes())
        mask = load_mask(tmp_path / "m.pgm")
        expected = np.where(luma >= 128, OBJECT, SOURCE)
        assert np.array_equal(mask.state, expected)

    def test_png_rgb_mask_uses_luma_threshold(self, tmp_path):
        rgb = np.zeros((4, 4, 3), np.uint8)
        rgb[0, 0] = (255, 255, 255)  # luma 255 -> object
        rgb[1, 1] = (255, 0, 0)  # luma 76 -> source
        img = RasterImage.from_rgb(rgb)
        path = tmp_path / "m.png"
        save_image(img, path)
        mask = load_mask(path)
        assert mask.state[0, 0] == OBJECT
        assert mask.state[1, 1] == SOURCE

    def test_decode_mask_bytes(self, tmp_path):
        white = RasterImage.from_rgb(np.full((3, 3, 3), 255, np.uint8))
        mask = decode_mask(encode_png(white))
        assert mask.object_count == 9


class TestErrors:
    def test_missing_file(self):
        with pytest.raises(InputError):
            load_image("/nonexistent/image.png")

    def test_corrupt_bytes(self):
        with pytest.raises(InputError):
            decode_image(b"garbage bytes here")

    def test_unsupported_suffix(self, image, tmp_path):
        with pytest.raises(InputError):
            save_image(image, tmp_path / "img.bmp")
        with pytest.raises(InputError):
            load_image(tmp_path / "img.gif")

    def test_unsupported_mask_suffix(self, tmp_path):
        with pytest.raises(InputError):
            load_mask(tmp_path / "mask.ppm")
