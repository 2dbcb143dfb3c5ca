"""Raster primitives: grayscale, fill front, candidate map, mask ingestion."""

import numpy as np
import pytest

from patchfill.raster import (
    FILLED,
    OBJECT,
    SOURCE,
    GrayImage,
    RasterImage,
    RegionMask,
    extract_border,
    mark_valid_sources,
    to_grayscale,
)

from conftest import random_instance, rect_state
from oracles import border_by_comprehension


def solid_image(w, h, color):
    rgb = np.zeros((h, w, 3), np.uint8)
    rgb[:] = color
    return RasterImage.from_rgb(rgb)


class TestToGrayscale:
    def test_white_maps_to_max(self):
        gray = to_grayscale(solid_image(4, 3, (255, 255, 255)))
        assert np.all(gray.luma == 255)

    def test_black_maps_to_zero(self):
        gray = to_grayscale(solid_image(4, 3, (0, 0, 0)))
        assert np.all(gray.luma == 0)

    def test_pure_red(self):
        # round-half-up of 0.299 * 255 = 76.245
        expected = int(np.floor(0.299 * 255 + 0.5))
        gray = to_grayscale(solid_image(2, 2, (255, 0, 0)))
        assert expected == 76
        assert np.all(gray.luma == expected)

    def test_gray_inputs_are_fixed_points(self):
        values = np.arange(256, dtype=np.uint8)
        rgb = np.stack([values] * 3, axis=-1).reshape(16, 16, 3)
        gray = to_grayscale(RasterImage.from_rgb(rgb))
        assert np.array_equal(gray.luma, rgb[..., 0])

    def test_dimensions_preserved(self):
        img = RasterImage.from_rgb(np.zeros((5, 7, 3), np.uint8))
        gray = to_grayscale(img)
        assert (gray.width, gray.height) == (img.width, img.height)


class TestExtractBorder:
    def test_all_object_has_no_border(self):
        mask = RegionMask(np.full((6, 6), OBJECT, np.uint8))
        assert len(extract_border(mask)) == 0

    def test_single_object_pixel(self):
        state = rect_state(7, 5, 3, 2, 4, 3)
        border = extract_border(RegionMask(state))
        assert border.pixels() == [(3, 2)]

    def test_block_perimeter(self):
        # 3x3 block centered in a SOURCE field: the 8 ring pixels are border,
        # the center is not.
        state = rect_state(9, 9, 3, 3, 6, 6)
        got = set(extract_border(RegionMask(state)).pixels())
        expected = {(x, y) for y in range(3, 6) for x in range(3, 6)} - {(4, 4)}
        assert got == expected

    def test_row_major_order(self):
        state = rect_state(8, 8, 1, 1, 4, 4)
        coords = extract_border(RegionMask(state)).coords_yx
        keys = [tuple(c) for c in coords]
        assert keys == sorted(keys)

    def test_matches_set_comprehension_on_random_masks(self):
        rng = np.random.default_rng(11)
        for _ in range(25):
            state = (rng.random((10, 12)) < 0.4).astype(np.uint8)
            got = set(extract_border(RegionMask(state)).pixels())
            assert got == border_by_comprehension(state)

    def test_edge_object_without_interior_neighbor(self):
        # Object filling a full column at x=0 of a 1-wide... use full image edge:
        state = np.full((4, 4), OBJECT, np.uint8)
        state[:, 2:] = SOURCE
        border = set(extract_border(RegionMask(state)).pixels())
        # only the x=1 column touches SOURCE; x=0 pixels are not border
        assert border == {(1, y) for y in range(4)}


class TestMarkValidSources:
    def test_all_source_10x10_patch9(self):
        mask = RegionMask(np.full((10, 10), SOURCE, np.uint8))
        valid = mark_valid_sources(mask, 9)
        got = {(x, y) for y, x in np.argwhere(valid)}
        assert got == {(4, 4), (4, 5), (5, 4), (5, 5)}

    def test_patch_larger_than_image(self):
        mask = RegionMask(np.full((6, 20), SOURCE, np.uint8))
        assert not mark_valid_sources(mask, 7).any()

    def test_all_object(self):
        mask = RegionMask(np.full((12, 12), OBJECT, np.uint8))
        assert not mark_valid_sources(mask, 3).any()

    def test_even_patch_rejected(self):
        mask = RegionMask(np.full((8, 8), SOURCE, np.uint8))
        with pytest.raises(ValueError):
            mark_valid_sources(mask, 4)

    def test_never_intersects_object_or_filled(self):
        rng = np.random.default_rng(23)
        for _ in range(20):
            _, mask = random_instance(rng, with_filled=True)
            for patch in (3, 5):
                valid = mark_valid_sources(mask, patch)
                half = (patch - 1) // 2
                h, w = mask.state.shape
                for y, x in np.argwhere(valid):
                    assert half <= x < w - half and half <= y < h - half
                    window = mask.state[y - half : y + half + 1, x - half : x + half + 1]
                    assert np.all(window == SOURCE)

    def test_matches_bruteforce_definition(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            _, mask = random_instance(rng, max_side=20, with_filled=True)
            patch = 5
            half = 2
            valid = mark_valid_sources(mask, patch)
            h, w = mask.state.shape
            for y in range(h):
                for x in range(w):
                    in_bounds = half <= x < w - half and half <= y < h - half
                    expect = in_bounds and bool(
                        np.all(
                            mask.state[y - half : y + half + 1, x - half : x + half + 1]
                            == SOURCE
                        )
                    )
                    assert bool(valid[y, x]) == expect


class TestRegionMask:
    def test_threshold_ingestion(self):
        luma = np.array([[0, 127], [128, 255]], np.uint8)
        mask = RegionMask.from_mask_image(GrayImage(luma))
        assert mask.state.tolist() == [[SOURCE, SOURCE], [OBJECT, OBJECT]]

    def test_bbox_and_center(self):
        state = rect_state(10, 10, 2, 3, 6, 5)  # x in [2,5], y in [3,4]
        mask = RegionMask(state)
        assert mask.object_bbox() == (2, 3, 5, 4)
        assert mask.object_center() == (3.5, 3.5)

    def test_bbox_empty(self):
        mask = RegionMask(np.full((4, 4), SOURCE, np.uint8))
        assert mask.object_bbox() is None

    def test_bbox_tight_after_state_change(self):
        state = rect_state(10, 10, 2, 2, 8, 8)
        mask = RegionMask(state)
        mask.state[2:8, 2:5] = FILLED
        assert mask.object_bbox() == (5, 2, 7, 7)
