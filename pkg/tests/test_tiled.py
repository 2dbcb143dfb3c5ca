"""Tiled work-group search: footprints, tile loading, naive equivalence,
memory-traffic counters."""

import numpy as np
import pytest

from patchfill.errors import NoCandidateError
from patchfill.raster import (
    OBJECT,
    SOURCE,
    RasterImage,
    RegionMask,
    extract_border,
    mark_valid_sources,
)
from patchfill.search import (
    KernelCounters,
    SearchBounds,
    SearchConfig,
    find_best_patch,
)
from patchfill.tiled import (
    WorkGroupGrid,
    dispatch_find_best_patch,
    load_tile,
    tile_footprint_bytes,
)

from conftest import random_instance, textured_rgb


class TestFootprint:
    @pytest.mark.parametrize(
        "patch,expected",
        [(9, 1672), (13, 2952), (17, 4616)],
    )
    def test_reference_rows(self, patch, expected):
        # source tile (P+7)^2 * 4 B + patch data P^2 * 4 B + labels P^2 * 4 B
        assert tile_footprint_bytes(patch, (8, 8)) == expected

    def test_formula_terms(self):
        assert tile_footprint_bytes(9, (8, 8)) == 4 * 16 * 16 + 4 * 81 + 4 * 81

    def test_non_square_groups(self):
        assert tile_footprint_bytes(5, (4, 2)) == 4 * (8 * 6) + 8 * 25


class TestWorkGroupGrid:
    def test_covers_bounds(self):
        bounds = SearchBounds(3, 30, 5, 18)  # 27 x 13
        grid = WorkGroupGrid.covering(bounds, (8, 8))
        assert grid.group_count == (4, 2)
        origins = grid.origins(bounds)
        assert len(origins) == 8
        assert origins[0] == (3, 5)
        xs = {gx for gx, _ in origins}
        assert max(xs) + 8 >= bounds.right


class TestLoadTile:
    def test_matches_direct_gather(self):
        rng = np.random.default_rng(101)
        for _ in range(10):
            img, mask = random_instance(rng, max_side=28)
            h, w = mask.state.shape
            patch = 5
            half = 2
            gox = int(rng.integers(0, w))
            goy = int(rng.integers(0, h))
            px = int(rng.integers(0, w))
            py = int(rng.integers(0, h))
            tile = load_tile(img, mask, (px, py), (gox, goy), patch, (4, 4))
            th, tw = tile.source_valid.shape
            assert (th, tw) == (patch + 3, patch + 3)
            for tyy in range(th):
                for txx in range(tw):
                    iy, ix = goy - half + tyy, gox - half + txx
                    inside = 0 <= iy < h and 0 <= ix < w
                    assert tile.source_valid[tyy, txx] == inside
                    if inside:
                        assert np.array_equal(tile.source_tile[tyy, txx], img.pixels[iy, ix])
            for dy in range(patch):
                for dx in range(patch):
                    ty, tx = py - half + dy, px - half + dx
                    inside = 0 <= ty < h and 0 <= tx < w
                    expected_label = inside and mask.state[ty, tx] != OBJECT
                    assert tile.patch_label[dy, dx] == expected_label
                    if inside:
                        assert np.array_equal(tile.patch_data[dy, dx], img.pixels[ty, tx])

    def test_global_read_count_per_group(self):
        img, mask = random_instance(np.random.default_rng(5), max_side=30)
        counters = KernelCounters()
        load_tile(img, mask, (10, 10), (12, 12), 9, (8, 8), counters)
        assert counters.global_reads == 16 * 16 + 81 + 81 == 418

    def test_footprint_matches_formula(self):
        img, mask = random_instance(np.random.default_rng(6), max_side=30)
        tile = load_tile(img, mask, (8, 8), (4, 4), 9, (8, 8))
        assert tile.footprint_bytes == tile_footprint_bytes(9, (8, 8))


def config_for(threads=1, patch=3):
    return SearchConfig(alpha=None, patch_size=patch, threads=threads)


class TestDispatchEquivalence:
    def test_identical_to_naive_on_randoms(self):
        rng = np.random.default_rng(77)
        checked = 0
        while checked < 25:
            img, mask = random_instance(rng)
            patch = int(rng.integers(1, 3)) * 2 + 1
            valid = mark_valid_sources(mask, patch)
            border = extract_border(mask)
            if len(border) == 0 or not valid.any():
                continue
            p_hat = border.pixels()[0]
            bounds = SearchBounds(0, img.width, 0, img.height)
            naive_counters = KernelCounters()
            naive = find_best_patch(img, mask, p_hat, bounds, valid, patch, naive_counters)
            tiled_counters = KernelCounters()
            tiled = dispatch_find_best_patch(
                img, mask, p_hat, bounds, valid, patch, config_for(patch=patch), tiled_counters
            )
            assert tiled == naive
            assert tiled_counters.ssd_element_ops == naive_counters.ssd_element_ops
            assert tiled_counters.candidates_evaluated == naive_counters.candidates_evaluated
            # every naive global read becomes a tile read
            assert tiled_counters.tile_reads == naive_counters.global_reads
            checked += 1

    def test_single_candidate_bounds(self):
        img, mask = random_instance(np.random.default_rng(9), max_side=20)
        valid = mark_valid_sources(mask, 3)
        border = extract_border(mask)
        ys, xs = np.nonzero(valid)
        if len(border) == 0 or ys.size == 0:
            pytest.skip("degenerate instance")
        p_hat = border.pixels()[0]
        qx, qy = int(xs[0]), int(ys[0])
        bounds = SearchBounds(qx, qx + 1, qy, qy + 1)
        counters = KernelCounters()
        q, _ = dispatch_find_best_patch(
            img, mask, p_hat, bounds, valid, 3, config_for(), counters
        )
        assert q == (qx, qy)
        assert counters.candidates_evaluated == 1

    def test_result_independent_of_thread_count(self):
        rng = np.random.default_rng(13)
        img, mask = random_instance(rng, max_side=32)
        valid = mark_valid_sources(mask, 3)
        border = extract_border(mask)
        if len(border) == 0 or not valid.any():
            pytest.skip("degenerate instance")
        p_hat = border.pixels()[0]
        bounds = SearchBounds(0, img.width, 0, img.height)
        outcomes = []
        for threads in (1, 2, 4, 8):
            counters = KernelCounters()
            result = dispatch_find_best_patch(
                img, mask, p_hat, bounds, valid, 3, config_for(threads=threads), counters
            )
            outcomes.append((result, counters))
        first = outcomes[0]
        for result, counters in outcomes[1:]:
            assert result == first[0]
            assert counters == first[1]

    def test_no_candidate(self):
        img, mask = random_instance(np.random.default_rng(10), max_side=16)
        valid = np.zeros((img.height, img.width), bool)
        with pytest.raises(NoCandidateError):
            dispatch_find_best_patch(
                img,
                mask,
                (4, 4),
                SearchBounds(0, img.width, 0, img.height),
                valid,
                3,
                config_for(),
                KernelCounters(),
            )

    def test_footprint_warning_over_cap(self):
        img, mask = random_instance(np.random.default_rng(11), max_side=40)
        valid = mark_valid_sources(mask, 3)
        if not valid.any():
            pytest.skip("degenerate instance")
        config = SearchConfig(alpha=None, patch_size=3, local_mem_cap_bytes=16)
        with pytest.warns(RuntimeWarning, match="local-memory cap"):
            dispatch_find_best_patch(
                img,
                mask,
                (4, 4),
                SearchBounds(0, img.width, 0, img.height),
                valid,
                3,
                config,
                KernelCounters(),
            )


class TestTrafficReduction:
    def build_fully_valid_scene(self):
        """64x64 all-SOURCE scene: a patch center away from everything keeps
        every offset compared, matching the idealized per-group schedules."""
        rgb = textured_rgb(64, 64, seed=99)
        img = RasterImage.from_rgb(rgb)
        mask = RegionMask(np.full((64, 64), SOURCE, np.uint8))
        valid = mark_valid_sources(mask, 9)
        bounds = SearchBounds(24, 40, 24, 40)  # 4 fully-valid 8x8 groups
        assert valid[bounds.top : bounds.bottom, bounds.left : bounds.right].all()
        return img, mask, valid, bounds

    def test_schedule_counts(self):
        img, mask, valid, bounds = self.build_fully_valid_scene()
        p_hat = (32, 32)
        naive_counters = KernelCounters()
        naive = find_best_patch(img, mask, p_hat, bounds, valid, 9, naive_counters)
        tiled_counters = KernelCounters()
        tiled = dispatch_find_best_patch(
            img, mask, p_hat, bounds, valid, 9, config_for(patch=9), tiled_counters
        )
        assert tiled == naive
        groups = 4
        assert naive_counters.global_reads == groups * 64 * 81 * 2  # 10368 per group
        assert tiled_counters.global_reads == groups * 418
        ratio = tiled_counters.global_reads / naive_counters.global_reads
        assert ratio <= 0.05

    def test_groups_without_candidates_do_not_load(self):
        img, mask, valid, _bounds = self.build_fully_valid_scene()
        # invalidate the left half: groups there must be skipped entirely
        valid = valid.copy()
        valid[:, :32] = False
        bounds = SearchBounds(24, 40, 24, 40)
        counters = KernelCounters()
        dispatch_find_best_patch(
            img, mask, (32, 32), bounds, valid, 9, config_for(patch=9), counters
        )
        assert counters.global_reads == 2 * 418
