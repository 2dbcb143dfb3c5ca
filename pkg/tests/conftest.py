"""Shared fixtures and instance builders."""

from __future__ import annotations

import numpy as np
import pytest

from patchfill.raster import FILLED, OBJECT, SOURCE, RasterImage, RegionMask


def textured_rgb(width: int, height: int, seed: int) -> np.ndarray:
    """Deterministic gradient-plus-noise content; enough structure that best
    patches are not all ties."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    base = np.stack(
        [
            96 + 100 * yy / max(1, height - 1) + 10 * np.sin(xx / 5.0),
            128 + 60 * xx / max(1, width - 1) + 10 * np.sin(yy / 7.0),
            160 - 70 * yy / max(1, height - 1) + 10 * np.sin((xx + yy) / 9.0),
        ],
        axis=-1,
    )
    noise = rng.normal(0.0, 8.0, size=(height, width, 3))
    return np.clip(base + noise, 0, 255).astype(np.uint8)


def disc_state(width: int, height: int, cx: float, cy: float, radius: float) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width]
    state = np.full((height, width), SOURCE, np.uint8)
    state[(xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2] = OBJECT
    return state


def rect_state(
    width: int, height: int, x0: int, y0: int, x1: int, y1: int
) -> np.ndarray:
    state = np.full((height, width), SOURCE, np.uint8)
    state[y0:y1, x0:x1] = OBJECT
    return state


def random_instance(
    rng: np.random.Generator,
    max_side: int = 32,
    max_object: int = 8,
    with_filled: bool = False,
) -> tuple[RasterImage, RegionMask]:
    """Random image and mask with a random rectangular object blob."""
    w = int(rng.integers(12, max_side + 1))
    h = int(rng.integers(12, max_side + 1))
    rgb = rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)
    ow = int(rng.integers(1, max_object + 1))
    oh = int(rng.integers(1, max_object + 1))
    x0 = int(rng.integers(0, w - ow + 1))
    y0 = int(rng.integers(0, h - oh + 1))
    state = rect_state(w, h, x0, y0, x0 + ow, y0 + oh)
    if with_filled:
        fy = rng.integers(0, h, size=3)
        fx = rng.integers(0, w, size=3)
        for y, x in zip(fy, fx):
            if state[y, x] == SOURCE:
                state[y, x] = FILLED
    return RasterImage.from_rgb(rgb), RegionMask(state)


@pytest.fixture
def blob_instance_128() -> tuple[RasterImage, RegionMask]:
    """128x128 textured image with a 24x24-bbox blob object."""
    rgb = textured_rgb(128, 128, seed=20240917)
    state = disc_state(128, 128, cx=63.5, cy=63.5, radius=12.0)
    img = RasterImage.from_rgb(rgb)
    img.pixels[state == OBJECT, :3] = (40, 24, 30)
    return img, RegionMask(state)
