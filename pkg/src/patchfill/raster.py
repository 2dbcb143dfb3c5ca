"""Image, mask, and fill-front primitives.

Pixel coordinates are (x, y) with x indexing columns and y indexing rows;
numpy buffers are stored row-major and indexed [y, x].
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np


class PixelState(IntEnum):
    SOURCE = 0
    OBJECT = 1
    FILLED = 2


SOURCE = int(PixelState.SOURCE)
OBJECT = int(PixelState.OBJECT)
FILLED = int(PixelState.FILLED)

# Mask ingestion threshold: luma >= this marks a pixel as object.
MASK_OBJECT_THRESHOLD = 128


def bt601_luma(rgb: np.ndarray) -> np.ndarray:
    """BT.601 luma of an (..., 3+) uint8 array, rounded half-up to uint8."""
    r = rgb[..., 0].astype(np.float64)
    g = rgb[..., 1].astype(np.float64)
    b = rgb[..., 2].astype(np.float64)
    luma = np.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5)
    return np.clip(luma, 0, 255).astype(np.uint8)


@dataclass
class RasterImage:
    """RGBA 8-bit working canvas; alpha is carried but excluded from distance math."""

    pixels: np.ndarray  # (height, width, 4) uint8

    def __post_init__(self) -> None:
        px = np.ascontiguousarray(self.pixels, dtype=np.uint8)
        if px.ndim != 3 or px.shape[2] != 4:
            raise ValueError(f"expected (h, w, 4) RGBA buffer, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError("image must be at least 1x1")
        self.pixels = px

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def from_rgb(cls, rgb: np.ndarray) -> "RasterImage":
        rgb = np.asarray(rgb, dtype=np.uint8)
        if rgb.ndim != 3 or rgb.shape[2] not in (3, 4):
            raise ValueError(f"expected (h, w, 3|4) buffer, got shape {rgb.shape}")
        if rgb.shape[2] == 4:
            return cls(rgb)
        rgba = np.empty(rgb.shape[:2] + (4,), np.uint8)
        rgba[..., :3] = rgb
        rgba[..., 3] = 255
        return cls(rgba)

    def copy(self) -> "RasterImage":
        return RasterImage(self.pixels.copy())


@dataclass
class GrayImage:
    """8-bit luma plane with the same dimensions as its source image."""

    luma: np.ndarray  # (height, width) uint8

    def __post_init__(self) -> None:
        lm = np.ascontiguousarray(self.luma, dtype=np.uint8)
        if lm.ndim != 2:
            raise ValueError(f"expected (h, w) luma buffer, got shape {lm.shape}")
        self.luma = lm

    @property
    def width(self) -> int:
        return self.luma.shape[1]

    @property
    def height(self) -> int:
        return self.luma.shape[0]


@dataclass
class RegionMask:
    """Per-pixel {SOURCE, OBJECT, FILLED} state covering the object and donor regions."""

    state: np.ndarray  # (height, width) uint8 of PixelState values

    def __post_init__(self) -> None:
        st = np.ascontiguousarray(self.state, dtype=np.uint8)
        if st.ndim != 2:
            raise ValueError(f"expected (h, w) state buffer, got shape {st.shape}")
        self.state = st

    @property
    def width(self) -> int:
        return self.state.shape[1]

    @property
    def height(self) -> int:
        return self.state.shape[0]

    @property
    def object_count(self) -> int:
        return int(np.count_nonzero(self.state == OBJECT))

    def object_bbox(self) -> tuple[int, int, int, int] | None:
        """Tight inclusive bbox (min_x, min_y, max_x, max_y) of OBJECT pixels, or None."""
        ys, xs = np.nonzero(self.state == OBJECT)
        if ys.size == 0:
            return None
        return int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())

    def object_center(self) -> tuple[float, float] | None:
        """Center (o_x, o_y) of the object bbox; half-integral for even extents."""
        bbox = self.object_bbox()
        if bbox is None:
            return None
        min_x, min_y, max_x, max_y = bbox
        return (min_x + max_x) / 2.0, (min_y + max_y) / 2.0

    @classmethod
    def from_mask_image(cls, mask: "RasterImage | GrayImage") -> "RegionMask":
        """Threshold a mask image: luma >= 128 becomes OBJECT, the rest SOURCE."""
        if isinstance(mask, RasterImage):
            luma = bt601_luma(mask.pixels)
        else:
            luma = mask.luma
        state = np.where(luma >= MASK_OBJECT_THRESHOLD, OBJECT, SOURCE).astype(np.uint8)
        return cls(state)

    def copy(self) -> "RegionMask":
        return RegionMask(self.state.copy())


@dataclass
class BorderSet:
    """Fill-front pixels in deterministic row-major order."""

    coords_yx: np.ndarray  # (n, 2) int64 rows of (y, x)

    def __len__(self) -> int:
        return self.coords_yx.shape[0]

    def pixels(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for y, x in self.coords_yx]


def to_grayscale(img: RasterImage) -> GrayImage:
    """Convert RGB to 8-bit luma (BT.601 weights, round half-up)."""
    return GrayImage(bt601_luma(img.pixels))


def extract_border(mask: RegionMask) -> BorderSet:
    """OBJECT pixels with at least one in-bounds 4-neighbor that is not OBJECT.

    Object pixels flush against the image edge do not gain a border from the
    missing out-of-bounds neighbor.
    """
    obj = mask.state == OBJECT
    border = np.zeros_like(obj)
    border[:, :-1] |= obj[:, :-1] & ~obj[:, 1:]
    border[:, 1:] |= obj[:, 1:] & ~obj[:, :-1]
    border[:-1, :] |= obj[:-1, :] & ~obj[1:, :]
    border[1:, :] |= obj[1:, :] & ~obj[:-1, :]
    return BorderSet(np.argwhere(border).astype(np.int64))


def mark_valid_sources(mask: RegionMask, patch_size: int) -> np.ndarray:
    """Boolean grid of candidate centers whose patch is fully in-bounds and
    contains neither OBJECT nor FILLED pixels.

    Candidates are drawn from the original source content only, so the map
    stays valid for the whole run when computed from the initial mask.
    """
    if patch_size < 3 or patch_size % 2 == 0:
        raise ValueError(f"patch size must be odd and >= 3, got {patch_size}")
    h, w = mask.state.shape
    half = (patch_size - 1) // 2
    valid = np.zeros((h, w), dtype=bool)
    if w < patch_size or h < patch_size:
        return valid

    bad = (mask.state != SOURCE).astype(np.int64)
    # Summed-area table with a zero row/column prefix: exact window sums.
    sat = np.zeros((h + 1, w + 1), dtype=np.int64)
    sat[1:, 1:] = bad.cumsum(axis=0).cumsum(axis=1)
    y0 = np.arange(half, h - half)
    x0 = np.arange(half, w - half)
    top = y0 - half
    bottom = y0 + half + 1
    left = x0 - half
    right = x0 + half + 1
    window = (
        sat[np.ix_(bottom, right)]
        - sat[np.ix_(top, right)]
        - sat[np.ix_(bottom, left)]
        + sat[np.ix_(top, left)]
    )
    valid[half : h - half, half : w - half] = window == 0
    return valid
