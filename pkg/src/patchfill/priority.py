"""Filling priority along the fill front: confidence and data terms.

Priority(p) = C(p) * D(p). C averages known-pixel confidence over the patch;
D measures how strongly the isophote at p hits the front, normalized by 255.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import EmptyBorderError
from .raster import OBJECT, BorderSet, GrayImage, RegionMask


@dataclass
class ConfidenceMap:
    """Per-pixel reliability in [0, 1]; 1 on original source, 0 on the object."""

    conf: np.ndarray  # (height, width) float64

    def __post_init__(self) -> None:
        cf = np.ascontiguousarray(self.conf, dtype=np.float64)
        if cf.ndim != 2:
            raise ValueError(f"expected (h, w) confidence buffer, got shape {cf.shape}")
        self.conf = cf


@dataclass
class PriorityRecord:
    pixel: tuple[int, int]  # (x, y)
    confidence_term: float
    data_term: float
    priority: float


def init_confidence(mask: RegionMask) -> ConfidenceMap:
    """1 for SOURCE pixels, 0 for OBJECT pixels."""
    return ConfidenceMap(np.where(mask.state == OBJECT, 0.0, 1.0))


def confidence_term(
    p: tuple[int, int], conf: ConfidenceMap, mask: RegionMask, patch_size: int
) -> float:
    """Mean confidence of non-OBJECT patch pixels, with the full P*P denominator
    even when the patch is clipped by the image edge."""
    x, y = p
    h, w = mask.state.shape
    half = (patch_size - 1) // 2
    y0, y1 = max(0, y - half), min(h, y + half + 1)
    x0, x1 = max(0, x - half), min(w, x + half + 1)
    window_conf = conf.conf[y0:y1, x0:x1]
    window_state = mask.state[y0:y1, x0:x1]
    total = float(window_conf[window_state != OBJECT].sum())
    return total / float(patch_size * patch_size)


def _axis_gradient(gray: np.ndarray, state: np.ndarray, x: int, y: int, axis_x: bool) -> float:
    # Central difference over non-OBJECT neighbors, one-sided fallback through
    # the pixel's own value, 0 when both neighbors are unusable.
    h, w = state.shape
    if axis_x:
        lo_ok = x > 0 and state[y, x - 1] != OBJECT
        hi_ok = x < w - 1 and state[y, x + 1] != OBJECT
        lo = float(gray[y, x - 1]) if lo_ok else 0.0
        hi = float(gray[y, x + 1]) if hi_ok else 0.0
    else:
        lo_ok = y > 0 and state[y - 1, x] != OBJECT
        hi_ok = y < h - 1 and state[y + 1, x] != OBJECT
        lo = float(gray[y - 1, x]) if lo_ok else 0.0
        hi = float(gray[y + 1, x]) if hi_ok else 0.0
    center = float(gray[y, x])
    if lo_ok and hi_ok:
        return (hi - lo) / 2.0
    if hi_ok:
        return hi - center
    if lo_ok:
        return center - lo
    return 0.0


def _front_normal(state: np.ndarray, x: int, y: int) -> tuple[float, float] | None:
    # Unit gradient of the OBJECT indicator by central differences; pixels
    # outside the image replicate the center state.
    h, w = state.shape
    mc = 1.0 if state[y, x] == OBJECT else 0.0
    ml = (1.0 if state[y, x - 1] == OBJECT else 0.0) if x > 0 else mc
    mr = (1.0 if state[y, x + 1] == OBJECT else 0.0) if x < w - 1 else mc
    mu = (1.0 if state[y - 1, x] == OBJECT else 0.0) if y > 0 else mc
    md = (1.0 if state[y + 1, x] == OBJECT else 0.0) if y < h - 1 else mc
    nx = (mr - ml) / 2.0
    ny = (md - mu) / 2.0
    norm = math.sqrt(nx * nx + ny * ny)
    if norm == 0.0:
        return None
    return nx / norm, ny / norm


def data_term(p: tuple[int, int], gray: GrayImage, mask: RegionMask) -> float:
    """|isophote . front normal| / 255 at p; 0 when the normal is degenerate."""
    x, y = p
    normal = _front_normal(mask.state, x, y)
    if normal is None:
        return 0.0
    gx = _axis_gradient(gray.luma, mask.state, x, y, axis_x=True)
    gy = _axis_gradient(gray.luma, mask.state, x, y, axis_x=False)
    # Isophote is the gradient rotated a quarter turn: (-dI/dy, dI/dx).
    return abs((-gy) * normal[0] + gx * normal[1]) / 255.0


def priority_field(
    border: BorderSet,
    conf: ConfidenceMap,
    mask: RegionMask,
    gray: GrayImage,
    patch_size: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized (C, D) arrays for every fill-front pixel, in border order."""
    ys = np.ascontiguousarray(border.coords_yx[:, 0])
    xs = np.ascontiguousarray(border.coords_yx[:, 1])
    return _kernels.priority_terms(conf.conf, mask.state, gray.luma, ys, xs, patch_size)


def select_max_priority(
    border: BorderSet,
    conf: ConfidenceMap,
    mask: RegionMask,
    gray: GrayImage,
    patch_size: int,
) -> PriorityRecord:
    """Fill-front pixel with maximal C*D; ties keep the smallest row-major index."""
    if len(border) == 0:
        raise EmptyBorderError("cannot select a patch from an empty fill front")
    c_arr, d_arr = priority_field(border, conf, mask, gray, patch_size)
    priorities = c_arr * d_arr
    idx = int(np.argmax(priorities))  # argmax returns the first maximum
    y, x = border.coords_yx[idx]
    return PriorityRecord(
        pixel=(int(x), int(y)),
        confidence_term=float(c_arr[idx]),
        data_term=float(d_arr[idx]),
        priority=float(priorities[idx]),
    )


def update_confidence(
    conf: ConfidenceMap,
    p_hat: tuple[int, int],
    filled_yx: np.ndarray,
    c_value: float,
) -> ConfidenceMap:
    """Assign the selected patch's confidence to each newly filled pixel.

    Mutates and returns the map; all other entries are untouched.
    """
    if filled_yx.size:
        conf.conf[filled_yx[:, 0], filled_yx[:, 1]] = c_value
    return conf
