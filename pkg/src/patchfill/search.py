"""Search-space geometry, the SSD metric, and the naive best-patch search.

The search factor alpha expands the object bbox into a reduced candidate
region; alpha=None means a full-image search. All bounds are half-open
rectangles over candidate centers.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import InputError, NoCandidateError
from .raster import OBJECT, RasterImage, RegionMask

_EXECUTORS: dict[int, ThreadPoolExecutor] = {}
_EXECUTOR_LOCK = threading.Lock()


def worker_pool(threads: int) -> ThreadPoolExecutor:
    """Shared pool per thread count; the jitted kernels release the GIL, so
    reusing warm threads keeps per-dispatch overhead off the hot path."""
    with _EXECUTOR_LOCK:
        pool = _EXECUTORS.get(threads)
        if pool is None:
            pool = ThreadPoolExecutor(
                max_workers=threads, thread_name_prefix=f"patchfill{threads}"
            )
            _EXECUTORS[threads] = pool
        return pool

# Full-image search sentinel for the alpha search factor.
FULL_SEARCH = None

# Escalation ladder used when a reduced search region holds no candidate,
# mirroring the benchmark sweep points.
ALPHA_LADDER: tuple[float | None, ...] = (0.05, 0.2, 0.5, 1.0, 2.0, FULL_SEARCH)


class Kernel(Enum):
    NAIVE = "naive"
    TILED = "tiled"


@dataclass
class SearchConfig:
    """Tunable knobs for one engine run."""

    alpha: float | None = FULL_SEARCH  # search factor; None = full image
    patch_size: int = 9
    kernel: Kernel = Kernel.NAIVE
    group_dim: tuple[int, int] = (8, 8)
    threads: int = 1
    local_mem_cap_bytes: int = 8192  # soft cap; exceeding it only warns

    def __post_init__(self) -> None:
        if self.patch_size < 3 or self.patch_size % 2 == 0:
            raise InputError(f"patch size must be odd and >= 3, got {self.patch_size}")
        if self.alpha is not None and self.alpha < 0:
            raise InputError(f"search factor must be >= 0 or full, got {self.alpha}")
        gx, gy = self.group_dim
        if gx < 1 or gy < 1:
            raise InputError(f"work-group dims must be >= 1, got {self.group_dim}")
        if self.threads < 1:
            raise InputError(f"thread count must be >= 1, got {self.threads}")


@dataclass
class SearchBounds:
    """Half-open candidate-center rectangle [left, right) x [top, bottom)."""

    left: int
    right: int
    top: int
    bottom: int

    @property
    def width(self) -> int:
        return self.right - self.left

    @property
    def height(self) -> int:
        return self.bottom - self.top

    @property
    def extent(self) -> tuple[int, int]:
        return self.width, self.height

    def is_empty(self) -> bool:
        return self.right <= self.left or self.bottom <= self.top


@dataclass
class SsdResult:
    candidate: tuple[int, int]  # (x, y)
    ssd: int
    compared_pixels: int


@dataclass
class KernelCounters:
    """Hardware-independent cost proxies; data reads only, mask lookups excluded."""

    ssd_element_ops: int = 0
    global_reads: int = 0
    tile_reads: int = 0
    candidates_evaluated: int = 0

    def merged(self, other: "KernelCounters") -> "KernelCounters":
        return KernelCounters(
            self.ssd_element_ops + other.ssd_element_ops,
            self.global_reads + other.global_reads,
            self.tile_reads + other.tile_reads,
            self.candidates_evaluated + other.candidates_evaluated,
        )


def _round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def compute_search_bounds(
    bbox: tuple[int, int, int, int],
    alpha: float | None,
    image_dims: tuple[int, int],
) -> SearchBounds:
    """Expand the object bbox by alpha*w / alpha*h on each side and clamp.

    bbox is inclusive (min_x, min_y, max_x, max_y); image_dims is (width,
    height). The unclamped extent per axis is (2*alpha + 1) times the object
    extent, rounded half-up as a whole and centered on the bbox center (for
    a 78x126 object at alpha=0.05 that is 85.8 x 138.6 -> 86 x 139).
    alpha=None returns the whole image.
    """
    width, height = image_dims
    if alpha is None:
        return SearchBounds(0, width, 0, height)
    if alpha < 0:
        raise InputError(f"search factor must be >= 0, got {alpha}")
    min_x, min_y, max_x, max_y = bbox
    if max_x < min_x or max_y < min_y:
        raise InputError(f"bbox is empty: {bbox}")
    ox = (min_x + max_x) / 2.0
    oy = (min_y + max_y) / 2.0
    w = max_x - min_x + 1
    h = max_y - min_y + 1
    extent_x = _round_half_up((2.0 * alpha + 1.0) * w)
    extent_y = _round_half_up((2.0 * alpha + 1.0) * h)
    left = _round_half_up(ox - extent_x / 2.0)
    top = _round_half_up(oy - extent_y / 2.0)
    return SearchBounds(
        left=max(0, left),
        right=min(width, left + extent_x),
        top=max(0, top),
        bottom=min(height, top + extent_y),
    )


def search_area_size(w: int, h: int, alpha: float) -> float:
    """Analytic candidate count of the unclamped expanded region minus the object."""
    if alpha < 0:
        raise InputError(f"search factor must be >= 0, got {alpha}")
    return ((2.0 * alpha + 1.0) ** 2 - 1.0) * w * h


def overlap_area(w: int, h: int, patch_size: int) -> int:
    """Centers within patch-overlap range (P-1) of the object box, outside it."""
    if patch_size < 1:
        raise InputError(f"patch size must be >= 1, got {patch_size}")
    ring = 2 * (patch_size - 1)
    return (ring + w) * (ring + h) - w * h


def estimate_complexity(w: int, h: int, patch_size: int, alpha: float, k: float) -> float:
    """Analytic operation-count model for a whole run.

    k is the average fraction of a candidate patch still compared when it
    overlaps the object region (about 0.5 for rectangular regions).
    """
    if not 0.0 < k < 1.0:
        raise InputError(f"overlap ratio k must be in (0, 1), got {k}")
    ring_x = 2.0 * (patch_size - 1) / w + 1.0
    ring_y = 2.0 * (patch_size - 1) / h + 1.0
    return (
        float(w) ** 2
        * float(h) ** 2
        * ((2.0 * alpha + 1.0) ** 2 - (1.0 - k) * ring_x * ring_y - k)
    )


def alpha_ladder_from(alpha: float | None) -> list[float | None]:
    """The configured alpha followed by every strictly larger ladder rung."""
    ladder: list[float | None] = [alpha]
    if alpha is None:
        return ladder
    for rung in ALPHA_LADDER:
        if rung is None or rung > alpha:
            ladder.append(rung)
    return ladder


def patch_ssd(
    img: RasterImage,
    mask: RegionMask,
    p: tuple[int, int],
    q: tuple[int, int],
    patch_size: int,
    counters: KernelCounters | None = None,
) -> SsdResult:
    """Exact-integer SSD between the patches at p (object side) and q.

    Offsets contribute only when both positions are in-bounds and the
    object-patch pixel is not OBJECT; RGB channels only, alpha ignored.
    """
    px, py = p
    qx, qy = q
    h, w = mask.state.shape
    half = (patch_size - 1) // 2
    rgb = img.pixels
    state = mask.state
    ssd = 0
    compared = 0
    for dy in range(-half, half + 1):
        ty, sy = py + dy, qy + dy
        if not (0 <= ty < h and 0 <= sy < h):
            continue
        for dx in range(-half, half + 1):
            tx, sx = px + dx, qx + dx
            if not (0 <= tx < w and 0 <= sx < w):
                continue
            if state[ty, tx] == OBJECT:
                continue
            dr = int(rgb[ty, tx, 0]) - int(rgb[sy, sx, 0])
            dg = int(rgb[ty, tx, 1]) - int(rgb[sy, sx, 1])
            db = int(rgb[ty, tx, 2]) - int(rgb[sy, sx, 2])
            ssd += dr * dr + dg * dg + db * db
            compared += 1
    if counters is not None:
        counters.ssd_element_ops += compared
        counters.global_reads += 2 * compared
        counters.candidates_evaluated += 1
    return SsdResult(candidate=(qx, qy), ssd=ssd, compared_pixels=compared)


def _merge_band_results(results) -> tuple[int, int, int]:
    best = None
    for ssd, by, bx, _, _ in results:
        if ssd < 0:
            continue
        key = (int(ssd), int(by), int(bx))
        if best is None or key < best:
            best = key
    if best is None:
        raise NoCandidateError("no valid candidate center inside the search bounds")
    return best


def _row_bands(
    valid: np.ndarray, bounds: SearchBounds, parts: int
) -> list[tuple[int, int]]:
    """Contiguous row bands with roughly equal valid-candidate counts.

    Candidate rings around an object make equal-height bands badly skewed,
    so cuts follow the per-row candidate distribution instead.
    """
    top, bottom = bounds.top, bounds.bottom
    parts = max(1, min(parts, bottom - top))
    if parts == 1:
        return [(top, bottom)]
    per_row = np.count_nonzero(
        valid[top:bottom, bounds.left : bounds.right], axis=1
    )
    cum = np.cumsum(per_row)
    total = int(cum[-1])
    bands = []
    start = top
    for i in range(1, parts):
        cut = top + int(np.searchsorted(cum, total * i / parts)) + 1
        cut = min(max(cut, start), bottom)
        if cut > start:
            bands.append((start, cut))
            start = cut
    if start < bottom:
        bands.append((start, bottom))
    return bands


def find_best_patch(
    img: RasterImage,
    mask: RegionMask,
    p_hat: tuple[int, int],
    bounds: SearchBounds,
    valid: np.ndarray,
    patch_size: int,
    counters: KernelCounters,
    threads: int = 1,
) -> tuple[tuple[int, int], int]:
    """Exhaustive argmin of patch_ssd over valid candidates inside bounds.

    Deterministic for fixed inputs regardless of thread count: bands scan in
    row-major order and merge by (ssd, y, x). Raises NoCandidateError when
    bounds contain no valid candidate center.
    """
    if bounds.is_empty() or not valid[bounds.top : bounds.bottom, bounds.left : bounds.right].any():
        raise NoCandidateError("no valid candidate center inside the search bounds")
    px, py = p_hat
    args = (img.pixels, mask.state, valid, px, py, patch_size)
    bands = _row_bands(valid, bounds, threads)
    if threads > 1 and len(bands) > 1:
        pool = worker_pool(threads)
        futures = [
            pool.submit(
                _kernels.naive_search_band, *args, bounds.left, bounds.right, y0, y1
            )
            for y0, y1 in bands
        ]
        results = [f.result() for f in futures]
    else:
        results = [
            _kernels.naive_search_band(*args, bounds.left, bounds.right, y0, y1)
            for y0, y1 in bands
        ]
    for _, _, _, element_ops, candidates in results:
        counters.ssd_element_ops += int(element_ops)
        counters.global_reads += 2 * int(element_ops)
        counters.candidates_evaluated += int(candidates)
    ssd, by, bx = _merge_band_results(results)
    return (bx, by), ssd
