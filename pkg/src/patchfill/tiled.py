"""Work-group tiled best-patch search.

Drop-in replacement for the naive search that reproduces a GPU execution
shape on threads: the candidate rectangle is cut into gx x gy work groups,
each group stages a shared source tile plus the object patch into a private
scratch buffer, and its work items then compute SSDs from the scratch only.
Results are bit-identical to the naive kernel; the payoff shows up in the
global/tile read counters.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import NoCandidateError
from .raster import OBJECT, RasterImage, RegionMask
from .search import KernelCounters, SearchBounds, SearchConfig, worker_pool

# Per-element scratch cost model: RGBA pixels and labels both occupy 4 bytes.
_BYTES_PER_ELEMENT = 4


@dataclass
class WorkGroupGrid:
    """Group layout covering a candidate rectangle; edge groups may be ragged."""

    group_dim: tuple[int, int]
    group_count: tuple[int, int]

    @classmethod
    def covering(cls, bounds: SearchBounds, group_dim: tuple[int, int]) -> "WorkGroupGrid":
        gx, gy = group_dim
        return cls(
            group_dim=group_dim,
            group_count=(-(-bounds.width // gx), -(-bounds.height // gy)),
        )

    def origins(self, bounds: SearchBounds) -> list[tuple[int, int]]:
        gx, gy = self.group_dim
        nx, ny = self.group_count
        return [
            (bounds.left + ix * gx, bounds.top + iy * gy)
            for iy in range(ny)
            for ix in range(nx)
        ]


@dataclass
class TileBuffer:
    """Per-group scratch: shared source window, object patch, and its labels."""

    source_tile: np.ndarray  # (P+gy-1, P+gx-1, 4) uint8
    source_valid: np.ndarray  # same extent, False for out-of-image entries
    patch_data: np.ndarray  # (P, P, 4) uint8
    patch_label: np.ndarray  # (P, P) bool, True when usable for SSD
    origin: tuple[int, int]  # image (x, y) of source_tile[0, 0]

    @property
    def footprint_bytes(self) -> int:
        th, tw = self.source_valid.shape
        p2 = self.patch_label.size
        return _BYTES_PER_ELEMENT * (th * tw + 2 * p2)


def tile_footprint_bytes(patch_size: int, group_dim: tuple[int, int] = (8, 8)) -> int:
    """Scratch bytes per work group: source tile + patch data + patch labels."""
    gx, gy = group_dim
    tile = (patch_size + gx - 1) * (patch_size + gy - 1)
    return _BYTES_PER_ELEMENT * (tile + 2 * patch_size * patch_size)


def load_tile(
    img: RasterImage,
    mask: RegionMask,
    p_hat: tuple[int, int],
    group_origin: tuple[int, int],
    patch_size: int,
    group_dim: tuple[int, int] = (8, 8),
    counters: KernelCounters | None = None,
) -> TileBuffer:
    """Cooperative strided load of one group's scratch buffer.

    Work items stride through the flat tile index by group size, each element
    loaded exactly once; items with index below P*P also stage the object
    patch pixel and its label. Every issued load counts one global read.
    """
    px, py = p_hat
    gox, goy = group_origin
    gdx, gdy = group_dim
    half = (patch_size - 1) // 2
    h, w = mask.state.shape
    tw = patch_size + gdx - 1
    th = patch_size + gdy - 1
    ox0, oy0 = gox - half, goy - half

    source_tile = np.zeros((th, tw, 4), np.uint8)
    source_valid = np.zeros((th, tw), bool)
    patch_data = np.zeros((patch_size, patch_size, 4), np.uint8)
    patch_label = np.zeros((patch_size, patch_size), bool)

    group_size = gdx * gdy
    tile_elems = th * tw
    p2 = patch_size * patch_size
    global_reads = 0
    for local_id in range(group_size):
        idx = local_id
        while idx < tile_elems:
            if idx < p2:
                dy, dx = divmod(idx, patch_size)
                ty, tx = py - half + dy, px - half + dx
                if 0 <= ty < h and 0 <= tx < w:
                    patch_data[dy, dx] = img.pixels[ty, tx]
                    patch_label[dy, dx] = mask.state[ty, tx] != OBJECT
                global_reads += 2
            tyy, txx = divmod(idx, tw)
            iy, ix = oy0 + tyy, ox0 + txx
            if 0 <= iy < h and 0 <= ix < w:
                source_tile[tyy, txx] = img.pixels[iy, ix]
                source_valid[tyy, txx] = True
            global_reads += 1
            idx += group_size
    if counters is not None:
        counters.global_reads += global_reads
    return TileBuffer(source_tile, source_valid, patch_data, patch_label, (ox0, oy0))


def dispatch_find_best_patch(
    img: RasterImage,
    mask: RegionMask,
    p_hat: tuple[int, int],
    bounds: SearchBounds,
    valid: np.ndarray,
    patch_size: int,
    config: SearchConfig,
    counters: KernelCounters,
) -> tuple[tuple[int, int], int]:
    """Tiled equivalent of find_best_patch: identical argmin position and ssd.

    Each work group is one task on a pool of config.threads workers; groups
    with no valid candidate are skipped without loading. Per-group minima
    merge by (ssd, y, x), so the result is independent of execution order.
    """
    footprint = tile_footprint_bytes(patch_size, config.group_dim)
    if footprint > config.local_mem_cap_bytes:
        warnings.warn(
            f"tile footprint {footprint} B exceeds the {config.local_mem_cap_bytes} B "
            "local-memory cap; running anyway",
            RuntimeWarning,
            stacklevel=2,
        )
    if bounds.is_empty() or not valid[bounds.top : bounds.bottom, bounds.left : bounds.right].any():
        raise NoCandidateError("no valid candidate center inside the search bounds")

    px, py = p_hat
    gdx, gdy = config.group_dim
    grid = WorkGroupGrid.covering(bounds, config.group_dim)
    args = (img.pixels, mask.state, valid, px, py, patch_size)

    def run_group(origin: tuple[int, int]):
        gox, goy = origin
        return _kernels.tiled_group_search(
            *args, gox, goy, gdx, gdy, bounds.right, bounds.bottom
        )

    origins = grid.origins(bounds)
    if config.threads > 1 and len(origins) > 1:
        results = list(worker_pool(config.threads).map(run_group, origins))
    else:
        results = [run_group(origin) for origin in origins]

    best = None
    for ssd, by, bx, element_ops, candidates, global_reads, tile_reads in results:
        counters.ssd_element_ops += int(element_ops)
        counters.candidates_evaluated += int(candidates)
        counters.global_reads += int(global_reads)
        counters.tile_reads += int(tile_reads)
        if ssd < 0:
            continue
        key = (int(ssd), int(by), int(bx))
        if best is None or key < best:
            best = key
    if best is None:
        raise NoCandidateError("no valid candidate center inside the search bounds")
    ssd, by, bx = best
    return (bx, by), ssd
