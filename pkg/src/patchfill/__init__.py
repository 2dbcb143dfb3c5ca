"""Exemplar-based object removal with switchable naive / tiled search kernels."""

from .engine import (
    InpaintState,
    IterationReport,
    RunSummary,
    init_state,
    iteration_estimate,
    run,
    step,
)
from .errors import (
    DimensionMismatchError,
    EmptyBorderError,
    EmptyObjectRegionError,
    InputError,
    NoCandidateError,
    ObjectCoversImageError,
    PatchFillError,
)
from .image_io import load_image, load_mask, save_image
from .priority import (
    ConfidenceMap,
    PriorityRecord,
    confidence_term,
    data_term,
    init_confidence,
    select_max_priority,
    update_confidence,
)
from .raster import (
    BorderSet,
    GrayImage,
    PixelState,
    RasterImage,
    RegionMask,
    extract_border,
    mark_valid_sources,
    to_grayscale,
)
from .search import (
    ALPHA_LADDER,
    FULL_SEARCH,
    Kernel,
    KernelCounters,
    SearchBounds,
    SearchConfig,
    SsdResult,
    compute_search_bounds,
    estimate_complexity,
    find_best_patch,
    overlap_area,
    patch_ssd,
    search_area_size,
)
from .tiled import (
    TileBuffer,
    WorkGroupGrid,
    dispatch_find_best_patch,
    load_tile,
    tile_footprint_bytes,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_LADDER",
    "BorderSet",
    "ConfidenceMap",
    "DimensionMismatchError",
    "EmptyBorderError",
    "EmptyObjectRegionError",
    "FULL_SEARCH",
    "GrayImage",
    "InpaintState",
    "InputError",
    "IterationReport",
    "Kernel",
    "KernelCounters",
    "NoCandidateError",
    "ObjectCoversImageError",
    "PatchFillError",
    "PixelState",
    "PriorityRecord",
    "RasterImage",
    "RegionMask",
    "RunSummary",
    "SearchBounds",
    "SearchConfig",
    "SsdResult",
    "TileBuffer",
    "WorkGroupGrid",
    "compute_search_bounds",
    "confidence_term",
    "data_term",
    "dispatch_find_best_patch",
    "estimate_complexity",
    "extract_border",
    "find_best_patch",
    "init_confidence",
    "init_state",
    "iteration_estimate",
    "load_image",
    "load_mask",
    "load_tile",
    "mark_valid_sources",
    "overlap_area",
    "patch_ssd",
    "run",
    "save_image",
    "search_area_size",
    "select_max_priority",
    "step",
    "tile_footprint_bytes",
    "to_grayscale",
    "update_confidence",
]
