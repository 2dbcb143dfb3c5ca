"""Iterative inpainting driver.

Each iteration: extract the fill front, pick the max-priority patch, search
for its best donor (naive or tiled kernel), copy donor pixels into the still
empty positions, then update confidence, luma, and the object bbox. The loop
ends when the object region is gone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyObjectRegionError,
    NoCandidateError,
    ObjectCoversImageError,
)
from .priority import (
    ConfidenceMap,
    init_confidence,
    select_max_priority,
    update_confidence,
)
from .raster import (
    FILLED,
    OBJECT,
    GrayImage,
    RasterImage,
    RegionMask,
    bt601_luma,
    extract_border,
    mark_valid_sources,
    to_grayscale,
)
from .search import (
    Kernel,
    KernelCounters,
    SearchBounds,
    SearchConfig,
    alpha_ladder_from,
    compute_search_bounds,
    find_best_patch,
)
from .tiled import dispatch_find_best_patch

# Cost bookkeeping for the per-phase breakdown; the gradient/normal stencil
# of the data term touches 8 neighbors plus the center patch sum.
_PRIORITY_STENCIL = 8

ProgressSink = Callable[["IterationReport"], None]


@dataclass
class InpaintState:
    image: RasterImage  # working copy, mutated in place
    gray: GrayImage
    mask: RegionMask  # working copy, OBJECT shrinks to FILLED
    conf: ConfidenceMap
    valid: np.ndarray  # static candidate-center map from the initial mask
    counters: KernelCounters
    iteration: int
    initial_object_count: int
    initial_bbox: tuple[int, int, int, int]
    initial_bounds: SearchBounds
    phase_ops: dict[str, int] = field(default_factory=dict)


@dataclass
class IterationReport:
    iteration: int
    p_hat: tuple[int, int]
    q_tilde: tuple[int, int]
    ssd: int
    pixels_filled: int
    remaining_object_pixels: int
    counters_delta: KernelCounters
    alpha_used: float | None


@dataclass
class RunSummary:
    iterations: int
    pixels_filled: int
    counters: KernelCounters
    phase_ops: dict[str, int]
    elapsed_seconds: float


def iteration_estimate(w: int, h: int, patch_size: int) -> int:
    """Rough iteration count for a w x h object: ceil(w*h / P^2)."""
    if patch_size < 1:
        raise ValueError(f"patch size must be >= 1, got {patch_size}")
    return -(-(w * h) // (patch_size * patch_size))


def init_state(
    img: RasterImage,
    mask: RegionMask | RasterImage | GrayImage,
    config: SearchConfig,
) -> InpaintState:
    """Build working state: grayscale, confidence, candidate map, bounds."""
    if not isinstance(mask, RegionMask):
        mask = RegionMask.from_mask_image(mask)
    if (mask.width, mask.height) != (img.width, img.height):
        raise DimensionMismatchError(
            f"mask is {mask.width}x{mask.height}, image is {img.width}x{img.height}"
        )
    object_count = mask.object_count
    if object_count == 0:
        raise EmptyObjectRegionError("mask marks no object pixels")
    if object_count == img.width * img.height:
        raise ObjectCoversImageError("mask marks every pixel as object")

    image = img.copy()
    mask = mask.copy()
    gray = to_grayscale(image)
    conf = init_confidence(mask)
    valid = mark_valid_sources(mask, config.patch_size)
    bbox = mask.object_bbox()
    assert bbox is not None
    bounds = compute_search_bounds(bbox, config.alpha, (image.width, image.height))
    wh = image.width * image.height
    return InpaintState(
        image=image,
        gray=gray,
        mask=mask,
        conf=conf,
        valid=valid,
        counters=KernelCounters(),
        iteration=0,
        initial_object_count=object_count,
        initial_bbox=bbox,
        initial_bounds=bounds,
        phase_ops={
            "grayscale": wh,
            "valid_map": wh,
            "border_update": 0,
            "priority_update": 0,
            "find_best_patch": 0,
            "confidence_update": 0,
            "image_update": 0,
        },
    )


def _search(
    state: InpaintState, config: SearchConfig, p_hat: tuple[int, int]
) -> tuple[tuple[int, int], int, float | None]:
    """Best-patch search with alpha-ladder escalation on empty regions.

    Bounds stay anchored to the initial object bbox for the whole run: the
    donor ring lives around the original object, so re-centering bounds on
    the shrinking remainder would strand them in donor-free territory and
    force needless ladder escalation (measurably slower for large patches).
    """
    dims = (state.image.width, state.image.height)
    last_error: NoCandidateError | None = None
    for alpha in alpha_ladder_from(config.alpha):
        bounds = compute_search_bounds(state.initial_bbox, alpha, dims)
        try:
            if config.kernel is Kernel.TILED:
                q, ssd = dispatch_find_best_patch(
                    state.image,
                    state.mask,
                    p_hat,
                    bounds,
                    state.valid,
                    config.patch_size,
                    config,
                    state.counters,
                )
            else:
                q, ssd = find_best_patch(
                    state.image,
                    state.mask,
                    p_hat,
                    bounds,
                    state.valid,
                    config.patch_size,
                    state.counters,
                    threads=config.threads,
                )
            return q, ssd, alpha
        except NoCandidateError as err:
            last_error = err
    raise NoCandidateError(
        "no valid source patch exists even at full search"
    ) from last_error


def step(state: InpaintState, config: SearchConfig) -> IterationReport:
    """One fill iteration; always fills at least the selected front pixel."""
    if state.mask.object_count == 0:
        raise EmptyObjectRegionError("object region is already filled")
    h, w = state.mask.state.shape
    wh = w * h
    patch_size = config.patch_size
    half = (patch_size - 1) // 2
    before = replace(state.counters)

    border = extract_border(state.mask)
    state.phase_ops["border_update"] += wh

    record = select_max_priority(border, state.conf, state.mask, state.gray, patch_size)
    state.phase_ops["priority_update"] += len(border) * (
        patch_size * patch_size + _PRIORITY_STENCIL
    )

    q_tilde, ssd, alpha_used = _search(state, config, record.pixel)

    px, py = record.pixel
    qx, qy = q_tilde
    ty0, ty1 = max(0, py - half), min(h, py + half + 1)
    tx0, tx1 = max(0, px - half), min(w, px + half + 1)
    sy0, sy1 = ty0 - py + qy, ty1 - py + qy
    sx0, sx1 = tx0 - px + qx, tx1 - px + qx

    target_state = state.mask.state[ty0:ty1, tx0:tx1]
    fill = target_state == OBJECT
    donor = state.image.pixels[sy0:sy1, sx0:sx1]
    window = state.image.pixels[ty0:ty1, tx0:tx1]
    window[fill] = donor[fill]
    target_state[fill] = FILLED

    filled_local = np.argwhere(fill)
    filled_yx = filled_local + np.array([ty0, tx0], dtype=np.int64)
    pixels_filled = filled_yx.shape[0]

    update_confidence(state.conf, record.pixel, filled_yx, record.confidence_term)
    state.phase_ops["confidence_update"] += pixels_filled

    state.gray.luma[ty0:ty1, tx0:tx1][fill] = bt601_luma(window[fill])
    state.phase_ops["image_update"] += 2 * pixels_filled

    state.iteration += 1
    state.phase_ops["find_best_patch"] = state.counters.ssd_element_ops
    delta = KernelCounters(
        state.counters.ssd_element_ops - before.ssd_element_ops,
        state.counters.global_reads - before.global_reads,
        state.counters.tile_reads - before.tile_reads,
        state.counters.candidates_evaluated - before.candidates_evaluated,
    )
    return IterationReport(
        iteration=state.iteration,
        p_hat=record.pixel,
        q_tilde=q_tilde,
        ssd=ssd,
        pixels_filled=pixels_filled,
        remaining_object_pixels=state.mask.object_count,
        counters_delta=delta,
        alpha_used=alpha_used,
    )


def run(
    state: InpaintState,
    config: SearchConfig,
    progress_sink: ProgressSink | None = None,
) -> tuple[RasterImage, RunSummary]:
    """Loop step() until the object region is empty."""
    start = time.perf_counter()
    while state.mask.object_count > 0:
        report = step(state, config)
        if progress_sink is not None:
            progress_sink(report)
    elapsed = time.perf_counter() - start
    summary = RunSummary(
        iterations=state.iteration,
        pixels_filled=state.initial_object_count,
        counters=state.counters,
        phase_ops=dict(state.phase_ops),
        elapsed_seconds=elapsed,
    )
    return state.image, summary
