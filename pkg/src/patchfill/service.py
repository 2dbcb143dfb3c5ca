"""Session-oriented HTTP API for interactive, iterative object removal.

Workflow per session: upload an image, set a mask (PNG or brush strokes),
start an inpaint job, poll progress, preview snapshots, then commit the
result as the new base (or undo). Sessions are in-memory with idle-TTL
eviction; each session runs at most one job at a time on a worker pool
shared by the whole service.
"""

from __future__ import annotations

import math
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import (
    InpaintState,
    IterationReport,
    init_state,
    iteration_estimate,
    run,
)
from .errors import InputError, PatchFillError
from .image_io import decode_image, decode_mask, encode_png
from .raster import OBJECT, SOURCE, RasterImage, RegionMask
from .search import Kernel, SearchConfig

DEFAULT_HISTORY_CAP = 8
DEFAULT_PREVIEW_EVERY = 10


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str) -> None:
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _round_half_up(v: float) -> int:
    return math.floor(v + 0.5)


def _div_round_half_up(a: int, b: int) -> int:
    # floor(a/b + 1/2) in pure integers; b > 0.
    return (2 * a + b) // (2 * b)


def rasterize_strokes(
    strokes: list[dict[str, Any]], width: int, height: int
) -> np.ndarray:
    """Boolean object mask from brush strokes.

    Round brush with an inclusive disc (dx^2 + dy^2 <= r^2); consecutive
    points are connected by stamping the disc along the segment at every
    Chebyshev step. Coordinates round half-up to pixel centers. The web
    client mirrors this rule exactly, so keep any change in sync.
    """
    mask = np.zeros((height, width), dtype=bool)

    def stamp(cx: int, cy: int, r: int) -> None:
        y0, y1 = max(0, cy - r), min(height, cy + r + 1)
        x0, x1 = max(0, cx - r), min(width, cx + r + 1)
        if y0 >= y1 or x0 >= x1:
            return
        yy, xx = np.mgrid[y0:y1, x0:x1]
        mask[y0:y1, x0:x1] |= (xx - cx) ** 2 + (yy - cy) ** 2 <= r * r

    for stroke in strokes:
        radius = int(stroke["radius"])
        if radius < 0:
            raise InputError(f"brush radius must be >= 0, got {radius}")
        points = [
            (_round_half_up(float(x)), _round_half_up(float(y)))
            for x, y in stroke["points"]
        ]
        if not points:
            continue
        stamp(points[0][0], points[0][1], radius)
        for (x0, y0), (x1, y1) in zip(points, points[1:]):
            dx, dy = x1 - x0, y1 - y0
            steps = max(abs(dx), abs(dy))
            for i in range(1, steps + 1):
                stamp(
                    x0 + _div_round_half_up(i * dx, steps),
                    y0 + _div_round_half_up(i * dy, steps),
                    radius,
                )
    return mask


@dataclass
class Job:
    state: str = "idle"  # idle | running | done | failed
    fraction_filled: float = 0.0
    iteration: int = 0
    estimate_total_iterations: int = 0
    params: dict[str, Any] | None = None
    result: RasterImage | None = None
    preview: RasterImage | None = None
    error: str | None = None


@dataclass
class Session:
    id: str
    base: RasterImage
    pending_mask: RegionMask | None = None
    job: Job = field(default_factory=Job)
    history: list[RasterImage] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)

    def touch(self) -> None:
        self.last_access = time.monotonic()


class SessionRegistry:
    def __init__(self, ttl: float) -> None:
        self._ttl = ttl
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _evict_expired(self) -> None:
        now = time.monotonic()
        stale = [
            sid
            for sid, s in self._sessions.items()
            if now - s.last_access > self._ttl and s.job.state != "running"
        ]
        for sid in stale:
            del self._sessions[sid]

    def create(self, base: RasterImage) -> Session:
        session = Session(id=uuid.uuid4().hex, base=base)
        with self._lock:
            self._evict_expired()
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._evict_expired()
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, "session_not_found", f"unknown session {session_id}")
        session.touch()
        return session


def _parse_params(payload: dict[str, Any], threads: int) -> SearchConfig | ApiError:
    alpha: float | None
    raw_alpha = payload.get("alpha", "full")
    if isinstance(raw_alpha, str):
        if raw_alpha.lower() != "full":
            try:
                raw_alpha = float(raw_alpha)
            except ValueError:
                return ApiError(422, "bad_params", f"invalid alpha {raw_alpha!r}")
    if isinstance(raw_alpha, str):
        alpha = None
    else:
        alpha = float(raw_alpha)
    try:
        return SearchConfig(
            alpha=alpha,
            patch_size=int(payload.get("patchSize", 9)),
            kernel=Kernel(str(payload.get("kernel", "naive"))),
            threads=threads,
        )
    except (InputError, ValueError) as err:
        return ApiError(422, "bad_params", str(err))


def create_app(
    max_image_px: int = 1_000_000,
    session_ttl: float = 3600.0,
    threads: int = 1,
    history_cap: int = DEFAULT_HISTORY_CAP,
    preview_every: int = DEFAULT_PREVIEW_EVERY,
    workers: int = 2,
) -> FastAPI:
    app = FastAPI(title="patchfill edit service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    registry = SessionRegistry(ttl=session_ttl)
    pool = ThreadPoolExecutor(max_workers=workers, thread_name_prefix="inpaint")

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    def decode_base_image(body: bytes) -> RasterImage:
        if not body:
            raise ApiError(400, "unsupported_format", "empty request body")
        try:
            image = decode_image(body)
        except InputError as err:
            raise ApiError(400, "unsupported_format", str(err)) from err
        if image.width * image.height > max_image_px:
            raise ApiError(
                413,
                "too_large",
                f"image has {image.width * image.height} px, cap is {max_image_px}",
            )
        return image

    def mask_summary(mask: RegionMask) -> dict[str, Any]:
        bbox = mask.object_bbox()
        assert bbox is not None
        return {
            "objectPixels": mask.object_count,
            "bbox": {
                "minX": bbox[0],
                "minY": bbox[1],
                "maxX": bbox[2],
                "maxY": bbox[3],
            },
        }

    def execute_job(session: Session, config: SearchConfig, state: InpaintState) -> None:
        initial = state.initial_object_count

        def sink(report: IterationReport) -> None:
            with session.lock:
                job = session.job
                job.iteration = report.iteration
                job.fraction_filled = min(
                    1.0, (initial - report.remaining_object_pixels) / initial
                )
                if report.iteration % preview_every == 0:
                    job.preview = state.image.copy()

        try:
            result, _summary = run(state, config, progress_sink=sink)
            with session.lock:
                session.job.result = result.copy()
                session.job.preview = result.copy()
                session.job.fraction_filled = 1.0
                session.job.state = "done"
        except Exception as err:  # noqa: BLE001 - a stuck "running" job bricks the session
            with session.lock:
                session.job.state = "failed"
                session.job.error = str(err) if isinstance(err, PatchFillError) else (
                    f"internal error: {err}"
                )

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request) -> dict[str, Any]:
        body = await request.body()
        image = decode_base_image(body)
        session = registry.create(image)
        return {"id": session.id, "width": image.width, "height": image.height}

    @app.post("/sessions/{session_id}/mask")
    async def set_mask(session_id: str, request: Request) -> dict[str, Any]:
        session = registry.get(session_id)
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("application/json"):
            payload = await request.json()
            strokes = payload.get("strokes")
            if not isinstance(strokes, list) or not strokes:
                raise ApiError(422, "bad_mask", "stroke list is missing or empty")
            try:
                object_px = rasterize_strokes(
                    strokes, session.base.width, session.base.height
                )
            except (InputError, KeyError, TypeError, ValueError) as err:
                raise ApiError(422, "bad_mask", f"invalid stroke payload: {err}") from err
            mask = RegionMask(
                np.where(object_px, OBJECT, SOURCE).astype(np.uint8)
            )
        else:
            body = await request.body()
            try:
                mask = decode_mask(body)
            except InputError as err:
                raise ApiError(422, "bad_mask", str(err)) from err
            if (mask.width, mask.height) != (session.base.width, session.base.height):
                raise ApiError(
                    422,
                    "bad_mask",
                    f"mask is {mask.width}x{mask.height}, image is "
                    f"{session.base.width}x{session.base.height}",
                )
        count = mask.object_count
        if count == 0:
            raise ApiError(422, "bad_mask", "mask marks no object pixels")
        if count == session.base.width * session.base.height:
            raise ApiError(422, "bad_mask", "mask covers the whole image")
        with session.lock:
            if session.job.state == "running":
                raise ApiError(409, "job_running", "a job is already running")
            session.pending_mask = mask
            if session.job.state in ("done", "failed"):
                session.job = Job()
        return mask_summary(mask)

    @app.post("/sessions/{session_id}/inpaint", status_code=202)
    async def start_inpaint(session_id: str, request: Request) -> dict[str, Any]:
        session = registry.get(session_id)
        try:
            payload = await request.json()
        except Exception:
            payload = {}
        config = _parse_params(payload if isinstance(payload, dict) else {}, threads)
        if isinstance(config, ApiError):
            raise config
        with session.lock:
            if session.job.state == "running":
                raise ApiError(409, "job_running", "a job is already running")
            if session.pending_mask is None:
                raise ApiError(422, "no_mask", "set a mask before starting a job")
            mask = session.pending_mask
            try:
                state = init_state(session.base, mask, config)
            except (InputError, PatchFillError) as err:
                raise ApiError(422, "bad_params", str(err)) from err
            bbox = mask.object_bbox()
            assert bbox is not None
            params = {
                "alpha": "full" if config.alpha is None else config.alpha,
                "patchSize": config.patch_size,
                "kernel": config.kernel.value,
            }
            session.job = Job(
                state="running",
                params=params,
                estimate_total_iterations=iteration_estimate(
                    bbox[2] - bbox[0] + 1, bbox[3] - bbox[1] + 1, config.patch_size
                ),
                preview=session.base,
            )
        pool.submit(execute_job, session, config, state)
        return {"job": params}

    @app.get("/sessions/{session_id}/progress")
    async def get_progress(session_id: str) -> dict[str, Any]:
        session = registry.get(session_id)
        with session.lock:
            job = session.job
            body: dict[str, Any] = {
                "state": job.state,
                "fractionFilled": job.fraction_filled,
                "iteration": job.iteration,
                "estimateTotalIterations": job.estimate_total_iterations,
            }
            if job.params is not None:
                body["params"] = job.params
            if job.error is not None:
                body["error"] = job.error
        return body

    def _png_response(image: RasterImage) -> Response:
        return Response(content=encode_png(image), media_type="image/png")

    @app.get("/sessions/{session_id}/preview")
    async def get_preview(session_id: str) -> Response:
        session = registry.get(session_id)
        with session.lock:
            image = session.job.preview or session.base
        return _png_response(image)

    @app.get("/sessions/{session_id}/result")
    async def get_result(session_id: str) -> Response:
        session = registry.get(session_id)
        with session.lock:
            if session.job.state != "done" or session.job.result is None:
                raise ApiError(409, "no_result", "job has not finished")
            image = session.job.result
        return _png_response(image)

    @app.post("/sessions/{session_id}/commit")
    async def commit(session_id: str) -> dict[str, Any]:
        session = registry.get(session_id)
        with session.lock:
            if session.job.state != "done" or session.job.result is None:
                raise ApiError(409, "no_result", "nothing to commit")
            session.history.append(session.base)
            if len(session.history) > history_cap:
                session.history.pop(0)
            session.base = session.job.result
            session.pending_mask = None
            session.job = Job()
            depth = len(session.history)
        return {
            "width": session.base.width,
            "height": session.base.height,
            "historyDepth": depth,
        }

    @app.post("/sessions/{session_id}/undo")
    async def undo(session_id: str) -> dict[str, Any]:
        session = registry.get(session_id)
        with session.lock:
            if session.job.state == "running":
                raise ApiError(409, "job_running", "a job is already running")
            if not session.history:
                raise ApiError(409, "empty_history", "nothing to undo")
            session.base = session.history.pop()
            session.pending_mask = None
            session.job = Job()
            depth = len(session.history)
        return {
            "width": session.base.width,
            "height": session.base.height,
            "historyDepth": depth,
        }

    return app
