"""Command-line front end: single-image inpainting, parameter sweeps, serving.

Exit codes: 0 success, 2 invalid input or I/O failure, 3 no donor patch
exists even at full search.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import statistics
import sys
import time

from .engine import init_state, run
from .errors import InputError, NoCandidateError, PatchFillError
from .image_io import load_image, load_mask, save_image
from .search import Kernel, SearchConfig, compute_search_bounds

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NO_CANDIDATE = 3

SWEEP_ALPHAS: tuple[float | None, ...] = (None, 2.0, 1.0, 0.5, 0.2, 0.05)
SWEEP_PATCH_SIZES = (9, 13, 17)

BENCH_FIELDS = [
    "alpha",
    "search_extent",
    "patch_size",
    "kernel",
    "wall_time_s",
    "ssd_element_ops",
    "global_reads",
    "tile_reads",
    "iterations",
]


def _parse_alpha(text: str) -> float | None:
    if text.strip().lower() == "full":
        return None
    try:
        value = float(text)
    except ValueError as err:
        raise InputError(f"invalid search factor: {text!r}") from err
    if value < 0:
        raise InputError(f"search factor must be >= 0 or 'full', got {text}")
    return value


def _format_alpha(alpha: float | None) -> str:
    if alpha is None:
        return "full"
    return f"{alpha:g}"


def _default_threads() -> int:
    env = os.environ.get("PATCHFILL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            print(f"warning: ignoring bad PATCHFILL_THREADS={env!r}", file=sys.stderr)
    return 1


def cmd_inpaint(args: argparse.Namespace) -> int:
    image = load_image(args.image)
    mask = load_mask(args.mask)
    config = SearchConfig(
        alpha=_parse_alpha(args.alpha),
        patch_size=args.patch_size,
        kernel=Kernel(args.kernel),
        threads=args.threads,
    )
    state = init_state(image, mask, config)
    start = time.perf_counter()
    result, summary = run(state, config)
    wall = time.perf_counter() - start
    save_image(result, args.out)

    c = summary.counters
    print(f"inpainted {args.image} -> {args.out}")
    print(
        f"iterations={summary.iterations} pixels_filled={summary.pixels_filled} "
        f"wall_time={wall:.3f}s"
    )
    print(
        f"ssd_element_ops={c.ssd_element_ops} global_reads={c.global_reads} "
        f"tile_reads={c.tile_reads} candidates={c.candidates_evaluated}"
    )
    total_ops = sum(summary.phase_ops.values())
    for phase, ops in summary.phase_ops.items():
        share = 100.0 * ops / total_ops if total_ops else 0.0
        print(f"  {phase:>18}: {ops:>14} ops ({share:5.1f}%)")
    return EXIT_OK


def _parse_list(text: str, parse, what: str):
    items = [part.strip() for part in text.split(",") if part.strip()]
    if not items:
        raise InputError(f"empty {what} list: {text!r}")
    return [parse(item) for item in items]


def cmd_bench(args: argparse.Namespace) -> int:
    image = load_image(args.image)
    mask = load_mask(args.mask)

    alphas = list(SWEEP_ALPHAS)
    patch_sizes = list(SWEEP_PATCH_SIZES)
    kernels = [Kernel.NAIVE, Kernel.TILED]
    if args.alphas:
        alphas = _parse_list(args.alphas, _parse_alpha, "alpha")
    if args.patch_sizes:
        patch_sizes = _parse_list(args.patch_sizes, int, "patch size")
    if args.kernels:
        kernels = _parse_list(args.kernels, Kernel, "kernel")

    bbox = mask.object_bbox()
    if bbox is None:
        raise InputError("mask marks no object pixels")
    dims = (image.width, image.height)

    rows = []
    for alpha in alphas:
        extent = compute_search_bounds(bbox, alpha, dims).extent
        for patch_size in patch_sizes:
            for kernel in kernels:
                config = SearchConfig(
                    alpha=alpha, patch_size=patch_size, kernel=kernel, threads=args.threads
                )
                times = []
                summary = None
                for _ in range(args.repeat):
                    state = init_state(image, mask, config)
                    start = time.perf_counter()
                    _, summary = run(state, config)
                    times.append(time.perf_counter() - start)
                assert summary is not None
                c = summary.counters
                rows.append(
                    {
                        "alpha": _format_alpha(alpha),
                        "search_extent": f"{extent[0]}x{extent[1]}",
                        "patch_size": patch_size,
                        "kernel": kernel.value,
                        "wall_time_s": round(statistics.median(times), 6),
                        "ssd_element_ops": c.ssd_element_ops,
                        "global_reads": c.global_reads,
                        "tile_reads": c.tile_reads,
                        "iterations": summary.iterations,
                    }
                )
                print(
                    f"bench alpha={_format_alpha(alpha):>5} P={patch_size:>2} "
                    f"kernel={kernel.value:>5}: {rows[-1]['wall_time_s']:.3f}s "
                    f"ssd_ops={c.ssd_element_ops}",
                    file=sys.stderr,
                )

    if args.report == "json":
        text = json.dumps(rows, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        max_image_px=args.max_image_px,
        session_ttl=args.session_ttl,
        threads=args.threads,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patchfill",
        description="Exemplar-based object removal with switchable search kernels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker threads for the search kernels (env PATCHFILL_THREADS)")

    p_inpaint = sub.add_parser("inpaint", parents=[common], help="remove one masked object")
    p_inpaint.add_argument("--image", required=True)
    p_inpaint.add_argument("--mask", required=True)
    p_inpaint.add_argument("--out", required=True)
    p_inpaint.add_argument("--alpha", default="full", help="search factor or 'full'")
    p_inpaint.add_argument("--patch-size", type=int, default=9)
    p_inpaint.add_argument("--kernel", choices=["naive", "tiled"], default="naive")
    p_inpaint.set_defaults(func=cmd_inpaint)

    p_bench = sub.add_parser("bench", parents=[common], help="parameter-sweep benchmark")
    p_bench.add_argument("--image", required=True)
    p_bench.add_argument("--mask", required=True)
    p_bench.add_argument("--out", help="report file (default stdout)")
    p_bench.add_argument("--sweep", action="store_true",
                         help="run the default full sweep grid (also the default)")
    p_bench.add_argument("--alphas", help="comma list of search factors / 'full'")
    p_bench.add_argument("--patch-sizes", help="comma list of odd patch sizes")
    p_bench.add_argument("--kernels", help="comma list: naive,tiled")
    p_bench.add_argument("--repeat", type=int, default=1,
                         help="runs per cell; wall time reported as the median")
    p_bench.add_argument("--report", choices=["csv", "json"], default="csv")
    p_bench.set_defaults(func=cmd_bench)

    p_serve = sub.add_parser("serve", parents=[common], help="run the editing service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--max-image-px", type=int, default=1_000_000)
    p_serve.add_argument("--session-ttl", type=float, default=3600.0,
                         help="idle session lifetime in seconds")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoCandidateError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NO_CANDIDATE
    except (InputError, PatchFillError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
