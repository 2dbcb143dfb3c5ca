#!/usr/bin/env python3
"""Regenerate the bundled sample image/mask pair and the frontend fixtures.

Deterministic by construction; rerunning must reproduce the committed files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from patchfill.image_io import save_image
from patchfill.raster import OBJECT, SOURCE, RasterImage
from patchfill.service import rasterize_strokes

ROOT = Path(__file__).resolve().parents[1]


def textured_image(width: int, height: int, seed: int) -> RasterImage:
    """Sky-to-ground gradient with a brick-like texture and a dark object blob."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    r = 90 + 110 * yy / height + 12 * np.sin(xx / 6.0)
    g = 120 + 80 * yy / height + 12 * np.sin(yy / 9.0)
    b = 180 - 90 * yy / height + 12 * np.sin((xx + yy) / 11.0)
    noise = rng.normal(0.0, 6.0, size=(height, width, 3))
    rgb = np.stack([r, g, b], axis=-1) + noise
    return RasterImage.from_rgb(np.clip(rgb, 0, 255).astype(np.uint8))


def disc_mask(width: int, height: int, cx: float, cy: float, radius: float) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width]
    state = np.full((height, width), SOURCE, np.uint8)
    state[(xx - cx) ** 2 + (yy - cy) ** 2 <= radius**2] = OBJECT
    return state


def mask_to_image(state: np.ndarray) -> RasterImage:
    luma = np.where(state == OBJECT, 255, 0).astype(np.uint8)
    return RasterImage.from_rgb(np.stack([luma] * 3, axis=-1))


def paint_object(img: RasterImage, state: np.ndarray) -> None:
    # Drop a visible blob onto the image so the demo has something to remove.
    obj = state == OBJECT
    img.pixels[obj, 0] = 40
    img.pixels[obj, 1] = 24
    img.pixels[obj, 2] = 30


def main() -> None:
    data = ROOT / "data"
    data.mkdir(exist_ok=True)

    # 128x128 bench image with a 24x24-bbox blob (disc radius 12 at +.5 centers).
    img = textured_image(128, 128, seed=20240917)
    state = disc_mask(128, 128, cx=63.5, cy=63.5, radius=12.0)
    paint_object(img, state)
    save_image(img, data / "sample_image.png")
    save_image(mask_to_image(state), data / "sample_mask.png")

    fixtures = ROOT / "frontend" / "test" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)

    # 64x64 base image with a small 12x12-bbox blob for the live UI loop.
    ui_img = textured_image(64, 64, seed=5150)
    ui_state = disc_mask(64, 64, cx=31.5, cy=31.5, radius=6.0)
    paint_object(ui_img, ui_state)
    save_image(ui_img, fixtures / "base.png")

    # Stroke-rasterization fixture shared with the TypeScript client tests.
    strokes = [
        {"points": [[12.0, 9.0]], "radius": 5},
        {"points": [[20.4, 30.6], [33.5, 18.2], [47.0, 41.0]], "radius": 3},
        {"points": [[5.0, 55.0], [25.0, 55.0]], "radius": 0},
    ]
    mask = rasterize_strokes(strokes, 64, 64)
    pixels = [[int(x), int(y)] for y, x in np.argwhere(mask)]
    fixture = {"width": 64, "height": 64, "strokes": strokes, "pixels": pixels}
    (fixtures / "strokes.json").write_text(json.dumps(fixture, indent=1) + "\n")

    print(f"wrote {data / 'sample_image.png'}")
    print(f"wrote {data / 'sample_mask.png'}")
    print(f"wrote {fixtures / 'base.png'}")
    print(f"wrote {fixtures / 'strokes.json'} ({len(pixels)} mask px)")


if __name__ == "__main__":
    main()
