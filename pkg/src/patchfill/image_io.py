"""PNG / binary-PPM image and PNG / PGM mask loading and saving."""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InputError
from .raster import GrayImage, RasterImage, RegionMask

_IMAGE_SUFFIXES = {".png", ".ppm"}
_MASK_SUFFIXES = {".png", ".pgm"}


def decode_image(data: bytes) -> RasterImage:
    """Decode PNG or binary PPM bytes into an RGBA canvas."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.format not in ("PNG", "PPM"):
                raise InputError(f"unsupported image format: {im.format}")
            rgba = im.convert("RGBA")
            return RasterImage(np.asarray(rgba, dtype=np.uint8))
    except UnidentifiedImageError as err:
        raise InputError("unrecognized image data") from err


def decode_mask(data: bytes) -> RegionMask:
    """Decode PNG or PGM mask bytes; luma >= 128 marks object pixels."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.format not in ("PNG", "PPM"):  # PIL reports PGM under PPM
                raise InputError(f"unsupported mask format: {im.format}")
            if im.mode in ("L", "I", "I;16", "1"):
                gray = GrayImage(np.asarray(im.convert("L"), dtype=np.uint8))
                return RegionMask.from_mask_image(gray)
            rgba = RasterImage(np.asarray(im.convert("RGBA"), dtype=np.uint8))
            return RegionMask.from_mask_image(rgba)
    except UnidentifiedImageError as err:
        raise InputError("unrecognized mask data") from err


def load_image(path: str | Path) -> RasterImage:
    path = Path(path)
    if path.suffix.lower() not in _IMAGE_SUFFIXES:
        raise InputError(f"unsupported image file type: {path.suffix or path.name}")
    try:
        return decode_image(path.read_bytes())
    except OSError as err:
        raise InputError(f"cannot read image {path}: {err}") from err


def load_mask(path: str | Path) -> RegionMask:
    path = Path(path)
    if path.suffix.lower() not in _MASK_SUFFIXES:
        raise InputError(f"unsupported mask file type: {path.suffix or path.name}")
    try:
        return decode_mask(path.read_bytes())
    except OSError as err:
        raise InputError(f"cannot read mask {path}: {err}") from err


def encode_png(img: RasterImage) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(img.pixels, mode="RGBA").save(buf, format="PNG")
    return buf.getvalue()


def save_image(img: RasterImage, path: str | Path) -> None:
    """Write PNG (RGBA) or binary PPM (RGB, alpha dropped) based on suffix."""
    path = Path(path)
    suffix = path.suffix.lower()
    try:
        if suffix == ".png":
            Image.fromarray(img.pixels, mode="RGBA").save(path, format="PNG")
        elif suffix == ".ppm":
            Image.fromarray(img.pixels[..., :3], mode="RGB").save(path, format="PPM")
        else:
            raise InputError(f"unsupported output file type: {suffix or path.name}")
    except OSError as err:
        raise InputError(f"cannot write image {path}: {err}") from err
