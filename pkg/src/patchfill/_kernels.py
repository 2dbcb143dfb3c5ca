"""Jitted compute kernels for SSD search and priority evaluation.

All kernels release the GIL so a thread pool gets real multicore scaling.
State codes are literals here (numba-friendly); they mirror raster.PixelState.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_OBJECT = 1  # raster.PixelState.OBJECT


@njit(cache=True, nogil=True)
def naive_search_band(rgb, state, valid, px, py, patch_size, x0, x1, y0, y1):
    """Exhaustive SSD argmin over valid candidate centers in a half-open band.

    Candidates scan in row-major order with strict-less updates, so ties keep
    the smallest (row, column). Offsets are skipped when either pixel falls
    outside the image or the object-patch pixel is still OBJECT.

    Returns (best_ssd, best_y, best_x, element_ops, candidates); best_ssd is
    -1 when the band holds no valid candidate.
    """
    h, w = state.shape
    half = (patch_size - 1) // 2
    best_ssd = np.int64(-1)
    best_x = np.int64(-1)
    best_y = np.int64(-1)
    element_ops = np.int64(0)
    candidates = np.int64(0)
    for qy in range(y0, y1):
        for qx in range(x0, x1):
            if not valid[qy, qx]:
                continue
            ssd = np.int64(0)
            compared = np.int64(0)
            for dy in range(-half, half + 1):
                ty = py + dy
                sy = qy + dy
                if ty < 0 or ty >= h or sy < 0 or sy >= h:
                    continue
                for dx in range(-half, half + 1):
                    tx = px + dx
                    sx = qx + dx
                    if tx < 0 or tx >= w or sx < 0 or sx >= w:
                        continue
                    if state[ty, tx] == _OBJECT:
                        continue
                    dr = np.int64(rgb[ty, tx, 0]) - np.int64(rgb[sy, sx, 0])
                    dg = np.int64(rgb[ty, tx, 1]) - np.int64(rgb[sy, sx, 1])
                    db = np.int64(rgb[ty, tx, 2]) - np.int64(rgb[sy, sx, 2])
                    ssd += dr * dr + dg * dg + db * db
                    compared += 1
            candidates += 1
            element_ops += compared
            if best_ssd < 0 or ssd < best_ssd:
                best_ssd = ssd
                best_x = qx
                best_y = qy
    return best_ssd, best_y, best_x, element_ops, candidates


@njit(cache=True, nogil=True)
def tiled_group_search(
    rgb, state, valid, px, py, patch_size, gox, goy, gdx, gdy, bx1, by1
):
    """One work group: cooperative tile load plus SSD over its candidate block.

    The group owns candidates [gox, gox+gdx) x [goy, goy+gdy) clipped to the
    bounds corner (bx1, by1). A group containing no valid candidate is skipped
    without touching memory. Otherwise the full (P+gdx-1)(P+gdy-1) source tile
    plus the object patch and its labels are staged once (one global read per
    element), and every compared offset costs two tile reads.

    Returns (best_ssd, best_y, best_x, element_ops, candidates, global_reads,
    tile_reads); best_ssd is -1 for skipped groups.
    """
    h, w = state.shape
    half = (patch_size - 1) // 2
    cx1 = min(gox + gdx, bx1)
    cy1 = min(goy + gdy, by1)

    has_valid = False
    for qy in range(goy, cy1):
        for qx in range(gox, cx1):
            if valid[qy, qx]:
                has_valid = True
                break
        if has_valid:
            break
    if not has_valid:
        return np.int64(-1), np.int64(-1), np.int64(-1), np.int64(0), np.int64(0), np.int64(0), np.int64(0)

    tw = patch_size + gdx - 1
    th = patch_size + gdy - 1
    tile = np.zeros((th, tw, 4), np.uint8)
    tile_ok = np.zeros((th, tw), np.bool_)
    ox0 = gox - half
    oy0 = goy - half
    for tyy in range(th):
        iy = oy0 + tyy
        for txx in range(tw):
            ix = ox0 + txx
            if 0 <= iy < h and 0 <= ix < w:
                tile[tyy, txx, 0] = rgb[iy, ix, 0]
                tile[tyy, txx, 1] = rgb[iy, ix, 1]
                tile[tyy, txx, 2] = rgb[iy, ix, 2]
                tile[tyy, txx, 3] = rgb[iy, ix, 3]
                tile_ok[tyy, txx] = True

    patch = np.zeros((patch_size, patch_size, 4), np.uint8)
    label = np.zeros((patch_size, patch_size), np.bool_)
    for dy in range(patch_size):
        ty = py - half + dy
        for dx in range(patch_size):
            tx = px - half + dx
            if 0 <= ty < h and 0 <= tx < w:
                patch[dy, dx, 0] = rgb[ty, tx, 0]
                patch[dy, dx, 1] = rgb[ty, tx, 1]
                patch[dy, dx, 2] = rgb[ty, tx, 2]
                patch[dy, dx, 3] = rgb[ty, tx, 3]
                label[dy, dx] = state[ty, tx] != _OBJECT

    global_reads = np.int64(th * tw + 2 * patch_size * patch_size)
    tile_reads = np.int64(0)
    element_ops = np.int64(0)
    candidates = np.int64(0)
    best_ssd = np.int64(-1)
    best_x = np.int64(-1)
    best_y = np.int64(-1)
    for lj in range(cy1 - goy):
        qy = goy + lj
        for li in range(cx1 - gox):
            qx = gox + li
            if not valid[qy, qx]:
                continue
            ssd = np.int64(0)
            compared = np.int64(0)
            for dy in range(patch_size):
                tyy = lj + dy
                for dx in range(patch_size):
                    if not label[dy, dx]:
                        continue
                    txx = li + dx
                    if not tile_ok[tyy, txx]:
                        continue
                    dr = np.int64(patch[dy, dx, 0]) - np.int64(tile[tyy, txx, 0])
                    dg = np.int64(patch[dy, dx, 1]) - np.int64(tile[tyy, txx, 1])
                    db = np.int64(patch[dy, dx, 2]) - np.int64(tile[tyy, txx, 2])
                    ssd += dr * dr + dg * dg + db * db
                    compared += 1
                    tile_reads += 2
            candidates += 1
            element_ops += compared
            if best_ssd < 0 or ssd < best_ssd:
                best_ssd = ssd
                best_x = qx
                best_y = qy
    return best_ssd, best_y, best_x, element_ops, candidates, global_reads, tile_reads


@njit(cache=True, nogil=True)
def priority_terms(conf, state, gray, ys, xs, patch_size):
    """Confidence and data terms for a batch of fill-front pixels.

    Must stay numerically identical to priority.confidence_term/data_term;
    the scalar functions are the readable reference.
    """
    n = ys.shape[0]
    h, w = state.shape
    half = (patch_size - 1) // 2
    area = float(patch_size * patch_size)
    c_out = np.empty(n, np.float64)
    d_out = np.empty(n, np.float64)
    for i in range(n):
        y = ys[i]
        x = xs[i]

        s = 0.0
        for yy in range(max(0, y - half), min(h, y + half + 1)):
            for xx in range(max(0, x - half), min(w, x + half + 1)):
                if state[yy, xx] != _OBJECT:
                    s += conf[yy, xx]
        c_out[i] = s / area

        gc = float(gray[y, x])
        left_ok = x > 0 and state[y, x - 1] != _OBJECT
        right_ok = x < w - 1 and state[y, x + 1] != _OBJECT
        if left_ok and right_ok:
            gx = (float(gray[y, x + 1]) - float(gray[y, x - 1])) / 2.0
        elif right_ok:
            gx = float(gray[y, x + 1]) - gc
        elif left_ok:
            gx = gc - float(gray[y, x - 1])
        else:
            gx = 0.0
        up_ok = y > 0 and state[y - 1, x] != _OBJECT
        down_ok = y < h - 1 and state[y + 1, x] != _OBJECT
        if up_ok and down_ok:
            gy = (float(gray[y + 1, x]) - float(gray[y - 1, x])) / 2.0
        elif down_ok:
            gy = float(gray[y + 1, x]) - gc
        elif up_ok:
            gy = gc - float(gray[y - 1, x])
        else:
            gy = 0.0

        mc = 1.0 if state[y, x] == _OBJECT else 0.0
        ml = (1.0 if state[y, x - 1] == _OBJECT else 0.0) if x > 0 else mc
        mr = (1.0 if state[y, x + 1] == _OBJECT else 0.0) if x < w - 1 else mc
        mu = (1.0 if state[y - 1, x] == _OBJECT else 0.0) if y > 0 else mc
        md = (1.0 if state[y + 1, x] == _OBJECT else 0.0) if y < h - 1 else mc
        nx = (mr - ml) / 2.0
        ny = (md - mu) / 2.0
        norm = np.sqrt(nx * nx + ny * ny)
        if norm == 0.0:
            d_out[i] = 0.0
        else:
            d_out[i] = abs((-gy) * (nx / norm) + gx * (ny / norm)) / 255.0
    return c_out, d_out
