/**
 * Brush-mask model: strokes, rasterization, and overlay rendering.
 *
 * The rasterization rule is shared with the server (round brush, inclusive
 * disc dx^2 + dy^2 <= r^2, segments stamped at every Chebyshev step, all
 * coordinates rounded half-up to pixel centers). Any change here must stay
 * bit-identical to the service-side rasterizer.
 */

export interface Stroke {
  points: [number, number][];
  radius: number;
  erase?: boolean;
}

/** 0/1 object mask in row-major order. */
export class MaskModel {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8Array;

  constructor(width: number, height: number) {
    this.width = width;
    this.height = height;
    this.data = new Uint8Array(width * height);
  }

  get(x: number, y: number): boolean {
    return this.data[y * this.width + x] !== 0;
  }

  objectCount(): number {
    let n = 0;
    for (const v of this.data) n += v;
    return n;
  }

  clear(): void {
    this.data.fill(0);
  }
}

function roundHalfUp(v: number): number {
  return Math.floor(v + 0.5);
}

/** floor(a/b + 1/2) in integers, for b > 0; negative a floors correctly. */
function divRoundHalfUp(a: number, b: number): number {
  return Math.floor((2 * a + b) / (2 * b));
}

function stampDisc(mask: MaskModel, cx: number, cy: number, r: number, value: number): void {
  const y0 = Math.max(0, cy - r);
  const y1 = Math.min(mask.height - 1, cy + r);
  const x0 = Math.max(0, cx - r);
  const x1 = Math.min(mask.width - 1, cx + r);
  for (let y = y0; y <= y1; y++) {
    const dy = y - cy;
    for (let x = x0; x <= x1; x++) {
      const dx = x - cx;
      if (dx * dx + dy * dy <= r * r) {
        mask.data[y * mask.width + x] = value;
      }
    }
  }
}

/** Apply one stroke in place; erase strokes clear pixels instead. */
export function applyStroke(mask: MaskModel, stroke: Stroke): void {
  const r = Math.trunc(stroke.radius);
  if (r < 0 || stroke.points.length === 0) return;
  const value = stroke.erase ? 0 : 1;
  const pts = stroke.points.map(
    ([x, y]) => [roundHalfUp(x), roundHalfUp(y)] as [number, number],
  );
  stampDisc(mask, pts[0][0], pts[0][1], r, value);
  for (let i = 1; i < pts.length; i++) {
    const [x0, y0] = pts[i - 1];
    const [x1, y1] = pts[i];
    const dx = x1 - x0;
    const dy = y1 - y0;
    const steps = Math.max(Math.abs(dx), Math.abs(dy));
    for (let s = 1; s <= steps; s++) {
      stampDisc(
        mask,
        x0 + divRoundHalfUp(s * dx, steps),
        y0 + divRoundHalfUp(s * dy, steps),
        r,
        value,
      );
    }
  }
}

export function rasterizeStrokes(strokes: Stroke[], width: number, height: number): MaskModel {
  const mask = new MaskModel(width, height);
  for (const stroke of strokes) applyStroke(mask, stroke);
  return mask;
}

/** Sorted [x, y] list of set pixels (row-major), for tests and payloads. */
export function maskPixels(mask: MaskModel): [number, number][] {
  const out: [number, number][] = [];
  for (let y = 0; y < mask.height; y++) {
    for (let x = 0; x < mask.width; x++) {
      if (mask.get(x, y)) out.push([x, y]);
    }
  }
  return out;
}

export const OVERLAY_COLOR: [number, number, number] = [255, 64, 64];
export const OVERLAY_ALPHA = 128; // mask layer renders at 50% opacity

/** RGBA overlay bytes for drawing the mask over the image. */
export function maskOverlayRgba(mask: MaskModel) {
  const rgba = new Uint8ClampedArray(mask.width * mask.height * 4);
  for (let i = 0; i < mask.data.length; i++) {
    if (mask.data[i]) {
      rgba[i * 4] = OVERLAY_COLOR[0];
      rgba[i * 4 + 1] = OVERLAY_COLOR[1];
      rgba[i * 4 + 2] = OVERLAY_COLOR[2];
      rgba[i * 4 + 3] = OVERLAY_ALPHA;
    }
  }
  return rgba;
}
