/** DOM wiring: canvas stack, brush input, parameter controls, job loop. */

import { ApiError, ServiceClient, type InpaintParams } from "./api";
import {
  ALPHA_LADDER,
  PATCH_SIZES,
  canCommit,
  canRun,
  controlsEnabled,
  initialEditorState,
  runAndPoll,
  type EditorState,
} from "./editor";
import { MaskModel, applyStroke, maskOverlayRgba, type Stroke } from "./mask";

const apiBase =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8000";
const client = new ServiceClient(apiBase);

let state: EditorState = initialEditorState();
let mask: MaskModel | null = null;
let currentStroke: Stroke | null = null;

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

const imageCanvas = $<HTMLCanvasElement>("image-canvas");
const overlayCanvas = $<HTMLCanvasElement>("overlay-canvas");
const fileInput = $<HTMLInputElement>("file-input");
const brushSize = $<HTMLInputElement>("brush-size");
const eraserToggle = $<HTMLInputElement>("eraser-toggle");
const alphaSelect = $<HTMLSelectElement>("alpha-select");
const alphaCustom = $<HTMLInputElement>("alpha-custom");
const patchSelect = $<HTMLSelectElement>("patch-select");
const patchCustom = $<HTMLInputElement>("patch-custom");
const kernelSelect = $<HTMLSelectElement>("kernel-select");
const applyMaskBtn = $<HTMLButtonElement>("apply-mask");
const clearMaskBtn = $<HTMLButtonElement>("clear-mask");
const runBtn = $<HTMLButtonElement>("run");
const commitBtn = $<HTMLButtonElement>("commit");
const discardBtn = $<HTMLButtonElement>("discard");
const undoBtn = $<HTMLButtonElement>("undo");
const progressBar = $<HTMLProgressElement>("progress-bar");
const statusLine = $<HTMLSpanElement>("status-line");
const toast = $<HTMLDivElement>("toast");

for (const alpha of ALPHA_LADDER) {
  const opt = document.createElement("option");
  opt.value = String(alpha);
  opt.textContent = String(alpha);
  alphaSelect.appendChild(opt);
}
for (const p of PATCH_SIZES) {
  const opt = document.createElement("option");
  opt.value = String(p);
  opt.textContent = `${p}x${p}`;
  patchSelect.appendChild(opt);
}

function showToast(message: string): void {
  toast.textContent = message;
  toast.classList.add("visible");
  setTimeout(() => toast.classList.remove("visible"), 4000);
}

function setStatus(text: string): void {
  statusLine.textContent = text;
}

function refreshControls(): void {
  const enabled = controlsEnabled(state);
  for (const el of [
    fileInput, brushSize, eraserToggle, alphaSelect, alphaCustom,
    patchSelect, patchCustom, kernelSelect, applyMaskBtn, clearMaskBtn,
  ]) {
    (el as HTMLInputElement).disabled = !enabled;
  }
  runBtn.disabled = !canRun(state);
  commitBtn.disabled = !canCommit(state);
  discardBtn.disabled = !canCommit(state);
  undoBtn.disabled = !enabled || state.sessionId === null;
}

function redrawOverlay(): void {
  if (!mask) return;
  const ctx = overlayCanvas.getContext("2d")!;
  ctx.clearRect(0, 0, overlayCanvas.width, overlayCanvas.height);
  const data = new ImageData(maskOverlayRgba(mask), mask.width, mask.height);
  ctx.putImageData(data, 0, 0);
}

async function drawPng(bytes: ArrayBuffer): Promise<void> {
  const bitmap = await createImageBitmap(new Blob([bytes], { type: "image/png" }));
  imageCanvas.width = overlayCanvas.width = bitmap.width;
  imageCanvas.height = overlayCanvas.height = bitmap.height;
  imageCanvas.getContext("2d")!.drawImage(bitmap, 0, 0);
}

function readParams(): InpaintParams {
  const alphaRaw = alphaCustom.value.trim() || alphaSelect.value;
  const patchRaw = patchCustom.value.trim() || patchSelect.value;
  return {
    alpha: alphaRaw === "full" ? "full" : Number(alphaRaw),
    patchSize: Number(patchRaw),
    kernel: kernelSelect.value as InpaintParams["kernel"],
  };
}

function canvasPoint(ev: PointerEvent): [number, number] {
  const rect = overlayCanvas.getBoundingClientRect();
  return [
    ((ev.clientX - rect.left) / rect.width) * overlayCanvas.width,
    ((ev.clientY - rect.top) / rect.height) * overlayCanvas.height,
  ];
}

overlayCanvas.addEventListener("pointerdown", (ev) => {
  if (!mask || !controlsEnabled(state)) return;
  overlayCanvas.setPointerCapture(ev.pointerId);
  currentStroke = {
    points: [canvasPoint(ev)],
    radius: Number(brushSize.value),
    erase: eraserToggle.checked,
  };
  applyStroke(mask, currentStroke);
  redrawOverlay();
});

overlayCanvas.addEventListener("pointermove", (ev) => {
  if (!mask || !currentStroke) return;
  const point = canvasPoint(ev);
  const segment: Stroke = {
    points: [currentStroke.points[currentStroke.points.length - 1], point],
    radius: currentStroke.radius,
    erase: currentStroke.erase,
  };
  currentStroke.points.push(point);
  applyStroke(mask, segment);
  redrawOverlay();
});

overlayCanvas.addEventListener("pointerup", () => {
  if (currentStroke) state.strokes.push(currentStroke);
  currentStroke = null;
});

fileInput.addEventListener("change", async () => {
  const file = fileInput.files?.[0];
  if (!file) return;
  try {
    const info = await client.createSession(file);
    state = { ...initialEditorState(), sessionId: info.id };
    state.imageWidth = info.width;
    state.imageHeight = info.height;
    mask = new MaskModel(info.width, info.height);
    await drawPng(await client.getPreview(info.id));
    redrawOverlay();
    setStatus(`session ${info.id.slice(0, 8)} (${info.width}x${info.height})`);
  } catch (err) {
    showToast(err instanceof ApiError ? `${err.status}: ${err.message}` : String(err));
  }
  refreshControls();
});

applyMaskBtn.addEventListener("click", async () => {
  if (!mask || !state.sessionId) return;
  try {
    // Erased pixels cannot be expressed as strokes, so send the rasterized
    // mask as a PNG whenever the eraser touched it.
    const erased = state.strokes.some((s) => s.erase);
    const summary = erased
      ? await client.setMaskPng(state.sessionId, await maskAsPng(mask))
      : await client.setMaskStrokes(
          state.sessionId,
          state.strokes.map(({ points, radius }) => ({ points, radius })),
        );
    state.maskApplied = true;
    state.jobState = "idle";
    setStatus(`mask applied: ${summary.objectPixels} px`);
  } catch (err) {
    showToast(err instanceof ApiError ? `${err.status}: ${err.message}` : String(err));
  }
  refreshControls();
});

async function maskAsPng(model: MaskModel): Promise<Blob> {
  const canvas = document.createElement("canvas");
  canvas.width = model.width;
  canvas.height = model.height;
  const ctx = canvas.getContext("2d")!;
  const rgba = new Uint8ClampedArray(model.width * model.height * 4);
  for (let i = 0; i < model.data.length; i++) {
    const v = model.data[i] ? 255 : 0;
    rgba[i * 4] = rgba[i * 4 + 1] = rgba[i * 4 + 2] = v;
    rgba[i * 4 + 3] = 255;
  }
  ctx.putImageData(new ImageData(rgba, model.width, model.height), 0, 0);
  return new Promise((resolve) => canvas.toBlob((b) => resolve(b!), "image/png"));
}

clearMaskBtn.addEventListener("click", () => {
  mask?.clear();
  state.strokes = [];
  state.maskApplied = false;
  redrawOverlay();
  refreshControls();
});

runBtn.addEventListener("click", async () => {
  if (!state.sessionId) return;
  state.params = readParams();
  state.jobState = "running";
  refreshControls();
  try {
    const final = await runAndPoll(client, state.sessionId, state.params, {
      onProgress: (p) => {
        progressBar.value = p.fractionFilled;
        setStatus(
          `${p.state}: iteration ${p.iteration}/${p.estimateTotalIterations} ` +
            `(${Math.round(p.fractionFilled * 100)}%)`,
        );
      },
      onPreview: (png) => void drawPng(png),
    });
    state.jobState = final.state === "done" ? "done" : "failed";
    if (final.state === "done") {
      await drawPng(await client.getResult(state.sessionId));
      setStatus("done: commit to keep the result, discard to repaint");
    } else {
      showToast(`job failed: ${final.error ?? "unknown"}`);
    }
  } catch (err) {
    state.jobState = "failed";
    showToast(err instanceof ApiError ? `${err.status}: ${err.message}` : String(err));
  }
  refreshControls();
});

commitBtn.addEventListener("click", async () => {
  if (!state.sessionId) return;
  try {
    await client.commit(state.sessionId);
    state.jobState = "idle";
    state.maskApplied = false;
    state.strokes = [];
    mask?.clear();
    await drawPng(await client.getPreview(state.sessionId));
    redrawOverlay();
    setStatus("committed: paint the next mask");
  } catch (err) {
    showToast(err instanceof ApiError ? `${err.status}: ${err.message}` : String(err));
  }
  refreshControls();
});

discardBtn.addEventListener("click", async () => {
  if (!state.sessionId) return;
  state.jobState = "idle";
  state.maskApplied = false;
  await drawPng(await client.getPreview(state.sessionId));
  redrawOverlay();
  setStatus("discarded: repaint the mask");
  refreshControls();
});

undoBtn.addEventListener("click", async () => {
  if (!state.sessionId) return;
  try {
    await client.undo(state.sessionId);
    state.jobState = "idle";
    state.maskApplied = false;
    state.strokes = [];
    mask?.clear();
    await drawPng(await client.getPreview(state.sessionId));
    redrawOverlay();
    setStatus("undone: previous base restored");
  } catch (err) {
    showToast(err instanceof ApiError ? `${err.status}: ${err.message}` : String(err));
  }
  refreshControls();
});

refreshControls();
setStatus(`ready — service at ${apiBase} (override with ?api=...)`);
