/** Typed client for the patchfill editing service. */

export interface InpaintParams {
  alpha: number | "full";
  patchSize: number;
  kernel: "naive" | "tiled";
}

export interface Progress {
  state: "idle" | "running" | "done" | "failed";
  fractionFilled: number;
  iteration: number;
  estimateTotalIterations: number;
  params?: InpaintParams;
  error?: string;
}

export interface MaskSummary {
  objectPixels: number;
  bbox: { minX: number; minY: number; maxX: number; maxY: number };
}

export interface SessionInfo {
  id: string;
  width: number;
  height: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function fail(resp: Response): Promise<never> {
  let code = "unknown";
  let message = resp.statusText;
  try {
    const body = await resp.json();
    if (body && typeof body === "object") {
      code = body.code ?? code;
      message = body.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(resp.status, code, message);
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  async createSession(image: Blob | ArrayBuffer | Uint8Array): Promise<SessionInfo> {
    const resp = await fetch(this.url("/sessions"), {
      method: "POST",
      headers: { "content-type": "image/png" },
      body: image as BodyInit,
    });
    if (resp.status !== 201) await fail(resp);
    return resp.json();
  }

  async setMaskStrokes(
    sessionId: string,
    strokes: { points: [number, number][]; radius: number }[],
  ): Promise<MaskSummary> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/mask`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ strokes }),
    });
    if (!resp.ok) await fail(resp);
    return resp.json();
  }

  async setMaskPng(sessionId: string, png: Blob | ArrayBuffer | Uint8Array): Promise<MaskSummary> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/mask`), {
      method: "POST",
      headers: { "content-type": "image/png" },
      body: png as BodyInit,
    });
    if (!resp.ok) await fail(resp);
    return resp.json();
  }

  async startInpaint(sessionId: string, params: InpaintParams): Promise<void> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/inpaint`), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(params),
    });
    if (resp.status !== 202) await fail(resp);
  }

  async getProgress(sessionId: string): Promise<Progress> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/progress`));
    if (!resp.ok) await fail(resp);
    return resp.json();
  }

  async getPreview(sessionId: string): Promise<ArrayBuffer> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/preview`));
    if (!resp.ok) await fail(resp);
    return resp.arrayBuffer();
  }

  async getResult(sessionId: string): Promise<ArrayBuffer> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/result`));
    if (!resp.ok) await fail(resp);
    return resp.arrayBuffer();
  }

  async commit(sessionId: string): Promise<{ width: number; height: number; historyDepth: number }> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/commit`), { method: "POST" });
    if (!resp.ok) await fail(resp);
    return resp.json();
  }

  async undo(sessionId: string): Promise<{ width: number; height: number; historyDepth: number }> {
    const resp = await fetch(this.url(`/sessions/${sessionId}/undo`), { method: "POST" });
    if (!resp.ok) await fail(resp);
    return resp.json();
  }
}
