/**
 * Editor state machine and the run/poll loop, kept DOM-free for testing.
 */

import type { InpaintParams, Progress, ServiceClient } from "./api";
import { ApiError } from "./api";
import type { Stroke } from "./mask";

export type JobState = "idle" | "running" | "done" | "failed";

export interface EditorState {
  sessionId: string | null;
  imageWidth: number;
  imageHeight: number;
  strokes: Stroke[];
  maskApplied: boolean;
  params: InpaintParams;
  jobState: JobState;
  fractionFilled: number;
  iteration: number;
  estimateTotalIterations: number;
  lastError: string | null;
}

export const ALPHA_LADDER: (number | "full")[] = [0.05, 0.2, 0.5, 1, 2, "full"];
export const PATCH_SIZES = [9, 13, 17];

export function initialEditorState(): EditorState {
  return {
    sessionId: null,
    imageWidth: 0,
    imageHeight: 0,
    strokes: [],
    maskApplied: false,
    params: { alpha: 0.05, patchSize: 9, kernel: "tiled" },
    jobState: "idle",
    fractionFilled: 0,
    iteration: 0,
    estimateTotalIterations: 0,
    lastError: null,
  };
}

/** Everything except the progress view locks while a job runs. */
export function controlsEnabled(state: EditorState): boolean {
  return state.jobState !== "running";
}

export function canRun(state: EditorState): boolean {
  return state.sessionId !== null && state.maskApplied && state.jobState !== "running";
}

export function canCommit(state: EditorState): boolean {
  return state.jobState === "done";
}

const LEGAL_TRANSITIONS = new Set([
  "idle>running",
  "running>done",
  "running>failed",
  "done>idle",
  "failed>idle",
]);

export function applyJobState(state: EditorState, next: JobState): EditorState {
  if (state.jobState !== next && !LEGAL_TRANSITIONS.has(`${state.jobState}>${next}`)) {
    throw new Error(`illegal job transition ${state.jobState} -> ${next}`);
  }
  return { ...state, jobState: next };
}

export interface PollOptions {
  intervalMs: number;
  /** consecutive network failures tolerated before giving up */
  maxRetries: number;
  backoffBaseMs: number;
  sleep?: (ms: number) => Promise<void>;
  onProgress?: (p: Progress) => void;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

/**
 * Poll progress until the job leaves the running state. Network errors retry
 * with exponential backoff; service errors (4xx) are surfaced immediately.
 */
export async function pollUntilSettled(
  client: Pick<ServiceClient, "getProgress">,
  sessionId: string,
  options: PollOptions,
): Promise<Progress> {
  const sleep = options.sleep ?? defaultSleep;
  let failures = 0;
  for (;;) {
    let progress: Progress;
    try {
      progress = await client.getProgress(sessionId);
      failures = 0;
    } catch (err) {
      if (err instanceof ApiError) throw err;
      failures += 1;
      if (failures > options.maxRetries) throw err;
      await sleep(options.backoffBaseMs * 2 ** (failures - 1));
      continue;
    }
    options.onProgress?.(progress);
    if (progress.state === "done" || progress.state === "failed") return progress;
    await sleep(options.intervalMs);
  }
}

export interface RunCallbacks {
  onProgress?: (p: Progress) => void;
  onPreview?: (png: ArrayBuffer) => void;
}

/**
 * Start a job and poll to completion, fetching a preview snapshot after each
 * progress tick so the canvas can swap in intermediate results.
 */
export async function runAndPoll(
  client: ServiceClient,
  sessionId: string,
  params: InpaintParams,
  callbacks: RunCallbacks = {},
  poll: Partial<PollOptions> = {},
): Promise<Progress> {
  await client.startInpaint(sessionId, params);
  let lastIteration = -1;
  const final = await pollUntilSettled(client, sessionId, {
    intervalMs: poll.intervalMs ?? 150,
    maxRetries: poll.maxRetries ?? 5,
    backoffBaseMs: poll.backoffBaseMs ?? 250,
    sleep: poll.sleep,
    onProgress: (p) => {
      callbacks.onProgress?.(p);
      if (callbacks.onPreview && p.state === "running" && p.iteration !== lastIteration) {
        lastIteration = p.iteration;
        client
          .getPreview(sessionId)
          .then((png) => callbacks.onPreview?.(png))
          .catch(() => undefined); // preview swaps are best-effort
      }
    },
  });
  callbacks.onProgress?.(final);
  return final;
}
