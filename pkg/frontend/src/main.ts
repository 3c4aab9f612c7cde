/**
 * Browser entry point: wires the webcam, landmark models, session client,
 * and canvas overlay together. All decision logic lives in the pure modules;
 * this file is DOM plumbing.
 */

import { SessionClient } from "./client.js";
import {
  editSettings,
  flipCamera,
  initialUiState,
  startSession,
  stopSession,
  toggleCamera,
  togglePanel,
  type UiState,
} from "./controls.js";
import { BrowserLandmarkSource, type LandmarkSource } from "./landmarks.js";
import {
  applyDisconnect,
  applyError,
  applyFrameResult,
  applyStatus,
  applySummary,
  initialModel,
  type OverlayModel,
} from "./overlay.js";
import { parseStreamFile, replayStream } from "./replay.js";
import { historyView, summaryView } from "./summary.js";

const SERVICE_URL = `ws://${location.host}/ws`;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function openWebcam(video: HTMLVideoElement, facing: "front" | "rear"): Promise<MediaStream> {
  const stream = await navigator.mediaDevices.getUserMedia({
    video: { facingMode: facing === "front" ? "user" : "environment" },
    audio: false,
  });
  video.srcObject = stream;
  await video.play();
  return stream;
}

async function run(): Promise<void> {
  const video = el<HTMLVideoElement>("webcam");
  const canvas = el<HTMLCanvasElement>("overlay");
  const statusLine = el<HTMLElement>("status");
  const summaryPane = el<HTMLElement>("summary");
  const historyPane = el<HTMLElement>("history");
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas unavailable");

  let ui: UiState = initialUiState("local");
  let model: OverlayModel = initialModel();
  let stream: MediaStream | null = null;
  let source: LandmarkSource | null = null;
  let client: SessionClient | null = null;

  const { drawOverlay } = await import("./render.js");

  function redraw(): void {
    drawOverlay(ctx!, model, {
      width: canvas.width,
      height: canvas.height,
      mirrored: ui.facing === "front",
    });
    statusLine.textContent = model.lastError ? `${model.status} — ${model.lastError}` : model.status;
  }

  function renderSummary(): void {
    if (!model.summary) return;
    summaryPane.innerHTML = summaryView(model.summary.summary)
      .map(
        (section) =>
          `<h3>${section.title}</h3><ul>` +
          section.bars
            .map(
              (bar) =>
                `<li>${bar.className}: ${bar.normalizedLabel ?? bar.rawLabel}` +
                ` (${bar.count} frames)</li>`,
            )
            .join("") +
          "</ul>",
      )
      .join("");
  }

  function makeClient(): SessionClient {
    const config =
      ui.settings.angleToleranceDeg === 10
        ? undefined
        : { bow: { angle_tolerance_deg: ui.settings.angleToleranceDeg } };
    return new SessionClient(
      SERVICE_URL,
      ui.settings.userId,
      {
        onFrame: (packet, message) => {
          model = applyFrameResult(model, packet, message);
          redraw();
        },
        onSummary: (message) => {
          model = applySummary(model, message);
          renderSummary();
          redraw();
        },
        onError: (code, detail) => {
          model = applyError(model, `${code}: ${detail}`);
          redraw();
        },
        onStatus: (status) => {
          model = status === "disconnected" ? applyDisconnect(model) : applyStatus(model, status);
          redraw();
          if (status === "disconnected" && ui.sessionActive) {
            client?.reconnect(); // fresh session, fresh timestamps
          }
        },
      },
      (url) => new WebSocket(url) as never,
      config,
    );
  }

  async function captureLoop(): Promise<void> {
    const origin = performance.now();
    const tick = async (): Promise<void> => {
      if (!ui.sessionActive || !source || !client) return;
      const tMs = Math.round(performance.now() - origin);
      const captured = await source.capture(video, tMs);
      client.sendCapture(tMs, captured);
      requestAnimationFrame(() => void tick());
    };
    await tick();
  }

  el<HTMLButtonElement>("btn-camera").onclick = async () => {
    ui = toggleCamera(ui);
    if (ui.cameraOpen && !stream) {
      stream = await openWebcam(video, ui.facing);
    } else if (!ui.cameraOpen && stream) {
      stream.getTracks().forEach((t) => t.stop());
      stream = null;
    }
  };

  el<HTMLButtonElement>("btn-flip").onclick = async () => {
    ui = flipCamera(ui);
    if (stream) {
      stream.getTracks().forEach((t) => t.stop());
      stream = await openWebcam(video, ui.facing);
    }
    redraw();
  };

  el<HTMLButtonElement>("btn-settings").onclick = () => {
    ui = togglePanel(ui, "settings");
    el<HTMLElement>("settings").hidden = ui.panel !== "settings";
  };

  el<HTMLInputElement>("angle-tolerance").onchange = (event) => {
    ui = editSettings(ui, {
      angleToleranceDeg: Number((event.target as HTMLInputElement).value),
    });
  };

  el<HTMLButtonElement>("btn-history").onclick = async () => {
    ui = togglePanel(ui, "history");
    historyPane.hidden = ui.panel !== "history";
    if (ui.panel === "history") {
      const records = await (await fetch(`/history/${ui.settings.userId}`)).json();
      historyPane.innerHTML = historyView(records)
        .map((h) => `<li>${h.startedAt} — ${h.totalFrames} frames</li>`)
        .join("");
    }
  };

  el<HTMLButtonElement>("btn-start").onclick = async () => {
    const next = startSession(ui);
    if (next === ui) return;
    ui = next;
    client = makeClient();
    client.connect();
    if (ui.settings.mode === "live") {
      // bow/string boxes are not available live; wrist and elbow only
      source = source ?? (await BrowserLandmarkSource.create());
      void captureLoop();
    }
  };

  el<HTMLButtonElement>("btn-stop").onclick = () => {
    ui = stopSession(ui);
    client?.end();
  };

  el<HTMLInputElement>("replay-file").onchange = async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    ui = startSession(editSettings(ui, { mode: "replay" }));
    client = makeClient();
    client.connect();
    const packets = parseStreamFile(await file.text());
    await replayStream(client, packets);
    ui = stopSession(ui);
  };

  redraw();
}

void run();
