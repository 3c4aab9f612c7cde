/**
 * Landmark sources. Live capture uses in-browser pretrained hand/pose models
 * loaded at runtime; no detector for bow/string boxes exists in the browser,
 * so live mode covers wrist and elbow feedback only. Box geometry appears in
 * replay mode, where recorded packets already carry it.
 */

import type { CapturedLandmarks, Point2, PoseTriplet } from "./protocol.js";

export interface LandmarkSource {
  /** Landmarks for the current video frame, or empty when nothing detected. */
  capture(video: HTMLVideoElement, tMs: number): Promise<CapturedLandmarks>;
  close(): void;
}

/** Indices of the bowing-arm joints in the 33-point full-body layout. */
const RIGHT_SHOULDER = 12;
const RIGHT_ELBOW = 14;
const RIGHT_WRIST = 16;

interface TasksVisionLike {
  FilesetResolver: { forVisionTasks(base: string): Promise<unknown> };
  HandLandmarker: { createFromOptions(vision: unknown, options: unknown): Promise<any> };
  PoseLandmarker: { createFromOptions(vision: unknown, options: unknown): Promise<any> };
}

const WASM_BASE = "https://cdn.jsdelivr.net/npm/@mediapipe/tasks-vision@0.10.14/wasm";
const HAND_MODEL =
  "https://storage.googleapis.com/mediapipe-models/hand_landmarker/hand_landmarker/float16/1/hand_landmarker.task";
const POSE_MODEL =
  "https://storage.googleapis.com/mediapipe-models/pose_landmarker/pose_landmarker_lite/float16/1/pose_landmarker_lite.task";

/** Webcam source backed by runtime-loaded landmark models. */
export class BrowserLandmarkSource implements LandmarkSource {
  private constructor(
    private readonly hands: any,
    private readonly pose: any,
  ) {}

  static async create(): Promise<BrowserLandmarkSource> {
    const specifier = "@mediapipe/tasks-vision";
    let vision: TasksVisionLike;
    try {
      vision = (await import(/* @vite-ignore */ specifier)) as TasksVisionLike;
    } catch (err) {
      throw new Error(`landmark models unavailable: ${String(err)}`);
    }
    const fileset = await vision.FilesetResolver.forVisionTasks(WASM_BASE);
    const hands = await vision.HandLandmarker.createFromOptions(fileset, {
      baseOptions: { modelAssetPath: HAND_MODEL },
      runningMode: "VIDEO",
      numHands: 1,
    });
    const pose = await vision.PoseLandmarker.createFromOptions(fileset, {
      baseOptions: { modelAssetPath: POSE_MODEL },
      runningMode: "VIDEO",
      numPoses: 1,
    });
    return new BrowserLandmarkSource(hands, pose);
  }

  async capture(video: HTMLVideoElement, tMs: number): Promise<CapturedLandmarks> {
    const out: CapturedLandmarks = {};
    const handResult = this.hands.detectForVideo(video, tMs);
    if (handResult.landmarks?.length) {
      out.hand = handResult.landmarks[0].map((p: { x: number; y: number }): Point2 => [p.x, p.y]);
    }
    const poseResult = this.pose.detectForVideo(video, tMs);
    const body = poseResult.landmarks?.[0];
    if (body && body.length > RIGHT_WRIST) {
      const joint = (i: number): [number, number, number] => [body[i].x, body[i].y, body[i].z ?? 0];
      out.pose = {
        shoulder: joint(RIGHT_SHOULDER),
        elbow: joint(RIGHT_ELBOW),
        wrist: joint(RIGHT_WRIST),
      } satisfies PoseTriplet;
    }
    return out;
  }

  close(): void {
    this.hands.close?.();
    this.pose.close?.();
  }
}

/** Deterministic source for tests and demos: yields pre-scripted captures. */
export class ScriptedLandmarkSource implements LandmarkSource {
  private index = 0;

  constructor(private readonly frames: CapturedLandmarks[]) {}

  async capture(): Promise<CapturedLandmarks> {
    const frame = this.frames[Math.min(this.index, this.frames.length - 1)] ?? {};
    this.index += 1;
    return frame;
  }

  close(): void {}
}
