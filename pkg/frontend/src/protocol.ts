/**
 * Wire protocol spoken with the evaluation service over a WebSocket.
 *
 * The client only ever sends landmarks and box geometry — never pixels.
 * Inbound messages are validated with zod before they reach the UI.
 */

import { z } from "zod";

export type Point2 = [number, number];
export type Point3 = [number, number, number];

export interface OrientedBox {
  cx: number;
  cy: number;
  w: number;
  h: number;
  theta_deg: number;
}

export interface PoseTriplet {
  shoulder: Point3;
  elbow: Point3;
  wrist: Point3;
}

/** One capture frame. All coordinates are normalized image space. */
export interface FramePacket {
  t_ms: number;
  hand?: Point2[];
  pose?: PoseTriplet;
  bow?: OrientedBox;
  strings?: OrientedBox;
}

export interface StartMessage {
  type: "start";
  user: string;
  config?: Record<string, unknown>;
}

export interface FrameMessage {
  type: "frame";
  token: string;
  packet: FramePacket;
}

export interface EndMessage {
  type: "end";
  token: string;
}

export type ClientMessage = StartMessage | FrameMessage | EndMessage;

const colorSchema = z.enum(["blue", "orange", "none"]);
export type Color = z.infer<typeof colorSchema>;

const startedSchema = z.object({
  type: z.literal("started"),
  token: z.string().min(1),
});

const instructionSchema = z.object({
  category: z.string(),
  text: z.string(),
});

const frameResultSchema = z.object({
  type: z.literal("frame_result"),
  t_ms: z.number().int().nonnegative(),
  result: z.object({
    t_ms: z.number().int(),
    wrist: z.object({ class: z.string(), probs: z.array(z.number()).nullable() }),
    elbow: z.object({ class: z.string(), probs: z.array(z.number()).nullable() }),
    bow: z.object({
      detected: z.boolean(),
      in_zone: z.boolean(),
      height: z.string(),
      angle: z.string(),
      zone_position: z.number().nullable(),
      deviation_deg: z.number().nullable(),
    }),
    correct: z.object({
      wrist: z.boolean().nullable(),
      elbow: z.boolean().nullable(),
      bow_height: z.boolean().nullable(),
      bow_angle: z.boolean().nullable(),
    }),
  }),
  instructions: z.array(instructionSchema).max(2),
  colors: z.object({
    wrist: colorSchema,
    elbow: colorSchema,
    bow_height: colorSchema,
    bow_angle: colorSchema,
  }),
});

const sectionEntrySchema = z.object({
  count: z.number().int(),
  raw_pct: z.number(),
  normalized_pct: z.number().nullable(),
  representative_t_ms: z.number().int().nullable(),
});

export const summaryBodySchema = z.object({
  total_frames: z.number().int(),
  duration_ms: z.number().int(),
  sections: z.record(z.record(sectionEntrySchema)),
});

const summarySchema = z.object({
  type: z.literal("summary"),
  session_id: z.string(),
  summary: summaryBodySchema,
  latency_ms_p95: z.number().nullable(),
});

const errorSchema = z.object({
  type: z.literal("error"),
  code: z.string(),
  detail: z.string(),
});

const serverMessageSchema = z.discriminatedUnion("type", [
  startedSchema,
  frameResultSchema,
  summarySchema,
  errorSchema,
]);

export type StartedMessage = z.infer<typeof startedSchema>;
export type FrameResultMessage = z.infer<typeof frameResultSchema>;
export type SummaryMessage = z.infer<typeof summarySchema>;
export type ErrorMessage = z.infer<typeof errorSchema>;
export type ServerMessage = z.infer<typeof serverMessageSchema>;
export type Instruction = z.infer<typeof instructionSchema>;
export type SummaryBody = z.infer<typeof summaryBodySchema>;

/** Parse a raw socket payload; returns null for anything malformed. */
export function parseServerMessage(raw: string): ServerMessage | null {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    return null;
  }
  const parsed = serverMessageSchema.safeParse(data);
  return parsed.success ? parsed.data : null;
}

export interface CapturedLandmarks {
  hand?: Point2[];
  pose?: PoseTriplet;
  bow?: OrientedBox;
  strings?: OrientedBox;
}

/**
 * Assemble the outbound packet for one capture. Detectors that produced
 * nothing are simply absent — the engine treats them as undetected.
 */
export function assemblePacket(tMs: number, captured: CapturedLandmarks): FramePacket {
  if (!Number.isInteger(tMs) || tMs < 0) {
    throw new Error(`capture timestamp must be a non-negative integer, got ${tMs}`);
  }
  if (captured.hand !== undefined && captured.hand.length !== 21) {
    throw new Error(`hand must have exactly 21 landmarks, got ${captured.hand.length}`);
  }
  const packet: FramePacket = { t_ms: tMs };
  if (captured.hand) packet.hand = captured.hand;
  if (captured.pose) packet.pose = captured.pose;
  if (captured.bow) packet.bow = captured.bow;
  if (captured.strings) packet.strings = captured.strings;
  return packet;
}
