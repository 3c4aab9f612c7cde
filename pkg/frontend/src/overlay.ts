/**
 * Overlay view model: a plain snapshot of everything the canvas needs.
 * Reducers are pure — rendering is a function of the latest model only.
 */

import type {
  Color,
  FramePacket,
  FrameResultMessage,
  Instruction,
  SummaryMessage,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "live" | "ended" | "disconnected";

export interface OverlayColors {
  wrist: Color;
  elbow: Color;
  bow_height: Color;
  bow_angle: Color;
}

export interface OverlayModel {
  status: ConnectionStatus;
  /** The packet whose response we are displaying; source of landmark positions. */
  packet: FramePacket | null;
  colors: OverlayColors;
  instructions: Instruction[];
  summary: SummaryMessage | null;
  lastError: string | null;
}

const HIDDEN: OverlayColors = {
  wrist: "none",
  elbow: "none",
  bow_height: "none",
  bow_angle: "none",
};

export function initialModel(): OverlayModel {
  return {
    status: "connecting",
    packet: null,
    colors: HIDDEN,
    instructions: [],
    summary: null,
    lastError: null,
  };
}

export function applyStatus(model: OverlayModel, status: ConnectionStatus): OverlayModel {
  return { ...model, status };
}

/** Pair a frame response with the packet it was computed from. */
export function applyFrameResult(
  model: OverlayModel,
  packet: FramePacket,
  message: FrameResultMessage,
): OverlayModel {
  return {
    ...model,
    status: "live",
    packet,
    colors: message.colors,
    instructions: message.instructions.slice(0, 2),
    lastError: null,
  };
}

export function applySummary(model: OverlayModel, message: SummaryMessage): OverlayModel {
  return { ...model, status: "ended", summary: message, colors: HIDDEN, instructions: [] };
}

export function applyError(model: OverlayModel, detail: string): OverlayModel {
  return { ...model, lastError: detail };
}

export function applyDisconnect(model: OverlayModel): OverlayModel {
  return { ...model, status: "disconnected", colors: HIDDEN, instructions: [] };
}
