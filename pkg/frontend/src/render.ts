/**
 * Canvas overlay drawing. Pure in the sense that every draw is a function of
 * (model, viewport); tests feed a recording context instead of a real 2D one.
 *
 * Mirroring for a front camera is applied here, to the displayed positions
 * only — packets on the wire stay unmirrored.
 */

import type { OverlayModel } from "./overlay.js";
import type { Color, OrientedBox, Point2 } from "./protocol.js";

/** Subset of CanvasRenderingContext2D the overlay uses. */
export interface DrawContext {
  clearRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  fillStyle: string | CanvasGradient | CanvasPattern;
  lineWidth: number;
  font: string;
}

export interface Viewport {
  width: number;
  height: number;
  mirrored: boolean;
}

export const COLOR_HEX: Record<Exclude<Color, "none">, string> = {
  blue: "#2d7ff9",
  orange: "#f9862d",
};

/** Hand landmark connectivity: wrist to finger chains of 4 nodes each. */
const HAND_EDGES: Array<[number, number]> = [
  [0, 1], [1, 2], [2, 3], [3, 4],
  [0, 5], [5, 6], [6, 7], [7, 8],
  [0, 9], [9, 10], [10, 11], [11, 12],
  [0, 13], [13, 14], [14, 15], [15, 16],
  [0, 17], [17, 18], [18, 19], [19, 20],
];

export function toPixels(p: Point2, view: Viewport): Point2 {
  const x = view.mirrored ? 1 - p[0] : p[0];
  return [x * view.width, p[1] * view.height];
}

function strokeColor(color: Color): string | null {
  return color === "none" ? null : COLOR_HEX[color];
}

function drawPolyline(ctx: DrawContext, points: Point2[], close = false): void {
  ctx.beginPath();
  ctx.moveTo(points[0][0], points[0][1]);
  for (const [x, y] of points.slice(1)) ctx.lineTo(x, y);
  if (close) ctx.lineTo(points[0][0], points[0][1]);
  ctx.stroke();
}

export function boxCorners(box: OrientedBox): Point2[] {
  const rad = (box.theta_deg * Math.PI) / 180;
  const [c, s] = [Math.cos(rad), Math.sin(rad)];
  const [hw, hh] = [box.w / 2, box.h / 2];
  return ([[-hw, -hh], [hw, -hh], [hw, hh], [-hw, hh]] as Point2[]).map(([u, v]) => [
    box.cx + u * c - v * s,
    box.cy + u * s + v * c,
  ]);
}

export function drawOverlay(ctx: DrawContext, model: OverlayModel, view: Viewport): void {
  ctx.clearRect(0, 0, view.width, view.height);
  const packet = model.packet;
  if (packet) {
    const handColor = strokeColor(model.colors.wrist);
    if (packet.hand && handColor) {
      ctx.strokeStyle = handColor;
      ctx.fillStyle = handColor;
      ctx.lineWidth = 2;
      const pts = packet.hand.map((p) => toPixels(p, view));
      for (const [a, b] of HAND_EDGES) drawPolyline(ctx, [pts[a], pts[b]]);
      for (const [x, y] of pts) {
        ctx.beginPath();
        ctx.arc(x, y, 3, 0, 2 * Math.PI);
        ctx.fill();
      }
    }
    const armColor = strokeColor(model.colors.elbow);
    if (packet.pose && armColor) {
      ctx.strokeStyle = armColor;
      ctx.lineWidth = 3;
      const arm = [packet.pose.shoulder, packet.pose.elbow, packet.pose.wrist].map(
        ([x, y]) => toPixels([x, y], view),
      );
      drawPolyline(ctx, arm);
    }
    const bowColor = strokeColor(model.colors.bow_angle) ?? strokeColor(model.colors.bow_height);
    if (packet.bow && bowColor) {
      ctx.strokeStyle = bowColor;
      ctx.lineWidth = 2;
      drawPolyline(ctx, boxCorners(packet.bow).map((p) => toPixels(p, view)), true);
    }
    if (packet.strings) {
      ctx.strokeStyle = "#888888";
      ctx.lineWidth = 1;
      drawPolyline(ctx, boxCorners(packet.strings).map((p) => toPixels(p, view)), true);
    }
  }

  ctx.font = "16px sans-serif";
  ctx.fillStyle = "#ffffff";
  model.instructions.forEach((instruction, i) => {
    ctx.fillText(instruction.text, 12, 24 + i * 24);
  });
  if (model.status !== "live") {
    ctx.fillText(model.status, 12, view.height - 12);
  }
}
