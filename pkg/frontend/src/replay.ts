/**
 * Replay mode: stream a recorded packet file (one JSON object per line)
 * through the live client, preserving relative frame timing. This is the
 * only mode that exercises bow/string feedback in the browser.
 */

import type { SessionClient } from "./client.js";
import type { FramePacket } from "./protocol.js";

export function parseStreamFile(text: string): FramePacket[] {
  const packets: FramePacket[] = [];
  let last = -1;
  for (const [i, line] of text.split("\n").entries()) {
    if (!line.trim()) continue;
    let raw: unknown;
    try {
      raw = JSON.parse(line);
    } catch {
      throw new Error(`line ${i + 1}: not valid JSON`);
    }
    const packet = raw as FramePacket;
    if (!Number.isInteger(packet.t_ms) || packet.t_ms <= last) {
      throw new Error(`line ${i + 1}: timestamps must be strictly increasing`);
    }
    last = packet.t_ms;
    packets.push(packet);
  }
  return packets;
}

export interface ReplayOptions {
  /** Time multiplier; 0 sends everything as fast as possible. */
  speed?: number;
  sleep?: (ms: number) => Promise<void>;
}

const defaultSleep = (ms: number) => new Promise<void>((r) => setTimeout(r, ms));

export async function replayStream(
  client: SessionClient,
  packets: FramePacket[],
  options: ReplayOptions = {},
): Promise<void> {
  const speed = options.speed ?? 1;
  const sleep = options.sleep ?? defaultSleep;
  let prev: number | null = null;
  for (const packet of packets) {
    if (prev !== null && speed > 0) {
      await sleep((packet.t_ms - prev) / speed);
    }
    prev = packet.t_ms;
    const { t_ms, ...captured } = packet;
    client.sendCapture(t_ms, captured);
  }
  client.end();
}
