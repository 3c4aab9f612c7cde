import { describe, expect, it } from "vitest";

import { assemblePacket, parseServerMessage } from "../src/protocol.js";

const FRAME_RESULT = {
  type: "frame_result",
  t_ms: 33,
  result: {
    t_ms: 33,
    wrist: { class: "normal", probs: [0.9, 0.05, 0.05] },
    elbow: { class: "undetected", probs: null },
    bow: {
      detected: true,
      in_zone: true,
      height: "ok",
      angle: "correct",
      zone_position: 0.4,
      deviation_deg: 3.2,
    },
    correct: { wrist: true, elbow: null, bow_height: true, bow_angle: true },
  },
  instructions: [{ category: "wrist_supinated", text: "Rotate your wrist inward." }],
  colors: { wrist: "blue", elbow: "none", bow_height: "blue", bow_angle: "blue" },
};

describe("parseServerMessage", () => {
  it("accepts every message kind", () => {
    expect(parseServerMessage('{"type":"started","token":"abc"}')?.type).toBe("started");
    expect(parseServerMessage(JSON.stringify(FRAME_RESULT))?.type).toBe("frame_result");
    expect(
      parseServerMessage('{"type":"error","code":"unknown_session","detail":"x"}')?.type,
    ).toBe("error");
  });

  it("rejects malformed payloads", () => {
    expect(parseServerMessage("not json")).toBeNull();
    expect(parseServerMessage('{"type":"mystery"}')).toBeNull();
    expect(parseServerMessage('{"type":"started"}')).toBeNull();
    const badColor = { ...FRAME_RESULT, colors: { ...FRAME_RESULT.colors, wrist: "green" } };
    expect(parseServerMessage(JSON.stringify(badColor))).toBeNull();
  });

  it("rejects more than two instructions", () => {
    const triple = {
      ...FRAME_RESULT,
      instructions: Array(3).fill({ category: "c", text: "t" }),
    };
    expect(parseServerMessage(JSON.stringify(triple))).toBeNull();
  });
});

describe("assemblePacket", () => {
  it("includes only the detections that exist", () => {
    const hand = Array.from({ length: 21 }, (_, i) => [i / 21, 0.5] as [number, number]);
    expect(assemblePacket(5, { hand })).toEqual({ t_ms: 5, hand });
    expect(assemblePacket(5, {})).toEqual({ t_ms: 5 });
  });

  it("rejects bad timestamps and wrong hand cardinality", () => {
    expect(() => assemblePacket(-1, {})).toThrow();
    expect(() => assemblePacket(1.5, {})).toThrow();
    expect(() => assemblePacket(0, { hand: [[0, 0]] })).toThrow(/21/);
  });
});
