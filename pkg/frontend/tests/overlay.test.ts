import { describe, expect, it } from "vitest";

import {
  applyDisconnect,
  applyError,
  applyFrameResult,
  applySummary,
  initialModel,
} from "../src/overlay.js";
import type { FrameResultMessage, SummaryMessage } from "../src/protocol.js";

function frameResult(colors: Partial<FrameResultMessage["colors"]> = {}): FrameResultMessage {
  return {
    type: "frame_result",
    t_ms: 33,
    result: {
      t_ms: 33,
      wrist: { class: "normal", probs: null },
      elbow: { class: "normal", probs: null },
      bow: {
        detected: true,
        in_zone: true,
        height: "ok",
        angle: "correct",
        zone_position: 0.5,
        deviation_deg: 0,
      },
      correct: { wrist: true, elbow: true, bow_height: true, bow_angle: true },
    },
    instructions: [],
    colors: { wrist: "blue", elbow: "blue", bow_height: "blue", bow_angle: "blue", ...colors },
  };
}

const SUMMARY: SummaryMessage = {
  type: "summary",
  session_id: "s",
  summary: { total_frames: 10, duration_ms: 300, sections: {} },
  latency_ms_p95: 1,
};

describe("overlay model", () => {
  it("mirrors server colors verbatim", () => {
    const model = applyFrameResult(initialModel(), { t_ms: 33 }, frameResult({ wrist: "orange" }));
    expect(model.colors).toEqual({
      wrist: "orange",
      elbow: "blue",
      bow_height: "blue",
      bow_angle: "blue",
    });
    expect(model.status).toBe("live");
  });

  it("caps instruction banners at two", () => {
    const message = frameResult();
    message.instructions = [
      { category: "a", text: "1" },
      { category: "b", text: "2" },
    ];
    const model = applyFrameResult(initialModel(), { t_ms: 33 }, message);
    expect(model.instructions).toHaveLength(2);
  });

  it("hides colors and instructions once the session ends", () => {
    let model = applyFrameResult(initialModel(), { t_ms: 33 }, frameResult());
    model = applySummary(model, SUMMARY);
    expect(model.status).toBe("ended");
    expect(Object.values(model.colors)).toEqual(["none", "none", "none", "none"]);
    expect(model.instructions).toEqual([]);
    expect(model.summary).toBe(SUMMARY);
  });

  it("keeps the last packet for rendering but clears colors on disconnect", () => {
    let model = applyFrameResult(initialModel(), { t_ms: 33 }, frameResult());
    model = applyDisconnect(model);
    expect(model.status).toBe("disconnected");
    expect(model.packet?.t_ms).toBe(33);
    expect(Object.values(model.colors)).toEqual(["none", "none", "none", "none"]);
  });

  it("errors do not clobber the live frame", () => {
    let model = applyFrameResult(initialModel(), { t_ms: 33 }, frameResult());
    model = applyError(model, "empty_session: no frames");
    expect(model.lastError).toContain("empty_session");
    expect(model.packet?.t_ms).toBe(33);
  });
});
