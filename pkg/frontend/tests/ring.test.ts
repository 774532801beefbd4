import { describe, expect, it } from "vitest";

import { FrameRing } from "../src/ring.js";
import type { Frame } from "../src/types.js";

function frame(t_ms: number, overrides: Partial<Frame> = {}): Frame {
  return {
    t_ms,
    t_set: 250,
    t_curr: 249,
    err: -1,
    duty: 0,
    light: 2828,
    state: "N",
    fault: 0,
    paused: false,
    ...overrides,
  };
}

describe("FrameRing", () => {
  it("keeps at most capacity frames, dropping the oldest", () => {
    const ring = new FrameRing(3);
    for (const t of [0, 100, 200, 300]) ring.push(frame(t));
    expect(ring.toArray().map((f) => f.t_ms)).toEqual([100, 200, 300]);
  });

  it("excludes paused repeats from the chart window", () => {
    const ring = new FrameRing(10);
    ring.push(frame(0));
    expect(ring.push(frame(0, { paused: true }))).toBe(false);
    expect(ring.push(frame(0, { paused: true }))).toBe(false);
    ring.push(frame(100));
    expect(ring.toArray().map((f) => f.t_ms)).toEqual([0, 100]);
  });

  it("enforces strictly increasing timestamps", () => {
    const ring = new FrameRing(10);
    ring.push(frame(100));
    expect(ring.push(frame(100))).toBe(false);
    expect(ring.push(frame(50))).toBe(false);
    const times = ring.toArray().map((f) => f.t_ms);
    expect(times).toEqual([100]);
  });

  it("latest returns the newest live frame", () => {
    const ring = new FrameRing(10);
    ring.push(frame(0));
    ring.push(frame(100, { duty: 40000 }));
    expect(ring.latest()?.duty).toBe(40000);
  });

  it("clear empties the window", () => {
    const ring = new FrameRing(10);
    ring.push(frame(0));
    ring.clear();
    expect(ring.length).toBe(0);
  });
});
