import { describe, expect, it } from "vitest";

import {
  applyFrame,
  initialState,
  markDisconnected,
  markSetpointSent,
  validateGains,
  validateSetpointDeci,
} from "../src/state.js";
import { isFrame, type Frame } from "../src/types.js";

function frame(overrides: Partial<Frame> = {}): Frame {
  return {
    t_ms: 0,
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

describe("banner mirroring", () => {
  it("normal frame shows green", () => {
    expect(applyFrame(initialState(), frame()).banner).toBe("green");
  });

  it("alarm frame flips to red on the very frame it arrives", () => {
    let state = applyFrame(initialState(), frame({ t_ms: 0, state: "N" }));
    state = applyFrame(state, frame({ t_ms: 100, state: "A", err: 60 }));
    expect(state.banner).toBe("red");
  });

  it("recovery flips back to green with no latching", () => {
    let state = applyFrame(initialState(), frame({ t_ms: 0, state: "A" }));
    state = applyFrame(state, frame({ t_ms: 100, state: "N" }));
    expect(state.banner).toBe("green");
  });

  it("banner always equals the latest frame's state over a random run", () => {
    let state = initialState();
    for (let i = 0; i < 500; i++) {
      const level = Math.random() < 0.3 ? "A" : "N";
      state = applyFrame(state, frame({ t_ms: i * 100, state: level }));
      expect(state.banner).toBe(level === "A" ? "red" : "green");
    }
  });

  it("disconnect overrides until the next frame", () => {
    let state = applyFrame(initialState(), frame());
    state = markDisconnected(state);
    expect(state.banner).toBe("disconnected");
    state = applyFrame(state, frame({ t_ms: 100 }));
    expect(state.banner).toBe("green");
  });
});

describe("pending setpoint tracking", () => {
  it("pending clears once a frame reflects the new t_set", () => {
    let state = applyFrame(initialState(), frame());
    state = markSetpointSent(state, 300);
    expect(state.pendingSetpoint).toBe(300);
    state = applyFrame(state, frame({ t_ms: 100, t_set: 250 }));
    expect(state.pendingSetpoint).toBe(300); // not yet reflected
    state = applyFrame(state, frame({ t_ms: 200, t_set: 300 }));
    expect(state.pendingSetpoint).toBeNull();
  });
});

describe("client-side validation", () => {
  it("slider bounds mirror the 20.0-40.0 C pot range", () => {
    expect(validateSetpointDeci(200)).toBeNull();
    expect(validateSetpointDeci(400)).toBeNull();
    expect(validateSetpointDeci(199)).toMatch(/between/);
    expect(validateSetpointDeci(401)).toMatch(/between/);
    expect(validateSetpointDeci(250.5)).toMatch(/whole/);
  });

  it("gains must be non-negative integers", () => {
    expect(validateGains(2500, 10, 500)).toBeNull();
    expect(validateGains(-1, 10, 500)).toMatch(/kp/);
    expect(validateGains(2500, -2, 500)).toMatch(/ki/);
    expect(validateGains(2500, 10, 0.5)).toMatch(/kd/);
  });
});

describe("frame validation", () => {
  it("accepts stream frames", () => {
    expect(isFrame(frame())).toBe(true);
  });

  it("rejects malformed objects", () => {
    expect(isFrame({})).toBe(false);
    expect(isFrame(null)).toBe(false);
    expect(isFrame(frame({ state: "X" as never }))).toBe(false);
    expect(isFrame({ ...frame(), duty: "high" })).toBe(false);
  });
});
