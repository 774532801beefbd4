import type { Frame } from "./types.js";
import { SETPOINT_MAX_DECI, SETPOINT_MIN_DECI } from "./types.js";

// The banner mirrors the stream with no client-side inference: whatever the
// latest frame says, the banner shows, the moment the frame lands.
export type Banner = "green" | "red" | "disconnected" | "empty";

export interface ConsoleState {
  banner: Banner;
  latest: Frame | null;
  paused: boolean;
  // a setpoint we sent but have not yet seen reflected in t_set
  pendingSetpoint: number | null;
  connected: boolean;
}

export function initialState(): ConsoleState {
  return { banner: "empty", latest: null, paused: false, pendingSetpoint: null, connected: false };
}

export function applyFrame(state: ConsoleState, frame: Frame): ConsoleState {
  const pending =
    state.pendingSetpoint !== null && frame.t_set === state.pendingSetpoint
      ? null
      : state.pendingSetpoint;
  return {
    banner: frame.state === "A" ? "red" : "green",
    latest: frame,
    paused: frame.paused,
    pendingSetpoint: pending,
    connected: true,
  };
}

export function markConnected(state: ConsoleState): ConsoleState {
  return { ...state, connected: true };
}

export function markDisconnected(state: ConsoleState): ConsoleState {
  return { ...state, banner: "disconnected", connected: false };
}

export function markSetpointSent(state: ConsoleState, deci: number): ConsoleState {
  return { ...state, pendingSetpoint: deci };
}

export function markSetpointRejected(state: ConsoleState): ConsoleState {
  return { ...state, pendingSetpoint: null };
}

// Client-side validation mirrors the service's parse-time rules, so bad
// input never leaves the console.
export function validateSetpointDeci(value: number): string | null {
  if (!Number.isInteger(value)) return "setpoint must be a whole deci-degree";
  if (value < SETPOINT_MIN_DECI || value > SETPOINT_MAX_DECI) {
    return `setpoint must be between ${SETPOINT_MIN_DECI / 10} and ${SETPOINT_MAX_DECI / 10} C`;
  }
  return null;
}

export function validateGain(name: string, value: number): string | null {
  if (!Number.isInteger(value)) return `${name} must be an integer`;
  if (value < 0) return `${name} must be >= 0`;
  if (value > 1_000_000) return `${name} is out of range`;
  return null;
}

export function validateGains(kp: number, ki: number, kd: number): string | null {
  return validateGain("kp", kp) ?? validateGain("ki", ki) ?? validateGain("kd", kd);
}
