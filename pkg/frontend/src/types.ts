// Telemetry frame as streamed by the service: one JSON object per line.
export interface Frame {
  t_ms: number;
  t_set: number; // deci-degrees C
  t_curr: number; // deci-degrees C
  err: number; // deci-degrees C
  duty: number; // PWM counts, 0..40000
  light: number; // raw ADC code
  state: "N" | "A";
  fault: 0 | 1;
  paused: boolean;
}

export const PWM_MAX = 40000;
export const SETPOINT_MIN_DECI = 200;
export const SETPOINT_MAX_DECI = 400;

export function isFrame(value: unknown): value is Frame {
  if (typeof value !== "object" || value === null) return false;
  const v = value as Record<string, unknown>;
  return (
    typeof v.t_ms === "number" &&
    typeof v.t_set === "number" &&
    typeof v.t_curr === "number" &&
    typeof v.err === "number" &&
    typeof v.duty === "number" &&
    typeof v.light === "number" &&
    (v.state === "N" || v.state === "A") &&
    (v.fault === 0 || v.fault === 1) &&
    typeof v.paused === "boolean"
  );
}

export function deciToDegrees(deci: number): string {
  return (deci / 10).toFixed(1);
}

export function dutyToPercent(duty: number): number {
  return (duty / PWM_MAX) * 100;
}
