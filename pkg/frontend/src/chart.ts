import type { Frame } from "./types.js";
import { dutyToPercent } from "./types.js";

// Visual convention matches the bench plots: setpoint dashed orange,
// temperature solid blue, fan duty as a filled green area on a secondary
// 0-100% axis.
const COLORS = {
  temperature: "#2563eb",
  setpoint: "#f97316",
  duty: "rgba(34, 197, 94, 0.35)",
  dutyEdge: "rgba(22, 163, 74, 0.9)",
  grid: "#e5e7eb",
  text: "#6b7280",
};

const MARGIN = { top: 12, right: 44, bottom: 22, left: 48 };

export interface TempRange {
  lo: number;
  hi: number;
}

// Padded deci-degree range covering both plotted temperature series.
export function tempRange(frames: readonly Frame[]): TempRange {
  if (frames.length === 0) return { lo: 180, hi: 420 };
  let lo = Infinity;
  let hi = -Infinity;
  for (const f of frames) {
    lo = Math.min(lo, f.t_curr, f.t_set);
    hi = Math.max(hi, f.t_curr, f.t_set);
  }
  const pad = Math.max(10, Math.round((hi - lo) * 0.1));
  return { lo: lo - pad, hi: hi + pad };
}

export class StripChart {
  private ctx: CanvasRenderingContext2D;

  constructor(private canvas: HTMLCanvasElement) {
    const ctx = canvas.getContext("2d");
    if (ctx === null) throw new Error("canvas 2d context unavailable");
    this.ctx = ctx;
  }

  render(frames: readonly Frame[]): void {
    const { ctx } = this;
    const w = this.canvas.width;
    const h = this.canvas.height;
    ctx.clearRect(0, 0, w, h);

    const plotW = w - MARGIN.left - MARGIN.right;
    const plotH = h - MARGIN.top - MARGIN.bottom;
    if (frames.length < 2) {
      ctx.fillStyle = COLORS.text;
      ctx.font = "13px sans-serif";
      ctx.fillText("waiting for telemetry...", MARGIN.left + 8, MARGIN.top + 20);
      return;
    }

    const first = frames[0]!;
    const last = frames[frames.length - 1]!;
    const span = Math.max(last.t_ms - first.t_ms, 1);
    const range = tempRange(frames);

    const x = (t: number) => MARGIN.left + ((t - first.t_ms) / span) * plotW;
    const yTemp = (deci: number) =>
      MARGIN.top + plotH - ((deci - range.lo) / (range.hi - range.lo)) * plotH;
    const yDuty = (pct: number) => MARGIN.top + plotH - (pct / 100) * plotH;

    // grid + axis labels
    ctx.strokeStyle = COLORS.grid;
    ctx.fillStyle = COLORS.text;
    ctx.font = "11px sans-serif";
    ctx.lineWidth = 1;
    for (let i = 0; i <= 4; i++) {
      const gy = MARGIN.top + (plotH * i) / 4;
      ctx.beginPath();
      ctx.moveTo(MARGIN.left, gy);
      ctx.lineTo(MARGIN.left + plotW, gy);
      ctx.stroke();
      const deci = range.hi - ((range.hi - range.lo) * i) / 4;
      ctx.textAlign = "right";
      ctx.fillText(`${(deci / 10).toFixed(1)}°`, MARGIN.left - 6, gy + 4);
      ctx.textAlign = "left";
      ctx.fillText(`${100 - i * 25}%`, MARGIN.left + plotW + 6, gy + 4);
    }
    ctx.textAlign = "center";
    ctx.fillText(`${((last.t_ms - first.t_ms) / 1000).toFixed(0)} s window`, w / 2, h - 6);

    // duty: filled area against the right axis
    ctx.beginPath();
    ctx.moveTo(x(first.t_ms), yDuty(0));
    for (const f of frames) ctx.lineTo(x(f.t_ms), yDuty(dutyToPercent(f.duty)));
    ctx.lineTo(x(last.t_ms), yDuty(0));
    ctx.closePath();
    ctx.fillStyle = COLORS.duty;
    ctx.fill();
    ctx.beginPath();
    for (const [i, f] of frames.entries()) {
      const px = x(f.t_ms);
      const py = yDuty(dutyToPercent(f.duty));
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.strokeStyle = COLORS.dutyEdge;
    ctx.stroke();

    // setpoint: dashed
    ctx.beginPath();
    ctx.setLineDash([6, 4]);
    for (const [i, f] of frames.entries()) {
      const px = x(f.t_ms);
      const py = yTemp(f.t_set);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.strokeStyle = COLORS.setpoint;
    ctx.lineWidth = 2;
    ctx.stroke();
    ctx.setLineDash([]);

    // temperature: solid
    ctx.beginPath();
    for (const [i, f] of frames.entries()) {
      const px = x(f.t_ms);
      const py = yTemp(f.t_curr);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    }
    ctx.strokeStyle = COLORS.temperature;
    ctx.lineWidth = 2;
    ctx.stroke();
  }
}
