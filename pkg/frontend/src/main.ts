import { StripChart } from "./chart.js";
import { CommandClient, StreamClient } from "./client.js";
import { FrameRing } from "./ring.js";
import {
  applyFrame,
  initialState,
  markDisconnected,
  markSetpointRejected,
  markSetpointSent,
  validateGains,
  validateSetpointDeci,
} from "./state.js";
import { deciToDegrees, dutyToPercent } from "./types.js";

const baseUrl = window.location.origin;

function byId<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing #${id}`);
  return el as T;
}

const banner = byId<HTMLDivElement>("banner");
const bannerText = byId<HTMLSpanElement>("banner-text");
const buzzerIcon = byId<HTMLSpanElement>("buzzer");
const readout = byId<HTMLDivElement>("readout");
const slider = byId<HTMLInputElement>("setpoint");
const sliderLabel = byId<HTMLSpanElement>("setpoint-label");
const sliderError = byId<HTMLSpanElement>("setpoint-error");
const disturbToggle = byId<HTMLInputElement>("disturbance");
const pauseBtn = byId<HTMLButtonElement>("pause");
const resetBtn = byId<HTMLButtonElement>("reset");
const gainsForm = byId<HTMLFormElement>("gains-form");
const gainsError = byId<HTMLSpanElement>("gains-error");
const canvas = byId<HTMLCanvasElement>("chart");

const ring = new FrameRing(600); // 60 s rolling window
const chart = new StripChart(canvas);
const commands = new CommandClient(baseUrl);
let state = initialState();

function renderBanner(): void {
  banner.dataset.state = state.banner;
  buzzerIcon.hidden = state.banner !== "red";
  bannerText.textContent = {
    green: "NORMAL",
    red: "ALARM: error beyond ±5.0 °C",
    disconnected: "DISCONNECTED, retrying…",
    empty: "waiting for stream…",
  }[state.banner];
}

function renderReadout(): void {
  const f = state.latest;
  if (f === null) {
    readout.textContent = "";
    return;
  }
  const flags = [f.paused ? "paused" : "", f.fault ? "ADC fault" : ""]
    .filter(Boolean)
    .join(", ");
  readout.textContent =
    `t=${(f.t_ms / 1000).toFixed(1)}s  temp ${deciToDegrees(f.t_curr)}°C  ` +
    `set ${deciToDegrees(f.t_set)}°C  err ${deciToDegrees(f.err)}°C  ` +
    `fan ${dutyToPercent(f.duty).toFixed(1)}%  light ${f.light}` +
    (flags ? `  [${flags}]` : "");
  sliderLabel.textContent = `${deciToDegrees(Number(slider.value))} °C` +
    (state.pendingSetpoint !== null ? " (pending)" : "");
  pauseBtn.textContent = state.paused ? "Resume" : "Pause";
}

const stream = new StreamClient(baseUrl, {
  onFrame(frame) {
    state = applyFrame(state, frame);
    ring.push(frame);
    renderBanner();
    renderReadout();
    chart.render(ring.toArray());
  },
  onDisconnect() {
    state = markDisconnected(state);
    renderBanner(); // chart stays frozen on the last window
  },
});

slider.addEventListener("change", () => {
  const value = Number(slider.value);
  const problem = validateSetpointDeci(value);
  if (problem !== null) {
    sliderError.textContent = problem;
    return;
  }
  sliderError.textContent = "";
  state = markSetpointSent(state, value);
  renderReadout();
  void commands.setSetpointDeci(value).then((reply) => {
    if (!reply.ok) {
      sliderError.textContent = reply.error ?? "rejected";
      state = markSetpointRejected(state);
      if (state.latest !== null) slider.value = String(state.latest.t_set);
      renderReadout();
    }
  });
});

slider.addEventListener("input", () => {
  sliderLabel.textContent = `${deciToDegrees(Number(slider.value))} °C`;
});

disturbToggle.addEventListener("change", () => {
  void commands.setDisturbance(disturbToggle.checked);
});

pauseBtn.addEventListener("click", () => {
  void (state.paused ? commands.resume() : commands.pause());
});

resetBtn.addEventListener("click", () => {
  void commands.reset();
});

gainsForm.addEventListener("submit", (event) => {
  event.preventDefault();
  const kp = Number(byId<HTMLInputElement>("kp").value);
  const ki = Number(byId<HTMLInputElement>("ki").value);
  const kd = Number(byId<HTMLInputElement>("kd").value);
  const problem = validateGains(kp, ki, kd);
  if (problem !== null) {
    gainsError.textContent = problem;
    return;
  }
  gainsError.textContent = "";
  void commands.setGains(kp, ki, kd).then((reply) => {
    if (!reply.ok) gainsError.textContent = reply.error ?? "rejected";
  });
});

async function init(): Promise<void> {
  try {
    const snap = await (await fetch(`${baseUrl}/snapshot`)).json();
    const gains = snap?.config?.gains;
    if (gains) {
      byId<HTMLInputElement>("kp").value = String(gains.kp);
      byId<HTMLInputElement>("ki").value = String(gains.ki);
      byId<HTMLInputElement>("kd").value = String(gains.kd);
    }
    const setpoint = snap?.config?.setpoint_deci;
    if (typeof setpoint === "number") {
      slider.value = String(setpoint);
      sliderLabel.textContent = `${deciToDegrees(setpoint)} °C`;
    }
  } catch {
    // snapshot is a convenience; the stream will still drive the UI
  }
  renderBanner();
  stream.start();
}

void init();
