import { NdjsonBuffer } from "./ndjson.js";
import type { Frame } from "./types.js";
import { isFrame } from "./types.js";

export interface StreamCallbacks {
  onFrame: (frame: Frame) => void;
  onConnect?: () => void;
  onDisconnect?: () => void;
}

// Consumes GET /stream (chunked NDJSON) and reconnects with a short backoff
// when the connection drops. Closing the console just aborts the fetch; the
// loop on the server side never notices beyond dropping a subscriber.
export class StreamClient {
  private controller: AbortController | null = null;
  private stopped = false;

  constructor(private baseUrl: string, private callbacks: StreamCallbacks) {}

  start(): void {
    this.stopped = false;
    void this.run();
  }

  stop(): void {
    this.stopped = true;
    this.controller?.abort();
  }

  private async run(): Promise<void> {
    while (!this.stopped) {
      this.controller = new AbortController();
      try {
        const resp = await fetch(`${this.baseUrl}/stream`, {
          signal: this.controller.signal,
        });
        if (!resp.ok || resp.body === null) throw new Error(`stream: HTTP ${resp.status}`);
        this.callbacks.onConnect?.();
        const reader = resp.body.getReader();
        const decoder = new TextDecoder();
        const buffer = new NdjsonBuffer();
        for (;;) {
          const { done, value } = await reader.read();
          if (done) break;
          for (const line of buffer.feed(decoder.decode(value, { stream: true }))) {
            let parsed: unknown;
            try {
              parsed = JSON.parse(line);
            } catch {
              continue; // tolerate a torn line; the next one resyncs
            }
            if (isFrame(parsed)) this.callbacks.onFrame(parsed);
          }
        }
      } catch {
        // fall through to reconnect
      }
      if (this.stopped) return;
      this.callbacks.onDisconnect?.();
      await new Promise((resolve) => setTimeout(resolve, 1000));
    }
  }
}

export interface CommandReply {
  ok: boolean;
  error?: string;
}

export class CommandClient {
  constructor(private baseUrl: string) {}

  private async post(body: Record<string, unknown>): Promise<CommandReply> {
    const resp = await fetch(`${this.baseUrl}/command`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return (await resp.json()) as CommandReply;
  }

  setSetpointDeci(value: number): Promise<CommandReply> {
    return this.post({ cmd: "set_setpoint_deci", value });
  }

  setDisturbance(on: boolean): Promise<CommandReply> {
    return this.post({ cmd: "disturbance", on });
  }

  setGains(kp: number, ki: number, kd: number): Promise<CommandReply> {
    return this.post({ cmd: "set_gains", kp, ki, kd });
  }

  pause(): Promise<CommandReply> {
    return this.post({ cmd: "pause" });
  }

  resume(): Promise<CommandReply> {
    return this.post({ cmd: "resume" });
  }

  reset(): Promise<CommandReply> {
    return this.post({ cmd: "reset" });
  }
}
