import type { Frame } from "./types.js";

// Rolling chart window: the last `capacity` live frames (600 = 60 s at
// 10 Hz). Paused repeats and non-advancing timestamps never enter, so the
// stored series is strictly increasing in t_ms.
export class FrameRing {
  private frames: Frame[] = [];

  constructor(readonly capacity = 600) {}

  push(frame: Frame): boolean {
    if (frame.paused) return false;
    const last = this.frames[this.frames.length - 1];
    if (last !== undefined && frame.t_ms <= last.t_ms) return false;
    this.frames.push(frame);
    if (this.frames.length > this.capacity) {
      this.frames.splice(0, this.frames.length - this.capacity);
    }
    return true;
  }

  get length(): number {
    return this.frames.length;
  }

  latest(): Frame | undefined {
    return this.frames[this.frames.length - 1];
  }

  toArray(): readonly Frame[] {
    return this.frames;
  }

  clear(): void {
    this.frames = [];
  }
}
