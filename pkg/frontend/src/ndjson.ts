// Reassembles newline-delimited JSON from arbitrary network chunk
// boundaries. Carries the trailing partial line between feeds.
export class NdjsonBuffer {
  private partial = "";

  feed(chunk: string): string[] {
    const data = this.partial + chunk;
    const lines = data.split("\n");
    this.partial = lines.pop() ?? "";
    return lines.filter((line) => line.length > 0);
  }

  // Anything buffered but not yet terminated (useful on stream end).
  flush(): string | null {
    const rest = this.partial;
    this.partial = "";
    return rest.length > 0 ? rest : null;
  }
}
