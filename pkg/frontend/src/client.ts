/** Thin typed client for the deduction service endpoints. */

import {
  AssertResponse,
  ChartInfo,
  ContradictionDetail,
  FixtureChart,
  LogEntry,
} from "./types.js";

export class ContradictionError extends Error {
  constructor(public detail: ContradictionDetail) {
    super(detail.message);
  }
}

export class ScriptLineError extends Error {}

export class ApiClient {
  constructor(private base: string) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  async charts(): Promise<ChartInfo[]> {
    return this.json(await fetch(this.url("/charts")));
  }

  async chart(id: string): Promise<FixtureChart> {
    return this.json(await fetch(this.url(`/chart/${id}`)));
  }

  async assertLine(line: string): Promise<AssertResponse> {
    const res = await fetch(this.url("/assert"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ line }),
    });
    if (res.status === 409) {
      const body = await res.json();
      throw new ContradictionError(body.detail as ContradictionDetail);
    }
    if (res.status === 422) {
      const body = await res.json();
      throw new ScriptLineError(JSON.stringify(body.detail));
    }
    return this.json(res);
  }

  async undo(): Promise<void> {
    const res = await fetch(this.url("/undo"), { method: "POST" });
    if (!res.ok) throw new Error(`undo failed: ${res.status}`);
  }

  /** JSON-lines derivation log, exactly as the engine serializes it. */
  async log(): Promise<string> {
    const res = await fetch(this.url("/log"));
    if (!res.ok) throw new Error(`log failed: ${res.status}`);
    return res.text();
  }

  async logEntries(): Promise<LogEntry[]> {
    const text = await this.log();
    return text
      .split("\n")
      .filter((l) => l.trim())
      .map((l) => JSON.parse(l) as LogEntry);
  }

  /** The session as runnable script text (export_session). */
  async session(): Promise<string> {
    const res = await fetch(this.url("/session"));
    if (!res.ok) throw new Error(`session failed: ${res.status}`);
    return res.text();
  }

  private async json<T>(res: Response): Promise<T> {
    if (!res.ok) throw new Error(`request failed: ${res.status}`);
    return (await res.json()) as T;
  }
}
