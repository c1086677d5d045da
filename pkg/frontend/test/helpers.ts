/** Test doubles: an editable document buffer, manual timers, a recording fetch. */

import { FetchLike } from "../src/api";
import { DocumentView, TimerHost } from "../src/session";

export class MockDocument implements DocumentView {
  constructor(
    public readonly id: string,
    public readonly languageId: string,
    private lines: string[]
  ) {}

  lineText(line: number): string {
    return this.lines[line] ?? "";
  }

  textBefore(line: number, character: number): string {
    const above = this.lines.slice(0, line);
    const prefix = this.lines[line].slice(0, character);
    return above.length ? above.join("\n") + "\n" + prefix : prefix;
  }

  textAfter(line: number, character: number): string {
    const below = this.lines.slice(line + 1);
    const suffix = this.lines[line].slice(character);
    return below.length ? suffix + "\n" + below.join("\n") : suffix;
  }

  /** Append text at the end of a line, like typing there. */
  type(line: number, text: string): void {
    this.lines[line] = this.lines[line] + text;
  }

  setLine(line: number, text: string): void {
    this.lines[line] = text;
  }
}

interface ScheduledTask {
  id: number;
  at: number;
  fn: () => void;
}

export class ManualTimers implements TimerHost {
  private tasks: ScheduledTask[] = [];
  private nextId = 1;
  now = 0;

  setTimeout(fn: () => void, ms: number): unknown {
    const id = this.nextId++;
    this.tasks.push({ id, at: this.now + ms, fn });
    return id;
  }

  clearTimeout(handle: unknown): void {
    this.tasks = this.tasks.filter((task) => task.id !== handle);
  }

  async advance(ms: number): Promise<void> {
    this.now += ms;
    const due = this.tasks
      .filter((task) => task.at <= this.now)
      .sort((a, b) => a.at - b.at);
    this.tasks = this.tasks.filter((task) => task.at > this.now);
    for (const task of due) {
      task.fn();
    }
    await flushAsync();
  }
}

export async function flushAsync(): Promise<void> {
  // Let promise chains started by timer callbacks settle.
  for (let i = 0; i < 5; i++) {
    await new Promise((resolve) => setImmediate(resolve));
  }
}

export interface RecordedCall {
  url: string;
  body: Record<string, unknown>;
}

export interface FakeServer {
  calls: RecordedCall[];
  completionCalls(): RecordedCall[];
  feedbackCalls(): RecordedCall[];
  fetchFn: FetchLike;
}

export function fakeServer(options: {
  suggestions?: { text: string; model_id: string }[];
  completionStatus?: number;
  feedbackStatuses?: number[];
  failNetwork?: boolean;
} = {}): FakeServer {
  const calls: RecordedCall[] = [];
  let requestCounter = 0;
  let feedbackCounter = 0;
  const fetchFn: FetchLike = async (url, init) => {
    const body = JSON.parse(init.body) as Record<string, unknown>;
    calls.push({ url, body });
    if (options.failNetwork) {
      throw new Error("connection refused");
    }
    if (url.endsWith("/api/v1/completion")) {
      const status = options.completionStatus ?? 200;
      return {
        ok: status === 200,
        status,
        json: async () => ({
          request_id: `req-${++requestCounter}`,
          suggestions: options.suggestions ?? [
            { text: "f(a);", model_id: "m0" },
            { text: "g(b);", model_id: "m1" },
          ],
        }),
      };
    }
    const statuses = options.feedbackStatuses ?? [200];
    const status = statuses[Math.min(feedbackCounter++, statuses.length - 1)];
    return { ok: status === 200, status, json: async () => ({}) };
  };
  return {
    calls,
    fetchFn,
    completionCalls: () => calls.filter((c) => c.url.endsWith("/api/v1/completion")),
    feedbackCalls: () => calls.filter((c) => c.url.endsWith("/api/v1/feedback")),
  };
}
