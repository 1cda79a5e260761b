// Strict request replay: the client must issue exactly the recorded calls,
// in order, with byte-equal JSON bodies — drifting from the raw API script
// fails the test immediately.

export interface Exchange {
  method: string;
  path: string;
  body: unknown;
  status: number;
  response: unknown;
}

export interface Scene {
  game_id: string;
  session_id: string;
  exchanges: Exchange[];
  culprit?: string;
  flagged_npc?: string;
  collect_id?: string;
}

export class ReplayFetch {
  private queue: Exchange[];
  served = 0;

  constructor(exchanges: Exchange[]) {
    this.queue = [...exchanges];
  }

  get pending(): number {
    return this.queue.length;
  }

  peek(): Exchange | undefined {
    return this.queue[0];
  }

  install(): void {
    globalThis.fetch = (async (url: string, init?: RequestInit) => {
      const expected = this.queue.shift();
      const method = init?.method ?? "GET";
      if (!expected) {
        throw new Error(`unexpected ${method} ${url}: no exchanges left`);
      }
      if (method !== expected.method || url !== expected.path) {
        throw new Error(
          `expected ${expected.method} ${expected.path}, got ${method} ${url}`,
        );
      }
      if (expected.method === "POST") {
        const got = JSON.stringify(JSON.parse(String(init?.body ?? "null")));
        const want = JSON.stringify(expected.body);
        if (got !== want) {
          throw new Error(`body mismatch for ${url}\n  want ${want}\n  got  ${got}`);
        }
      }
      this.served += 1;
      return {
        ok: expected.status >= 200 && expected.status < 300,
        status: expected.status,
        json: async () => expected.response,
      } as Response;
    }) as typeof fetch;
  }
}

/** Let in-flight promises and re-renders settle. */
export function tick(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
