import type {
  ActionResponse,
  ApiErrorBody,
  GameSummary,
  SessionResponse,
} from "./types";

/** Service error carrying the uniform {code, stage, message} body. */
export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const data = await response.json();
  if (!response.ok) {
    throw new ApiError(response.status, data as ApiErrorBody);
  }
  return data as T;
}

function post<T>(url: string, body: unknown): Promise<T> {
  return request<T>(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
}

/** Thin typed wrapper over the game service; one method per endpoint. */
export class Api {
  constructor(private base = "") {}

  createGame(victim: string, mode: string, seed: number): Promise<GameSummary> {
    return post(`${this.base}/games`, { victim, mode, seed });
  }

  createSession(gameId: string): Promise<SessionResponse> {
    return post(`${this.base}/games/${gameId}/sessions`, {});
  }

  getSession(sessionId: string): Promise<SessionResponse> {
    return request(`${this.base}/sessions/${sessionId}`);
  }

  act(
    sessionId: string,
    kind: string,
    target: string,
    payload?: string[],
  ): Promise<ActionResponse> {
    return post(`${this.base}/sessions/${sessionId}/actions`, {
      kind,
      target,
      payload: payload ?? null,
    });
  }

  sendFeedback(gameId: string, suspect: string): Promise<unknown> {
    return post(`${this.base}/games/${gameId}/feedback`, {
      suspect,
      kind: "report",
    });
  }
}
