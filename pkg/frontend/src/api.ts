// Typed HTTP client for the play service. Every call returns the server's
// JSON verbatim; error responses are raised as ApiError so callers can show
// the server's own message (which includes the legal range for bad moves).

export type Bound = number | "inf";
export type Actor = "human" | "engine";
export type Status = "in-progress" | "human-won" | "engine-won";

export interface HistoryEntry {
  actor: Actor;
  pile_index: number;
  pile_before: number;
  take: number;
  piles_after: number[];
  bound_after: Bound;
}

export interface SessionView {
  id: string;
  piles: number[];
  bound: Bound;
  dynamic: 1 | 2;
  human_first: boolean;
  hints_enabled: boolean;
  status: Status;
  winner: Actor | null;
  turn: "human" | null;
  history: HistoryEntry[];
}

export interface CreateRequest {
  piles: number[];
  bound: Bound | null;
  dynamic: 1 | 2;
  human_first: boolean;
  hints_enabled: boolean;
}

export interface Hint {
  pile_index: number;
  take: number;
}

export interface HintResponse {
  hint: Hint | null;
  outcome: "N" | "P";
}

export interface ErrorBody {
  code: string;
  message: string;
  detail: unknown;
}

export class ApiError extends Error {
  readonly status: number;
  readonly body: ErrorBody;

  constructor(status: number, body: ErrorBody) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }

  get code(): string {
    return this.body.code;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

// Structural interface so tests can substitute a fake engine.
export interface EngineApi {
  createSession(req: CreateRequest): Promise<SessionView>;
  getSession(id: string): Promise<SessionView>;
  move(id: string, pileIndex: number, take: number): Promise<SessionView>;
  hint(id: string): Promise<HintResponse>;
}

export class ApiClient implements EngineApi {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn?: FetchLike) {
    this.base = base.replace(/\/+$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchFn(this.base + path, init);
    let payload: unknown = null;
    try {
      payload = await res.json();
    } catch {
      payload = null;
    }
    if (!res.ok) {
      const body = asErrorBody(payload, res.status);
      throw new ApiError(res.status, body);
    }
    return payload as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  createSession(req: CreateRequest): Promise<SessionView> {
    return this.post<SessionView>("/api/session", req);
  }

  getSession(id: string): Promise<SessionView> {
    return this.request<SessionView>(`/api/session/${id}`);
  }

  move(id: string, pileIndex: number, take: number): Promise<SessionView> {
    return this.post<SessionView>(`/api/session/${id}/move`, {
      pile_index: pileIndex,
      take,
    });
  }

  hint(id: string): Promise<HintResponse> {
    return this.request<HintResponse>(`/api/session/${id}/hint`);
  }

  async health(): Promise<{ status: string }> {
    return this.request<{ status: string }>("/api/health");
  }
}

function asErrorBody(payload: unknown, status: number): ErrorBody {
  if (
    payload !== null &&
    typeof payload === "object" &&
    typeof (payload as Record<string, unknown>).code === "string" &&
    typeof (payload as Record<string, unknown>).message === "string"
  ) {
    const rec = payload as Record<string, unknown>;
    return {
      code: rec.code as string,
      message: rec.message as string,
      detail: "detail" in rec ? rec.detail : null,
    };
  }
  return { code: "http_error", message: `HTTP ${status}`, detail: payload };
}
