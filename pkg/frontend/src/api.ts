// Thin typed client over fetch. Every ranking decision stays server-side;
// this module only moves payloads.

import type {
  ApiErrorPayload,
  CreateSessionResponse,
  DashboardCellPayload,
  DashboardPayload,
  DatabaseSummary,
  HistoryEntryPayload,
  RecommendationSetPayload,
  SubmitResponse,
} from "./types.js";

export class ApiError extends Error {
  readonly errorCode: string;
  readonly status: number;
  readonly position?: number;

  constructor(status: number, payload: ApiErrorPayload) {
    super(payload.message);
    this.status = status;
    this.errorCode = payload.error_code;
    this.position = payload.position;
  }
}

async function request<T>(base: string, path: string, init?: RequestInit): Promise<T> {
  const response = await fetch(base + path, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let payload: ApiErrorPayload;
    try {
      payload = (await response.json()) as ApiErrorPayload;
    } catch {
      payload = { error_code: "http_error", message: `HTTP ${response.status}` };
    }
    throw new ApiError(response.status, payload);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  listDatabases(): Promise<DatabaseSummary[]> {
    return request(this.base, "/databases");
  }

  createSession(databaseId: string): Promise<CreateSessionResponse> {
    return request(this.base, "/sessions", {
      method: "POST",
      body: JSON.stringify({ database_id: databaseId }),
    });
  }

  submitRecommendation(sessionId: string, index: number): Promise<SubmitResponse> {
    return request(this.base, `/sessions/${sessionId}/queries`, {
      method: "POST",
      body: JSON.stringify({ recommendation_index: index }),
    });
  }

  submitSql(sessionId: string, sql: string): Promise<SubmitResponse> {
    return request(this.base, `/sessions/${sessionId}/queries`, {
      method: "POST",
      body: JSON.stringify({ sql }),
    });
  }

  recommendations(sessionId: string): Promise<RecommendationSetPayload> {
    return request(this.base, `/sessions/${sessionId}/recommendations`);
  }

  history(sessionId: string): Promise<{ entries: HistoryEntryPayload[] }> {
    return request(this.base, `/sessions/${sessionId}/history`);
  }

  historyEntry(sessionId: string, index: number): Promise<HistoryEntryPayload> {
    return request(this.base, `/sessions/${sessionId}/history/${index}`);
  }

  saveDashboard(sessionId: string, cells: DashboardCellPayload[]): Promise<DashboardPayload> {
    return request(this.base, "/dashboards", {
      method: "POST",
      body: JSON.stringify({ session_id: sessionId, cells }),
    });
  }

  loadDashboard(id: string): Promise<DashboardPayload> {
    return request(this.base, `/dashboards/${id}`);
  }
}
