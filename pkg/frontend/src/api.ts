/** Typed client for the assessment service; every byte of state comes from here. */

import type {
  ChallengeDoc,
  DomainModelDoc,
  OverlayReportDoc,
  RecommendationsDoc,
  SessionResponseDoc,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(resp: Response): Promise<ApiError> {
  let code = "HTTP_ERROR";
  let message = `${resp.status} ${resp.statusText}`;
  try {
    const body = (await resp.json()) as { error?: { code?: string; message?: string } };
    if (body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body, keep the HTTP status text
  }
  return new ApiError(resp.status, code, message);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
      init.headers = { "Content-Type": "application/json" };
    }
    const resp = await this.fetchFn(this.baseUrl + path, init);
    if (!resp.ok) {
      throw await parseError(resp);
    }
    if (resp.status === 204) {
      return undefined as T;
    }
    return (await resp.json()) as T;
  }

  getDomainModel(moduleId: string): Promise<DomainModelDoc> {
    return this.request("GET", `/models/domain/${encodeURIComponent(moduleId)}`);
  }

  putDomainModel(moduleId: string, doc: unknown): Promise<unknown> {
    return this.request("PUT", `/models/domain/${encodeURIComponent(moduleId)}`, doc);
  }

  putItemPool(poolId: string, domainId: string, doc: unknown): Promise<unknown> {
    return this.request(
      "PUT",
      `/models/items/${encodeURIComponent(poolId)}?domain=${encodeURIComponent(domainId)}`,
      doc,
    );
  }

  getOverlay(
    learnerId: string,
    courseId: string,
    concepts: string[],
    nowIso: string,
  ): Promise<OverlayReportDoc> {
    const params = new URLSearchParams({ course: courseId, now: nowIso });
    if (concepts.length > 0) {
      params.set("concepts", concepts.join(","));
    }
    return this.request("GET", `/learners/${encodeURIComponent(learnerId)}/overlay?${params}`);
  }

  createSession(
    learnerId: string,
    loId: string,
    poolId: string | null,
    budget = 12,
  ): Promise<SessionResponseDoc> {
    const body: Record<string, unknown> = { lo_id: loId, budget };
    if (poolId !== null) {
      body.pool_id = poolId;
    }
    return this.request("POST", `/learners/${encodeURIComponent(learnerId)}/sessions`, body);
  }

  getNext(sessionId: string): Promise<SessionResponseDoc> {
    return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/next`);
  }

  submitAnswer(
    sessionId: string,
    itemId: string,
    chosen: number[],
    seconds: number,
    nowIso: string,
  ): Promise<SessionResponseDoc> {
    return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/answers`, {
      item_id: itemId,
      chosen,
      seconds,
      now: nowIso,
    });
  }

  getRecommendations(
    learnerId: string,
    courseId: string,
    concepts: string[],
    target: string,
    k: number,
    tags: string[],
    nowIso: string,
  ): Promise<RecommendationsDoc> {
    const params = new URLSearchParams({
      course: courseId,
      target,
      k: String(k),
      now: nowIso,
    });
    if (concepts.length > 0) {
      params.set("concepts", concepts.join(","));
    }
    if (tags.length > 0) {
      params.set("tags", tags.join(","));
    }
    return this.request(
      "GET",
      `/learners/${encodeURIComponent(learnerId)}/recommendations?${params}`,
    );
  }

  /** Resolves to null when the service answers 204 (nothing to suggest). */
  async getChallenge(
    learnerId: string,
    courseId: string,
    conceptId: string,
    nowIso: string,
  ): Promise<ChallengeDoc | null> {
    const params = new URLSearchParams({ course: courseId, concept: conceptId, now: nowIso });
    const doc = await this.request<ChallengeDoc | undefined>(
      "GET",
      `/learners/${encodeURIComponent(learnerId)}/challenge?${params}`,
    );
    return doc ?? null;
  }
}
