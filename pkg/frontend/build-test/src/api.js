/** Typed client for the assessment service; every byte of state comes from here. */
export class ApiError extends Error {
    status;
    code;
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
    }
}
async function parseError(resp) {
    let code = "HTTP_ERROR";
    let message = `${resp.status} ${resp.statusText}`;
    try {
        const body = (await resp.json());
        if (body.error) {
            code = body.error.code ?? code;
            message = body.error.message ?? message;
        }
    }
    catch {
        // non-JSON error body, keep the HTTP status text
    }
    return new ApiError(resp.status, code, message);
}
export class ApiClient {
    baseUrl;
    fetchFn;
    constructor(baseUrl, fetchFn = (input, init) => fetch(input, init)) {
        this.baseUrl = baseUrl;
        this.fetchFn = fetchFn;
    }
    async request(method, path, body) {
        const init = { method };
        if (body !== undefined) {
            init.body = JSON.stringify(body);
            init.headers = { "Content-Type": "application/json" };
        }
        const resp = await this.fetchFn(this.baseUrl + path, init);
        if (!resp.ok) {
            throw await parseError(resp);
        }
        if (resp.status === 204) {
            return undefined;
        }
        return (await resp.json());
    }
    getDomainModel(moduleId) {
        return this.request("GET", `/models/domain/${encodeURIComponent(moduleId)}`);
    }
    putDomainModel(moduleId, doc) {
        return this.request("PUT", `/models/domain/${encodeURIComponent(moduleId)}`, doc);
    }
    putItemPool(poolId, domainId, doc) {
        return this.request("PUT", `/models/items/${encodeURIComponent(poolId)}?domain=${encodeURIComponent(domainId)}`, doc);
    }
    getOverlay(learnerId, courseId, concepts, nowIso) {
        const params = new URLSearchParams({ course: courseId, now: nowIso });
        if (concepts.length > 0) {
            params.set("concepts", concepts.join(","));
        }
        return this.request("GET", `/learners/${encodeURIComponent(learnerId)}/overlay?${params}`);
    }
    createSession(learnerId, loId, poolId, budget = 12) {
        const body = { lo_id: loId, budget };
        if (poolId !== null) {
            body.pool_id = poolId;
        }
        return this.request("POST", `/learners/${encodeURIComponent(learnerId)}/sessions`, body);
    }
    getNext(sessionId) {
        return this.request("GET", `/sessions/${encodeURIComponent(sessionId)}/next`);
    }
    submitAnswer(sessionId, itemId, chosen, seconds, nowIso) {
        return this.request("POST", `/sessions/${encodeURIComponent(sessionId)}/answers`, {
            item_id: itemId,
            chosen,
            seconds,
            now: nowIso,
        });
    }
    getRecommendations(learnerId, courseId, concepts, target, k, tags, nowIso) {
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
        return this.request("GET", `/learners/${encodeURIComponent(learnerId)}/recommendations?${params}`);
    }
    /** Resolves to null when the service answers 204 (nothing to suggest). */
    async getChallenge(learnerId, courseId, conceptId, nowIso) {
        const params = new URLSearchParams({ course: courseId, concept: conceptId, now: nowIso });
        const doc = await this.request("GET", `/learners/${encodeURIComponent(learnerId)}/challenge?${params}`);
        return doc ?? null;
    }
}
