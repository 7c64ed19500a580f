/** Test doubles: recording fetch, scripted clock, capturing mount. */
/** Fetch backed by a scripted responder; records every exchange. */
export function makeFakeFetch(responder) {
    const calls = [];
    const fetchFn = async (url, init) => {
        const method = init?.method ?? "GET";
        const requestBody = init?.body ? JSON.parse(String(init.body)) : undefined;
        const scripted = responder(method, url, requestBody);
        if (scripted === undefined) {
            throw new Error(`no scripted response for ${method} ${url}`);
        }
        calls.push({
            method,
            url,
            requestBody,
            status: scripted.status,
            responseBody: scripted.body,
        });
        if (scripted.status === 204) {
            return new Response(null, { status: 204 });
        }
        return new Response(JSON.stringify(scripted.body ?? {}), {
            status: scripted.status,
            headers: { "Content-Type": "application/json" },
        });
    };
    return { fetchFn, calls };
}
/** Real fetch with the same recording shape, for the live end-to-end run. */
export function makeRecordingFetch() {
    const calls = [];
    const fetchFn = async (url, init) => {
        const method = init?.method ?? "GET";
        const requestBody = init?.body ? JSON.parse(String(init.body)) : undefined;
        const resp = await fetch(url, init);
        const text = await resp.text();
        let responseBody = text;
        try {
            responseBody = text === "" ? undefined : JSON.parse(text);
        }
        catch {
            // keep raw text
        }
        calls.push({ method, url, requestBody, status: resp.status, responseBody });
        return new Response(text === "" ? null : text, {
            status: resp.status,
            headers: { "Content-Type": resp.headers.get("Content-Type") ?? "application/json" },
        });
    };
    return { fetchFn, calls };
}
export class CapturingMount {
    panes = new Map();
    set(pane, html) {
        this.panes.set(pane, html);
    }
    get(pane) {
        return this.panes.get(pane) ?? "";
    }
}
/** Deterministic clock: wall time advances one second per reading. */
export function scriptedClock(startIso = "2025-03-01T10:00:00Z") {
    let tick = 0;
    const base = Date.parse(startIso);
    return {
        nowIso: () => {
            const at = new Date(base + tick * 1000);
            tick += 1;
            return at.toISOString().replace(/\.\d{3}Z$/, "Z");
        },
        monotonicMs: () => 0,
    };
}
/** Pulls (lo id, status) pairs out of rendered overlay HTML. */
export function renderedStatuses(html) {
    const out = new Map();
    const pattern = /data-status-for="([^"]+)" data-status="([^"]+)"/g;
    for (const match of html.matchAll(pattern)) {
        out.set(match[1], match[2]);
    }
    return out;
}
/** Pulls (concept id, fill color) pairs out of the rendered SVG. */
export function renderedNodeColors(html) {
    const out = new Map();
    const pattern = /data-concept="([^"]+)" data-color="([^"]+)"/g;
    for (const match of html.matchAll(pattern)) {
        out.set(match[1], match[2]);
    }
    return out;
}
