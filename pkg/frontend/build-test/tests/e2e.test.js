/**
 * Live end-to-end: the console drives the real assessment service.
 *
 * Spawns the Python service, uploads the fixture course, and walks the full
 * learner loop headlessly (controller + capturing mount instead of a browser):
 * fresh-learner banner, passing the prerequisite, failing the target (map
 * turns red, three supporting variants appear), and a fast repeat run that
 * triggers the challenge banner. All traffic is recorded; the test recomputes
 * every rendered status and node color from the raw responses to prove the
 * client invented nothing.
 */
import assert from "node:assert/strict";
import { spawn } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { after, before, test } from "node:test";
import { ApiClient } from "../src/api.js";
import { ConsoleApp } from "../src/app.js";
import { conceptColor } from "../src/colors.js";
import { CapturingMount, makeRecordingFetch, renderedNodeColors, renderedStatuses, scriptedClock, } from "./helpers.js";
const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "..", "fixtures");
const PORT = 8900 + (process.pid % 500);
const BASE = `http://127.0.0.1:${PORT}`;
let service;
before(async () => {
    service = spawn("python3", ["-m", "compass.cli", "serve", "--port", String(PORT), "--data-dir", mkdtempSync(join(tmpdir(), "console-e2e-"))], { stdio: "ignore" });
    const deadline = Date.now() + 20_000;
    for (;;) {
        try {
            const resp = await fetch(`${BASE}/health`);
            if (resp.ok) {
                break;
            }
        }
        catch {
            // not up yet
        }
        if (Date.now() > deadline) {
            throw new Error("service did not come up");
        }
        await new Promise((resolve) => setTimeout(resolve, 150));
    }
});
after(() => {
    service.kill();
});
/** Answer every pending item; correctness is decided by the REAL service. */
async function playSession(app, pickWrong) {
    for (let guard = 0; guard < 15; guard += 1) {
        const session = app.state.session;
        if (!session || session.status !== "Active" || !session.item) {
            return;
        }
        app.toggleOption(pickWrong ? 1 : 0); // option 0 is keyed correct in the fixture pool
        await app.submitAnswer();
        assert.equal(app.state.error, null);
    }
    throw new Error("session did not finish");
}
test("worked example through the console against the live service", async () => {
    const recorder = makeRecordingFetch();
    const api = new ApiClient(BASE, recorder.fetchFn);
    await api.putDomainModel("diffcalc", JSON.parse(readFileSync(join(FIXTURES, "domain.json"), "utf-8")));
    await api.putItemPool("diffcalc-items", "diffcalc", JSON.parse(readFileSync(join(FIXTURES, "items.json"), "utf-8")));
    const mount = new CapturingMount();
    const app = new ConsoleApp(api, mount, scriptedClock("2025-03-01T10:00:00Z"));
    // 1. fresh learner: the map renders but no statement is possible
    await app.loadCourse("diffcalc", "grundableitungen,umkehrregel", "emma", "diffcalc-items");
    assert.equal(app.state.error, null);
    assert.match(mount.get("overlay-pane"), /data-banner="no-statement"/);
    // 2. prerequisite check passes (all answers correct)
    await app.startAssessment("lo-grundableitungen");
    await playSession(app, false);
    assert.equal(app.state.session?.status, "Concluded");
    assert.equal(app.state.session?.result?.localized_level, 6);
    assert.equal(renderedNodeColors(mount.get("overlay-pane")).get("grundableitungen"), "green");
    assert.equal(mount.get("challenge-pane"), ""); // only 3 records: streak not established yet
    // 3. target check fails: red node, the failed item's outcome, three variants
    await app.startAssessment("lo-umkehrregel");
    await playSession(app, true);
    assert.equal(app.state.session?.status, "Concluded");
    assert.equal(app.state.session?.result?.localized_level, 0);
    const overlayHtml = mount.get("overlay-pane");
    assert.doesNotMatch(overlayHtml, /data-banner="no-statement"/);
    const nodeColors = renderedNodeColors(overlayHtml);
    assert.equal(nodeColors.get("umkehrregel"), "red");
    assert.equal(nodeColors.get("grundableitungen"), "green");
    const plansHtml = mount.get("plans-pane");
    assert.match(plansHtml, /data-plan-count="4"/);
    for (const supporter of ["gleichungen-ableiten", "kettenregel", "umkehrfunktion"]) {
        assert.ok(plansHtml.includes(`data-variant-of="${supporter}"`), `variant via ${supporter}`);
    }
    // 4. a second fast, flawless run on the prerequisite triggers the challenge
    await app.startAssessment("lo-grundableitungen");
    await playSession(app, false);
    assert.match(mount.get("challenge-pane"), /data-banner="challenge"/);
    assert.match(mount.get("challenge-pane"), /level 4/);
    // 5. intercepted traffic: every rendered status and color traces to a response
    const overlayBodies = recorder.calls
        .filter((c) => c.method === "GET" && c.url.includes("/overlay") && c.status === 200)
        .map((c) => c.responseBody);
    assert.ok(overlayBodies.length >= 3);
    const served = overlayBodies.at(-1);
    const shownStatuses = renderedStatuses(overlayHtml);
    assert.equal(shownStatuses.size, Object.keys(served.statuses).length);
    for (const [loId, status] of shownStatuses) {
        assert.equal(status, served.statuses[loId], `rendered status of ${loId} must be the served one`);
    }
    const modelBody = recorder.calls.find((c) => c.method === "GET" && c.url.includes("/models/domain/diffcalc")).responseBody;
    for (const concept of modelBody.concepts) {
        const expected = conceptColor(concept.outcomes
            .map((lo) => served.statuses[lo.id])
            .filter((s) => s !== undefined));
        assert.equal(nodeColors.get(concept.id), expected, `node color of ${concept.id}`);
    }
    // 6. no response ever exposed an answer key; no request ever carried a verdict
    for (const call of recorder.calls) {
        assert.ok(!JSON.stringify(call.responseBody ?? "").includes("answer_key"), call.url);
        if (call.requestBody !== undefined) {
            assert.ok(!("correct" in call.requestBody), call.url);
        }
    }
});
