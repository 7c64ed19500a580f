/** Session flow against a scripted service: the open-learner-modelling loop. */

import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient } from "../src/api.js";
import { ConsoleApp } from "../src/app.js";
import {
  CapturingMount,
  makeFakeFetch,
  renderedNodeColors,
  renderedStatuses,
  scriptedClock,
  type Responder,
} from "./helpers.js";
import {
  COURSE_CONCEPTS,
  domainModelDoc,
  failedTargetOverlay,
  noStatementOverlay,
  variantRecommendations,
} from "./fixtures.js";

function makeApp(responder: Responder) {
  const fake = makeFakeFetch(responder);
  const mount = new CapturingMount();
  const app = new ConsoleApp(new ApiClient("http://svc", fake.fetchFn), mount, scriptedClock());
  return { app, mount, fake };
}

test("fresh learner sees the no-statement banner", async () => {
  const { app, mount } = makeApp((method, url) => {
    if (method === "GET" && url.includes("/models/domain/diffcalc")) {
      return { status: 200, body: domainModelDoc() };
    }
    if (method === "GET" && url.includes("/learners/fresh/overlay")) {
      return { status: 200, body: noStatementOverlay("fresh") };
    }
    return undefined;
  });
  await app.loadCourse("diffcalc", COURSE_CONCEPTS, "fresh");
  assert.match(mount.get("overlay-pane"), /data-banner="no-statement"/);
  assert.doesNotMatch(mount.get("overlay-pane"), /fill="red"/);
});

test("failing the target paints it red and offers the three supporting variants", async () => {
  let sessionAnswered = false;
  const { app, mount, fake } = makeApp((method, url, body) => {
    if (method === "GET" && url.includes("/models/domain/diffcalc")) {
      return { status: 200, body: domainModelDoc() };
    }
    if (method === "GET" && url.includes("/learners/emma/overlay")) {
      return {
        status: 200,
        body: sessionAnswered ? failedTargetOverlay("emma") : noStatementOverlay("emma"),
      };
    }
    if (method === "POST" && url.includes("/learners/emma/sessions")) {
      assert.equal((body as { lo_id: string }).lo_id, "lo-umkehrregel");
      return {
        status: 201,
        body: {
          session_id: "s1",
          status: "Active",
          interval: [0, 6],
          item: {
            id: "i-umkehr-l3",
            lo_id: "lo-umkehrregel",
            cell: { process_level: 3, knowledge_dim: 2 },
            stem: "Aufgabe",
            options: ["Antwort A", "Antwort B", "Antwort C", "Antwort D"],
            max_seconds: 60,
          },
        },
      };
    }
    if (method === "POST" && url.includes("/sessions/s1/answers")) {
      const answer = body as { item_id: string; chosen: number[]; now: string };
      assert.deepEqual(answer.chosen, [1]);
      sessionAnswered = true;
      return {
        status: 200,
        body: {
          session_id: "s1",
          status: "Concluded",
          interval: [0, 0],
          result: { lo_id: "lo-umkehrregel", localized_level: 0, exact: true, items_used: 1 },
        },
      };
    }
    if (method === "GET" && url.includes("/learners/emma/recommendations")) {
      assert.match(url, /target=umkehrregel/);
      return { status: 200, body: variantRecommendations() };
    }
    if (method === "GET" && url.includes("/learners/emma/challenge")) {
      return { status: 204 };
    }
    return undefined;
  });

  await app.loadCourse("diffcalc", COURSE_CONCEPTS, "emma", "diffcalc-items");
  await app.startAssessment("lo-umkehrregel");
  assert.match(mount.get("assessment-pane"), /Aufgabe/);
  app.toggleOption(1);
  await app.submitAnswer();

  // overlay pane: target red, prerequisite green, statuses verbatim from traffic
  const overlayHtml = mount.get("overlay-pane");
  const nodeColors = renderedNodeColors(overlayHtml);
  assert.equal(nodeColors.get("umkehrregel"), "red");
  assert.equal(nodeColors.get("grundableitungen"), "green");
  const servedOverlay = fake.calls
    .filter((c) => c.url.includes("/overlay"))
    .at(-1)!.responseBody as ReturnType<typeof failedTargetOverlay>;
  const shown = renderedStatuses(overlayHtml);
  assert.equal(shown.size, Object.keys(servedOverlay.statuses).length);
  for (const [loId, status] of shown) {
    assert.equal(status, servedOverlay.statuses[loId], `status for ${loId} must come from the server`);
  }

  // plans pane: one variant per supporting concept, selectable
  const plansHtml = mount.get("plans-pane");
  assert.match(plansHtml, /data-plan-count="4"/);
  for (const supporter of ["gleichungen-ableiten", "kettenregel", "umkehrfunktion"]) {
    assert.ok(plansHtml.includes(`data-variant-of="${supporter}"`));
  }
  app.selectPlanVariant(2);
  assert.match(mount.get("plans-pane"), /data-plan-index="2" data-variant-of="kettenregel"/);

  // the client never sent a verdict and never saw a key
  for (const call of fake.calls) {
    assert.ok(!JSON.stringify(call.responseBody ?? "").includes("answer_key"));
    if (call.method === "POST" && call.url.includes("/answers")) {
      assert.ok(!("correct" in (call.requestBody as Record<string, unknown>)));
    }
  }
});

test("picking a resource feeds preference tags into the next recommendation call", async () => {
  const tagsSeen: string[] = [];
  let answered = false;
  const { app } = makeApp((method, url, body) => {
    if (method === "GET" && url.includes("/models/domain/")) {
      return { status: 200, body: domainModelDoc() };
    }
    if (method === "GET" && url.includes("/overlay")) {
      return { status: 200, body: answered ? failedTargetOverlay("kim") : noStatementOverlay("kim") };
    }
    if (method === "POST" && url.includes("/learners/kim/sessions")) {
      return {
        status: 201,
        body: {
          session_id: "s2",
          status: "Active",
          interval: [0, 6],
          item: {
            id: "i-umkehr-l3", lo_id: "lo-umkehrregel",
            cell: { process_level: 3, knowledge_dim: 2 },
            stem: "?", options: ["a", "b"], max_seconds: 60,
          },
        },
      };
    }
    if (method === "POST" && url.includes("/answers")) {
      answered = true;
      return {
        status: 200,
        body: {
          session_id: "s2", status: "Concluded", interval: [0, 0],
          result: { lo_id: "lo-umkehrregel", localized_level: 0, exact: true, items_used: 1 },
        },
      };
    }
    if (method === "GET" && url.includes("/recommendations")) {
      const tags = new URL(url).searchParams.get("tags") ?? "";
      tagsSeen.push(tags);
      return { status: 200, body: variantRecommendations() };
    }
    if (method === "GET" && url.includes("/challenge")) {
      return { status: 204 };
    }
    return undefined;
  });

  await app.loadCourse("diffcalc", COURSE_CONCEPTS, "kim", "diffcalc-items");
  await app.startAssessment("lo-umkehrregel");
  app.toggleOption(1);
  await app.submitAnswer();
  assert.deepEqual(tagsSeen, [""]);

  await app.pickResource("lo-umkehrregel", "res-kette-1");
  assert.equal(tagsSeen.length, 2);
  assert.equal(tagsSeen[1], "introductory,video");
});

test("API errors surface inline and the session survives via GET next", async () => {
  let failOnce = true;
  const { app, mount, fake } = makeApp((method, url) => {
    if (method === "GET" && url.includes("/models/domain/")) {
      return { status: 200, body: domainModelDoc() };
    }
    if (method === "GET" && url.includes("/overlay")) {
      return { status: 200, body: noStatementOverlay("lea") };
    }
    if (method === "POST" && url.includes("/learners/lea/sessions")) {
      if (failOnce) {
        failOnce = false;
        return { status: 422, body: { error: { code: "NO_ITEMS", message: "pool has no items" } } };
      }
      return {
        status: 201,
        body: { session_id: "s3", status: "Active", interval: [0, 6],
          item: { id: "i", lo_id: "lo-umkehrregel", cell: { process_level: 3, knowledge_dim: 2 },
            stem: "?", options: ["a", "b"], max_seconds: 60 } },
      };
    }
    return undefined;
  });
  await app.loadCourse("diffcalc", COURSE_CONCEPTS, "lea", "diffcalc-items");
  await app.startAssessment("lo-umkehrregel");
  assert.match(mount.get("error-pane"), /pool has no items/);
  await app.startAssessment("lo-umkehrregel");
  assert.equal(mount.get("error-pane"), "");
  assert.ok(fake.calls.some((c) => c.status === 422));
});
