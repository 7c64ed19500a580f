/** Canned documents for the scripted-service tests (mirrors the live fixtures). */
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "..", "fixtures");
export function domainModelDoc() {
    return JSON.parse(readFileSync(join(FIXTURES, "domain.json"), "utf-8"));
}
export function itemPoolDoc() {
    return JSON.parse(readFileSync(join(FIXTURES, "items.json"), "utf-8"));
}
export const COURSE_CONCEPTS = "grundableitungen,umkehrregel";
export function noStatementOverlay(learnerId) {
    return {
        schema_version: "1.0",
        course_id: "diffcalc",
        learner_id: learnerId,
        now: "2025-03-01T10:00:00Z",
        no_statement: true,
        statuses: {
            "lo-grundableitungen": "Unknown",
            "lo-umkehrregel": "Unknown",
            "lo-kettenregel": "OutOfCourse",
            "lo-umkehrfunktion": "OutOfCourse",
            "lo-gleichungen": "OutOfCourse",
        },
        deficits: [],
        frontier: [],
    };
}
export function failedTargetOverlay(learnerId) {
    return {
        ...noStatementOverlay(learnerId),
        no_statement: false,
        statuses: {
            "lo-grundableitungen": "Achieved",
            "lo-umkehrregel": "NotAchieved",
            "lo-kettenregel": "OutOfCourse",
            "lo-umkehrfunktion": "OutOfCourse",
            "lo-gleichungen": "OutOfCourse",
        },
        deficits: ["lo-umkehrregel"],
        frontier: ["grundableitungen"],
    };
}
export function variantRecommendations() {
    const variantOf = ["gleichungen-ableiten", "kettenregel", "umkehrfunktion"];
    return {
        course_id: "diffcalc",
        target_concept: "umkehrregel",
        plans: [
            { target_concept: "umkehrregel", steps: ["umkehrregel"], variant_of: null, unmet_lo_count: 1 },
            ...variantOf.map((supporter) => ({
                target_concept: "umkehrregel",
                steps: [supporter, "umkehrregel"],
                variant_of: supporter,
                unmet_lo_count: 2,
            })),
        ],
        resources: [
            {
                lo_id: "lo-umkehrregel",
                preference_tags_applied: [],
                ranked: [
                    {
                        id: "res-kette-1",
                        title: "Kettenregel Schritt für Schritt",
                        uri: "https://example.org/material/res-kette-1",
                        kind: "introductory",
                        tags: ["video"],
                    },
                    {
                        id: "res-umkehr-1",
                        title: "Regel zur Ableitung der Umkehrfunktion",
                        uri: "https://example.org/material/res-umkehr-1",
                        kind: "introductory",
                        tags: ["text"],
                    },
                ],
            },
        ],
    };
}
