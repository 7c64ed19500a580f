/**
 * Console controller: the session/overlay/recommendation loop.
 *
 * All state mutations happen through service calls; the controller renders
 * whatever the service said and nothing else. Answers are never scored
 * locally (the client does not even receive answer keys), and one request is
 * in flight per session at a time - submissions await the server verdict.
 */
import { addPreferenceTags, conceptOfLo, effectiveCourseConcepts, fullyAchievedConcepts, initialState, selectPlan, toggleChoice, } from "./state.js";
import { renderAssessmentPane, renderChallengePane, renderErrorPane, renderOverlayPane, renderPlansPane, renderResourcesPane, } from "./render.js";
export function systemClock() {
    return {
        nowIso: () => new Date().toISOString().replace(/\.\d{3}Z$/, "Z"),
        monotonicMs: () => Date.now(),
    };
}
export class ConsoleApp {
    api;
    mount;
    clock;
    state = initialState();
    itemShownAt = 0;
    constructor(api, mount, clock = systemClock()) {
        this.api = api;
        this.mount = mount;
        this.clock = clock;
    }
    render() {
        this.mount.set("overlay-pane", renderOverlayPane(this.state));
        this.mount.set("assessment-pane", renderAssessmentPane(this.state));
        this.mount.set("plans-pane", renderPlansPane(this.state));
        this.mount.set("resources-pane", renderResourcesPane(this.state));
        this.mount.set("challenge-pane", renderChallengePane(this.state));
        this.mount.set("error-pane", renderErrorPane(this.state));
    }
    async guarded(action) {
        if (this.state.busy) {
            return;
        }
        this.state = { ...this.state, busy: true, error: null };
        try {
            await action();
        }
        catch (err) {
            this.state = { ...this.state, error: err instanceof Error ? err.message : String(err) };
        }
        finally {
            this.state = { ...this.state, busy: false };
            this.render();
        }
    }
    async loadCourse(courseId, conceptsCsv, learnerId, poolId = null) {
        await this.guarded(async () => {
            const concepts = conceptsCsv
                .split(",")
                .map((part) => part.trim())
                .filter((part) => part.length > 0);
            const model = await this.api.getDomainModel(courseId);
            this.state = {
                ...initialState(),
                learnerId,
                courseId,
                courseConcepts: concepts,
                poolId,
                model,
            };
            await this.refreshOverlay();
        });
    }
    async refreshOverlay() {
        if (!this.state.courseId) {
            return;
        }
        const overlay = await this.api.getOverlay(this.state.learnerId, this.state.courseId, effectiveCourseConcepts(this.state), this.clock.nowIso());
        this.state = { ...this.state, overlay };
    }
    async startAssessment(loId) {
        await this.guarded(async () => {
            const session = await this.api.createSession(this.state.learnerId, loId, this.state.poolId);
            this.itemShownAt = this.clock.monotonicMs();
            this.state = { ...this.state, session, activeLoId: loId, chosen: [], challenge: null };
        });
    }
    toggleOption(index) {
        this.state = toggleChoice(this.state, index);
        this.render();
    }
    async submitAnswer() {
        await this.guarded(async () => {
            const session = this.state.session;
            if (!session || session.status !== "Active" || !session.item) {
                return;
            }
            const seconds = Math.max(0, Math.floor((this.clock.monotonicMs() - this.itemShownAt) / 1000));
            const next = await this.api.submitAnswer(session.session_id, session.item.id, this.state.chosen, seconds, this.clock.nowIso());
            this.itemShownAt = this.clock.monotonicMs();
            this.state = { ...this.state, session: next, chosen: [] };
            if (next.status !== "Active") {
                await this.afterSessionEnd();
            }
        });
    }
    /** Session over: re-render the map, fetch plans and a possible challenge. */
    async afterSessionEnd() {
        await this.refreshOverlay();
        const target = this.state.activeLoId ? conceptOfLo(this.state, this.state.activeLoId) : null;
        if (target && effectiveCourseConcepts(this.state).includes(target)) {
            await this.loadRecommendations(target);
        }
        await this.scanForChallenge();
    }
    async loadRecommendations(target) {
        if (!this.state.courseId) {
            return;
        }
        const plans = await this.api.getRecommendations(this.state.learnerId, this.state.courseId, effectiveCourseConcepts(this.state), target, 3, this.state.preferenceTags, this.clock.nowIso());
        this.state = { ...this.state, plans, selectedPlan: 0 };
    }
    async scanForChallenge() {
        if (!this.state.courseId) {
            return;
        }
        for (const conceptId of fullyAchievedConcepts(this.state)) {
            const suggestion = await this.api.getChallenge(this.state.learnerId, this.state.courseId, conceptId, this.clock.nowIso());
            if (suggestion !== null) {
                this.state = { ...this.state, challenge: suggestion };
                return;
            }
        }
        this.state = { ...this.state, challenge: null };
    }
    selectPlanVariant(index) {
        this.state = selectPlan(this.state, index);
        this.render();
    }
    /** Learner liked a resource: remember its kind and tags for future ranking. */
    async pickResource(loId, resourceId) {
        await this.guarded(async () => {
            const rec = this.state.plans?.resources.find((r) => r.lo_id === loId);
            const resource = rec?.ranked.find((r) => r.id === resourceId);
            if (!resource) {
                return;
            }
            this.state = addPreferenceTags(this.state, [...resource.tags, resource.kind]);
            if (this.state.plans) {
                await this.loadRecommendations(this.state.plans.target_concept);
            }
        });
    }
}
