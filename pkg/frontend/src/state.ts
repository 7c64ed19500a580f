/**
 * Console view state. Everything rendered traces back to a service response
 * stored here; the reducers below only rearrange served data and UI flags,
 * they never score answers or derive achievement.
 */

import type {
  ChallengeDoc,
  DomainModelDoc,
  OverlayReportDoc,
  RecommendationsDoc,
  SessionResponseDoc,
} from "./types.js";

export interface ViewState {
  learnerId: string;
  courseId: string | null;
  courseConcepts: string[];
  poolId: string | null;
  model: DomainModelDoc | null;
  overlay: OverlayReportDoc | null;
  session: SessionResponseDoc | null;
  activeLoId: string | null;
  chosen: number[];
  plans: RecommendationsDoc | null;
  selectedPlan: number;
  preferenceTags: string[];
  challenge: ChallengeDoc | null;
  error: string | null;
  busy: boolean;
}

export function initialState(): ViewState {
  return {
    learnerId: "",
    courseId: null,
    courseConcepts: [],
    poolId: null,
    model: null,
    overlay: null,
    session: null,
    activeLoId: null,
    chosen: [],
    plans: null,
    selectedPlan: 0,
    preferenceTags: [],
    challenge: null,
    error: null,
    busy: false,
  };
}

export function toggleChoice(state: ViewState, index: number): ViewState {
  const chosen = state.chosen.includes(index)
    ? state.chosen.filter((i) => i !== index)
    : [...state.chosen, index].sort((a, b) => a - b);
  return { ...state, chosen };
}

export function selectPlan(state: ViewState, index: number): ViewState {
  const count = state.plans?.plans.length ?? 0;
  if (index < 0 || index >= count) {
    return state;
  }
  return { ...state, selectedPlan: index };
}

/** Resource picks feed the next recommendation call as preference tags. */
export function addPreferenceTags(state: ViewState, tags: string[]): ViewState {
  const merged = [...new Set([...state.preferenceTags, ...tags])].sort();
  return { ...state, preferenceTags: merged };
}

/** Course concept ids of the loaded model, or every concept when unset. */
export function effectiveCourseConcepts(state: ViewState): string[] {
  if (state.courseConcepts.length > 0) {
    return state.courseConcepts;
  }
  return state.model ? state.model.concepts.map((c) => c.id) : [];
}

/** Concepts whose outcomes are all Achieved per the served overlay. */
export function fullyAchievedConcepts(state: ViewState): string[] {
  if (!state.model || !state.overlay || state.overlay.no_statement) {
    return [];
  }
  const statuses = state.overlay.statuses;
  const course = new Set(effectiveCourseConcepts(state));
  return state.model.concepts
    .filter(
      (c) =>
        course.has(c.id) &&
        c.outcomes.length > 0 &&
        c.outcomes.every((lo) => statuses[lo.id] === "Achieved"),
    )
    .map((c) => c.id)
    .sort();
}

export function conceptOfLo(state: ViewState, loId: string): string | null {
  if (!state.model) {
    return null;
  }
  for (const concept of state.model.concepts) {
    if (concept.outcomes.some((lo) => lo.id === loId)) {
      return concept.id;
    }
  }
  return null;
}
