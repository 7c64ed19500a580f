/** Document shapes served by the assessment service API. */

export type LoStatusValue = "Achieved" | "NotAchieved" | "Suspected" | "Unknown" | "OutOfCourse";

export type SessionStatus = "Active" | "Concluded" | "Exhausted";

export interface TaxonomyCellDoc {
  process_level: number;
  knowledge_dim: number;
}

export interface OutcomeDoc {
  id: string;
  description: string;
  cell: TaxonomyCellDoc;
  required_level: number;
}

export interface ResourceDoc {
  id: string;
  title: string;
  uri: string;
  kind: "introductory" | "deepening" | "alternative";
  tags: string[];
}

export interface ConceptDoc {
  id: string;
  title: string;
  outcomes: OutcomeDoc[];
  resources: ResourceDoc[];
}

export interface EdgeDoc {
  from: string;
  to: string;
  kind: "prerequisite" | "supporting";
}

export interface DomainModelDoc {
  schema_version: string;
  module_id: string;
  title: string;
  concepts: ConceptDoc[];
  edges: EdgeDoc[];
}

export interface OverlayReportDoc {
  schema_version: string;
  course_id: string;
  learner_id: string;
  now: string;
  no_statement: boolean;
  statuses: Record<string, LoStatusValue>;
  deficits: string[];
  frontier: string[];
}

/** Item as served to learners; the service never includes the answer key. */
export interface PublicItemDoc {
  id: string;
  lo_id: string;
  cell: TaxonomyCellDoc;
  stem: string;
  options: string[];
  max_seconds: number;
}

export interface SessionResultDoc {
  lo_id: string;
  localized_level: number;
  exact: boolean;
  items_used: number;
}

export interface SessionResponseDoc {
  session_id: string;
  status: SessionStatus;
  interval: [number, number];
  item?: PublicItemDoc;
  result?: SessionResultDoc;
}

export interface PlanDoc {
  target_concept: string;
  steps: string[];
  variant_of: string | null;
  unmet_lo_count: number;
}

export interface ResourceRecDoc {
  lo_id: string;
  preference_tags_applied: string[];
  ranked: ResourceDoc[];
}

export interface RecommendationsDoc {
  course_id: string;
  target_concept: string;
  plans: PlanDoc[];
  resources: ResourceRecDoc[];
}

export interface ChallengeDoc {
  concept_id: string;
  next_level: number;
  time_factor: number;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}
