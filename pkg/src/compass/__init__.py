"""Competence-map assessment engine.

Overlay a prerequisite concept map with an event-sourced learner model,
localize gaps with adaptive micro-assessments along taxonomy levels, and
recommend prerequisite-consistent learning paths and resources.
"""

from .assessment import (
    SessionResult,
    SessionState,
    next_item,
    session_result,
    start_session,
    submit_answer,
)
from .domain import (
    Concept,
    DomainModel,
    Edge,
    LearningOutcome,
    LearningResource,
    TaxonomyCell,
    ValidationReport,
    merge_models,
    prerequisite_closure,
    topological_order,
    validate_domain_model,
)
from .errors import EngineError, ParseError, SchemaError, VersionError
from .items import (
    AssessmentItem,
    CoverageMatrix,
    ItemPool,
    coverage_matrix,
    items_for,
    score_response,
    validate_pool,
)
from .learner import (
    DecayParams,
    EvidenceRecord,
    IndividualModel,
    LoState,
    confirmed_level,
    is_achieved,
    lo_state,
    mastery,
    record_evidence,
)
from .overlay import ChallengeSuggestion, LoStatus, OverlayReport, challenge_check, find_anchors, overlay
from .recommend import LearningPlan, ResourceRecommendation, recommend_path, recommend_resources
from .simulate import SimulatedLearner

__version__ = "0.1.0"
