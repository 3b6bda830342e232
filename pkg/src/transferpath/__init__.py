"""Transfer articulation engine.

Represents degree requirements as Boolean requirement trees, audits
transcripts against them with an optimal course-to-requirement
assignment, models credit recognition versus credit application across
institutions, builds prerequisite-valid completion plans, and answers
what-if transfer queries ranked by proximity to completion and cost.
"""

from .analyzer import (
    CostModel,
    DEFAULT_COST_MODEL,
    DEFAULT_LOSS_ASSUMPTIONS,
    EffortEstimate,
    LossAssumptions,
    PathwayCount,
    PathwayScenario,
    TransferAnalysis,
    WhatIfOutcome,
    analyze_target,
    count_pathways,
    estimate_effort,
    estimate_national_loss,
    rank_programs,
    whatif,
)
from .audit import (
    Assignment,
    AuditPolicy,
    AuditResult,
    DEFAULT_POLICY,
    NodeStatus,
    audit,
    check_assignment,
    evaluate,
    satisfiable,
)
from .catalog import CatalogSnapshot, ingest_catalog, snapshot_from_objects
from .equivalence import (
    applied_vs_recognized,
    effective_transcript,
    translate_transcript,
)
from .errors import (
    CatalogMismatch,
    CrossRefError,
    DuplicateIdError,
    Infeasible,
    InvalidAssignment,
    LimitExceeded,
    OracleTooLarge,
    SchemaError,
    TooLarge,
    TransferPathError,
    UnknownInstitution,
    Unsatisfiable,
    ValidationError,
)
from .model import (
    Course,
    Credential,
    Disposition,
    EquivalenceRule,
    ExamDefinition,
    Grade,
    Institution,
    InstitutionKind,
    NodeKind,
    Program,
    RequirementNode,
    Transcript,
    TranscriptRecord,
    TranslatedRecord,
    TranslationStatus,
    TreeViolation,
    validate_tree,
)
from .oracle import brute_force_audit
from .plancheck import check_plan
from .planner import (
    CompletionSelection,
    DegreePlan,
    PlanConstraints,
    count_plans,
    generate_plan,
    select_completion_courses,
)
from .serialize import parse_program, parse_transcript, serialize_program

__version__ = "0.1.0"
