"""Cross-institution what-if analysis, ranking, and market-scale estimators."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .audit import AuditPolicy, DEFAULT_POLICY, NodeStatus, audit
from .catalog import CatalogSnapshot
from .equivalence import effective_transcript, recognized_hours, translate_transcript
from .errors import CrossRefError, TransferPathError, ValidationError
from .model import (
    Grade,
    InstitutionKind,
    PASSING_GRADE,
    Program,
    Transcript,
    TranslationStatus,
)
from .planner import DegreePlan, PlanConstraints, generate_plan, select_completion_courses
from .serialize import number_to_json


@dataclass(frozen=True, slots=True)
class CostModel:
    """Tuition and effort figures used by the estimators (annual dollars)."""

    annual_tuition_cc: Fraction = Fraction(3500)
    annual_tuition_univ: Fraction = Fraction(10000)
    credits_per_year: Fraction = Fraction(30)
    hours_per_pathway: Fraction = Fraction(1)
    work_hours_per_year: Fraction = Fraction(2000)

    def __post_init__(self):
        for name in (
            "annual_tuition_cc",
            "annual_tuition_univ",
            "credits_per_year",
            "hours_per_pathway",
            "work_hours_per_year",
        ):
            if getattr(self, name) <= 0:
                raise ValidationError(f"cost model field {name} must be positive")

    def tuition_per_credit(self, kind: InstitutionKind) -> Fraction:
        annual = (
            self.annual_tuition_cc
            if kind is InstitutionKind.COMMUNITY_COLLEGE
            else self.annual_tuition_univ
        )
        return annual / self.credits_per_year


DEFAULT_COST_MODEL = CostModel()


@dataclass(frozen=True, slots=True)
class PathwayScenario:
    num_ccs: int
    programs_per_cc: int
    targets_per_program: int
    num_universities: int

    def __post_init__(self):
        for name in ("num_ccs", "programs_per_cc", "targets_per_program", "num_universities"):
            if getattr(self, name) < 1:
                raise ValidationError(f"scenario field {name} must be positive")


@dataclass(frozen=True, slots=True)
class PathwayCount:
    per_university: int
    statewide: int


@dataclass(frozen=True, slots=True)
class EffortEstimate:
    per_university_person_years: Fraction
    statewide_person_years: Fraction


def count_pathways(scenario: PathwayScenario) -> PathwayCount:
    """How many articulation pathways a state system must maintain by hand."""
    per_university = (
        scenario.num_ccs * scenario.programs_per_cc * scenario.targets_per_program
    )
    return PathwayCount(
        per_university=per_university,
        statewide=per_university * scenario.num_universities,
    )


def estimate_effort(
    scenario: PathwayScenario, cost_model: CostModel = DEFAULT_COST_MODEL
) -> EffortEstimate:
    counts = count_pathways(scenario)
    per_year = cost_model.work_hours_per_year
    return EffortEstimate(
        per_university_person_years=counts.per_university * cost_model.hours_per_pathway / per_year,
        statewide_person_years=counts.statewide * cost_model.hours_per_pathway / per_year,
    )


@dataclass(frozen=True, slots=True)
class LossAssumptions:
    """Inputs for the national excess-tuition estimate.

    Every figure is an explicit assumption; the estimator is pure
    arithmetic over them, never a hardcoded answer.
    """

    population: int = 17_000_000
    community_college_population: int = 6_000_000
    transfer_once_rate: Fraction = Fraction(35, 100)
    transfer_twice_rate: Fraction = Fraction(11, 100)
    lost_years_per_transfer: Fraction = Fraction(1)

    def __post_init__(self):
        if self.population <= 0:
            raise ValidationError("population must be positive")
        if not 0 <= self.community_college_population <= self.population:
            raise ValidationError("community_college_population must be within the population")
        for name in ("transfer_once_rate", "transfer_twice_rate"):
            rate = getattr(self, name)
            if not 0 <= rate <= 1:
                raise ValidationError(f"{name} must lie in [0, 1]")
        if self.lost_years_per_transfer < 0:
            raise ValidationError("lost_years_per_transfer must be non-negative")


DEFAULT_LOSS_ASSUMPTIONS = LossAssumptions()


def estimate_national_loss(
    assumptions: LossAssumptions = DEFAULT_LOSS_ASSUMPTIONS,
    cost_model: CostModel = DEFAULT_COST_MODEL,
) -> Fraction:
    """Annual excess tuition, in dollars, under the stated assumptions.

    Transfer events per year are population x (once rate + twice rate):
    students who transfer twice contribute a second event on top of their
    first. Each event costs lost_years_per_transfer years of tuition at
    the enrollment-weighted blend of the two tuition levels.
    """
    events = assumptions.population * (
        assumptions.transfer_once_rate + assumptions.transfer_twice_rate
    )
    university_population = assumptions.population - assumptions.community_college_population
    blended_tuition = (
        assumptions.community_college_population * cost_model.annual_tuition_cc
        + university_population * cost_model.annual_tuition_univ
    ) / assumptions.population
    return events * assumptions.lost_years_per_transfer * blended_tuition


# ---------------------------------------------------------------------------
# What-if analysis


@dataclass(frozen=True, slots=True)
class TransferAnalysis:
    target_program_id: str
    recognized_hours: Fraction
    applied_hours: Fraction
    unevaluated_count: int
    unsatisfied_leaves: tuple[str, ...]
    completion_courses: tuple[str, ...]
    completion_credit_hours: Fraction
    estimated_terms: int
    estimated_cost: Fraction
    plan: DegreePlan
    exact: bool


@dataclass(frozen=True, slots=True)
class WhatIfOutcome:
    """Per-target result: an analysis, or the error that stopped it."""

    target_program_id: str
    analysis: TransferAnalysis | None = None
    error_code: str | None = None
    error_message: str | None = None

    @property
    def ok(self) -> bool:
        return self.analysis is not None


def _prereq_closure(
    course_ids: frozenset[str], completed: frozenset[str], snapshot: CatalogSnapshot
) -> frozenset[str]:
    out = set(course_ids)
    frontier = list(course_ids)
    while frontier:
        cid = frontier.pop()
        course = snapshot.courses.get(cid)
        if course is None:
            continue
        for prereq in course.prerequisites:
            if prereq not in out and prereq not in completed:
                out.add(prereq)
                frontier.append(prereq)
    return frozenset(out)


def analyze_target(
    transcript: Transcript,
    program: Program,
    snapshot: CatalogSnapshot,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    constraints: PlanConstraints | None = None,
    policy: AuditPolicy = DEFAULT_POLICY,
) -> TransferAnalysis:
    """Full pipeline for one target: translate, audit, select, plan, price."""
    constraints = constraints or PlanConstraints()
    translations = translate_transcript(transcript, program.institution_id, snapshot)
    effective = effective_transcript(translations)
    result = audit(effective, program, policy)

    selection = select_completion_courses(result, program, snapshot.courses)

    # Courses already creditable at the target count as completed for
    # prerequisite purposes and are excluded from the plan.
    completed = frozenset(
        r.course_id
        for r in effective.records
        if r.is_course
        and r.elective_level is None
        and r.grade >= PASSING_GRADE
        and r.course_id in snapshot.courses
        and snapshot.courses[r.course_id].institution_id == program.institution_id
    )
    curriculum = _prereq_closure(selection.courses, completed, snapshot)
    plan = generate_plan(curriculum, completed, constraints, snapshot.courses)

    per_credit = cost_model.tuition_per_credit(
        snapshot.institutions[program.institution_id].kind
    )
    unsatisfied = tuple(
        leaf.id
        for leaf in program.root.leaves()
        if result.node_status[leaf.id] is not NodeStatus.SATISFIED
    )
    return TransferAnalysis(
        target_program_id=program.id,
        recognized_hours=recognized_hours(translations),
        applied_hours=result.applied_credit_hours,
        unevaluated_count=sum(
            1 for t in translations if t.status is TranslationStatus.UNEVALUATED
        ),
        unsatisfied_leaves=unsatisfied,
        completion_courses=tuple(sorted(selection.courses)),
        completion_credit_hours=selection.credit_hours,
        estimated_terms=plan.num_terms,
        estimated_cost=selection.credit_hours * per_credit,
        plan=plan,
        exact=result.exact and selection.exact,
    )


def whatif(
    transcript: Transcript,
    target_program_ids: Sequence[str],
    snapshot: CatalogSnapshot,
    cost_model: CostModel = DEFAULT_COST_MODEL,
    constraints: PlanConstraints | None = None,
    policy: AuditPolicy = DEFAULT_POLICY,
    jobs: int = 1,
) -> list[WhatIfOutcome]:
    """Analyze each target program; outcomes keep the input order.

    A failing target produces an error outcome and never aborts the
    batch. With ``jobs`` > 1 the per-target pipelines, which are pure,
    run on a thread pool; results are assembled in input order so the
    output is identical either way.
    """

    def one(program_id: str) -> WhatIfOutcome:
        program = snapshot.programs.get(program_id)
        if program is None:
            return WhatIfOutcome(
                target_program_id=program_id,
                error_code=CrossRefError.code,
                error_message=f"unknown program {program_id!r}",
            )
        try:
            analysis = analyze_target(
                transcript, program, snapshot, cost_model, constraints, policy
            )
        except TransferPathError as exc:
            return WhatIfOutcome(
                target_program_id=program_id,
                error_code=exc.code,
                error_message=exc.message,
            )
        return WhatIfOutcome(target_program_id=program_id, analysis=analysis)

    if jobs > 1 and len(target_program_ids) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(one, target_program_ids))
    return [one(pid) for pid in target_program_ids]


def rank_programs(analyses: Sequence[TransferAnalysis]) -> list[TransferAnalysis]:
    """Closest-to-completion first: fewest remaining credit hours, then
    cheapest, then program id. Stable and deterministic."""
    return sorted(
        analyses,
        key=lambda a: (a.completion_credit_hours, a.estimated_cost, a.target_program_id),
    )


# ---------------------------------------------------------------------------
# Serialization (stable field order; money as integer cents)


def money_to_cents(amount: Fraction) -> int:
    return round(amount * 100)


def plan_to_json(plan: DegreePlan) -> dict:
    return {
        "terms": [sorted(term) for term in plan.terms],
        "total_credit_hours": number_to_json(plan.total_credit_hours),
    }


def analysis_to_json(analysis: TransferAnalysis) -> dict:
    return {
        "target_program_id": analysis.target_program_id,
        "recognized_hours": number_to_json(analysis.recognized_hours),
        "applied_hours": number_to_json(analysis.applied_hours),
        "unevaluated_count": analysis.unevaluated_count,
        "unsatisfied_leaves": list(analysis.unsatisfied_leaves),
        "completion_courses": list(analysis.completion_courses),
        "completion_credit_hours": number_to_json(analysis.completion_credit_hours),
        "estimated_terms": analysis.estimated_terms,
        "estimated_cost_cents": money_to_cents(analysis.estimated_cost),
        "plan": plan_to_json(analysis.plan),
        "exact": analysis.exact,
    }


def outcome_to_json(outcome: WhatIfOutcome) -> dict:
    if outcome.ok:
        return {"target_program_id": outcome.target_program_id, "analysis": analysis_to_json(outcome.analysis)}
    return {
        "target_program_id": outcome.target_program_id,
        "error": {"code": outcome.error_code, "message": outcome.error_message},
    }
