"""Domain model: grades, courses, requirement trees, programs, transcripts.

All types are immutable after construction and safe to share across
concurrent tasks. Credit hours, scores, and money are exact rationals
(``fractions.Fraction``); nothing in the engine does float arithmetic.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

from .errors import ValidationError

# ---------------------------------------------------------------------------
# Grades


@functools.total_ordering
class Grade(enum.Enum):
    """Five-letter grade scale with the standard 4.0 point mapping."""

    A = "A"
    B = "B"
    C = "C"
    D = "D"
    F = "F"

    @property
    def points(self) -> Fraction:
        return Fraction(_GRADE_RANK[self])

    def __lt__(self, other: object):
        if not isinstance(other, Grade):
            return NotImplemented
        return _GRADE_RANK[self] < _GRADE_RANK[other]

    @classmethod
    def parse(cls, letter: str) -> "Grade":
        try:
            return cls(letter.strip().upper())
        except (ValueError, AttributeError):
            raise ValidationError(f"unknown grade letter: {letter!r}")


_GRADE_RANK = {Grade.A: 4, Grade.B: 3, Grade.C: 2, Grade.D: 1, Grade.F: 0}

#: Lowest grade that earns credit toward hour-counting pools.
PASSING_GRADE = Grade.D


class InstitutionKind(enum.Enum):
    COMMUNITY_COLLEGE = "community_college"
    UNIVERSITY = "university"


class Credential(enum.Enum):
    ASSOCIATE = "associate"
    BACHELOR = "bachelor"


@dataclass(frozen=True, slots=True)
class Institution:
    id: str
    name: str
    kind: InstitutionKind


@dataclass(frozen=True, slots=True)
class Course:
    id: str
    institution_id: str
    subject_code: str
    number: str
    title: str
    credit_hours: Fraction
    prerequisites: frozenset[str] = frozenset()

    def __post_init__(self):
        if self.credit_hours <= 0:
            raise ValidationError(f"course {self.id}: credit_hours must be positive")


@dataclass(frozen=True, slots=True)
class ExamDefinition:
    id: str
    title: str


# ---------------------------------------------------------------------------
# Requirement trees


class NodeKind(enum.Enum):
    ALL = "all"
    ANY = "any"
    CHOOSE = "choose"
    CREDITS = "credits"
    COURSE = "course"
    EXAM = "exam"


COMPOSITE_KINDS = frozenset({NodeKind.ALL, NodeKind.ANY, NodeKind.CHOOSE})
LEAF_KINDS = frozenset({NodeKind.CREDITS, NodeKind.COURSE, NodeKind.EXAM})


@dataclass(frozen=True, slots=True)
class RequirementNode:
    """One node of a Boolean requirement tree.

    ALL / ANY / CHOOSE are composites over ``children``; COURSE, CREDITS,
    and EXAM are leaves. A CHOOSE node is satisfied by ``choose_k`` of its
    children, a CREDITS leaf by ``min_credit_hours`` drawn from courses in
    ``course_pool`` (plus any elective transfer credit when
    ``accepts_electives`` is set).
    """

    id: str
    label: str
    kind: NodeKind
    children: tuple["RequirementNode", ...] = ()
    choose_k: int | None = None
    min_credit_hours: Fraction | None = None
    course_pool: frozenset[str] = frozenset()
    accepts_electives: bool = False
    course_id: str | None = None
    min_grade: Grade | None = None
    exam_id: str | None = None
    min_score: Fraction | None = None
    shareable: bool = False

    @property
    def is_leaf(self) -> bool:
        return self.kind in LEAF_KINDS

    def iter_nodes(self) -> Iterator["RequirementNode"]:
        """Preorder walk of the subtree rooted here."""
        yield self
        for child in self.children:
            yield from child.iter_nodes()

    def leaves(self) -> Iterator["RequirementNode"]:
        for node in self.iter_nodes():
            if node.is_leaf:
                yield node


@dataclass(frozen=True, slots=True)
class Program:
    id: str
    institution_id: str
    credential: Credential
    title: str
    root: RequirementNode
    total_credit_hours: Fraction


# ---------------------------------------------------------------------------
# Transcripts


@dataclass(frozen=True, slots=True)
class TranscriptRecord:
    """One transcript line: either a completed course or an exam score.

    Exactly one of ``course_id`` / ``exam_id`` is set. Exam records carry
    no credit hours. ``elective_level`` marks transfer credit recognized
    only as a lower/upper-division elective; such records can satisfy only
    CREDITS requirements flagged ``accepts_electives``.
    """

    institution_id: str
    course_id: str | None = None
    grade: Grade | None = None
    credit_hours: Fraction = Fraction(0)
    term_index: int = 0
    exam_id: str | None = None
    score: Fraction | None = None
    elective_level: str | None = None

    def __post_init__(self):
        if (self.course_id is None) == (self.exam_id is None):
            raise ValidationError(
                "transcript record must have exactly one of course_id or exam_id"
            )
        if self.course_id is not None:
            if self.grade is None:
                raise ValidationError(f"course record {self.course_id}: grade required")
            if self.credit_hours <= 0:
                raise ValidationError(
                    f"course record {self.course_id}: credit_hours must be positive"
                )
        else:
            if self.score is None:
                raise ValidationError(f"exam record {self.exam_id}: score required")
            if self.credit_hours != 0:
                raise ValidationError("exam records carry no credit hours")
        if self.term_index < 0:
            raise ValidationError("term_index must be non-negative")
        if self.elective_level not in (None, "lower", "upper"):
            raise ValidationError(f"bad elective_level: {self.elective_level!r}")

    @property
    def is_course(self) -> bool:
        return self.course_id is not None


@dataclass(frozen=True, slots=True)
class Transcript:
    records: tuple[TranscriptRecord, ...] = ()

    @property
    def total_credit_hours(self) -> Fraction:
        return sum((r.credit_hours for r in self.records), Fraction(0))

    def with_records(self, extra: tuple[TranscriptRecord, ...]) -> "Transcript":
        return Transcript(self.records + tuple(extra))


# ---------------------------------------------------------------------------
# Tree validation


@dataclass(frozen=True, slots=True)
class TreeViolation:
    code: str
    node_id: str
    message: str


def validate_tree(
    root: RequirementNode,
    courses: Mapping[str, Course] | None = None,
    exams: Mapping[str, ExamDefinition] | None = None,
) -> list[TreeViolation]:
    """Check every requirement-tree invariant, returning violations.

    ``courses``/``exams`` enable reference checks; pass None to skip them
    (used while parsing documents before a catalog exists).
    """
    violations: list[TreeViolation] = []
    seen_ids: set[str] = set()

    for node in root.iter_nodes():
        if node.id in seen_ids:
            violations.append(
                TreeViolation("DuplicateNodeId", node.id, f"node id {node.id!r} repeats")
            )
        seen_ids.add(node.id)

        if node.kind in COMPOSITE_KINDS:
            if not node.children:
                violations.append(
                    TreeViolation("EmptyComposite", node.id, f"{node.kind.value} node has no children")
                )
            if node.kind is NodeKind.CHOOSE:
                if node.choose_k is None or node.choose_k < 1:
                    violations.append(
                        TreeViolation("ChooseKInvalid", node.id, "choose_k must be a positive integer")
                    )
                elif node.choose_k > len(node.children):
                    violations.append(
                        TreeViolation(
                            "ChooseKInvalid",
                            node.id,
                            f"choose_k={node.choose_k} exceeds {len(node.children)} children",
                        )
                    )
            continue

        if node.children:
            violations.append(
                TreeViolation("LeafWithChildren", node.id, f"{node.kind.value} leaf has children")
            )

        if node.kind is NodeKind.COURSE:
            if node.course_id is None or node.min_grade is None:
                violations.append(
                    TreeViolation("MissingField", node.id, "COURSE leaf needs course_id and min_grade")
                )
            elif courses is not None and node.course_id not in courses:
                violations.append(
                    TreeViolation("DanglingCourse", node.id, f"unknown course {node.course_id!r}")
                )
        elif node.kind is NodeKind.CREDITS:
            if node.min_credit_hours is None or node.min_credit_hours <= 0:
                violations.append(
                    TreeViolation("MissingField", node.id, "CREDITS leaf needs positive min_credit_hours")
                )
            if not node.course_pool and not node.accepts_electives:
                violations.append(
                    TreeViolation("MissingField", node.id, "CREDITS leaf needs a course_pool or accepts_electives")
                )
            if courses is not None:
                for cid in sorted(node.course_pool):
                    if cid not in courses:
                        violations.append(
                            TreeViolation("DanglingCourse", node.id, f"unknown pool course {cid!r}")
                        )
        elif node.kind is NodeKind.EXAM:
            if node.exam_id is None or node.min_score is None:
                violations.append(
                    TreeViolation("MissingField", node.id, "EXAM leaf needs exam_id and min_score")
                )
            elif exams is not None and node.exam_id not in exams:
                violations.append(
                    TreeViolation("DanglingExam", node.id, f"unknown exam {node.exam_id!r}")
                )

    return violations


# ---------------------------------------------------------------------------
# Equivalences


class Disposition(enum.Enum):
    EQUIVALENT = "equivalent"
    ELECTIVE_LOWER = "elective_lower"
    ELECTIVE_UPPER = "elective_upper"
    DENIED = "denied"


@dataclass(frozen=True, slots=True)
class EquivalenceRule:
    source_course_id: str
    target_institution_id: str
    disposition: Disposition
    target_course_id: str | None = None
    evaluated_on: str = ""

    def __post_init__(self):
        if self.disposition is Disposition.EQUIVALENT and not self.target_course_id:
            raise ValidationError(
                f"equivalence for {self.source_course_id}: EQUIVALENT needs target_course_id"
            )


class TranslationStatus(enum.Enum):
    EQUIVALENT = "equivalent"
    ELECTIVE = "elective"
    UNEVALUATED = "unevaluated"
    DENIED = "denied"


@dataclass(frozen=True, slots=True)
class TranslatedRecord:
    source: TranscriptRecord
    status: TranslationStatus
    target_course_id: str | None = None
    elective_level: str | None = None
    recognized_credit_hours: Fraction = Fraction(0)
