"""JSON (de)serialization for every engine type.

The catalog text convention is UTF-8 JSON with lower_snake_case field
names. Numbers that must stay exact (credit hours, scores, money) are
emitted as ints when integral, as floats when the decimal repr
round-trips exactly, and as "p/q" strings otherwise; parsing accepts all
three. Field order is fixed so identical values serialize to identical
bytes.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any, Mapping

from .errors import SchemaError, ValidationError
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
    validate_tree,
)

# ---------------------------------------------------------------------------
# Exact numbers


def number_to_json(value: Fraction) -> int | float | str:
    if value.denominator == 1:
        return int(value)
    as_float = float(value)
    if Fraction(repr(as_float)) == value:
        return as_float
    return f"{value.numerator}/{value.denominator}"


def number_from_json(raw: Any, where: str = "number") -> Fraction:
    if isinstance(raw, bool):
        raise SchemaError(f"{where}: expected a number, got a boolean")
    if isinstance(raw, (int, Fraction)):
        return Fraction(raw)
    if isinstance(raw, float):
        return Fraction(repr(raw))
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise SchemaError(f"{where}: cannot parse number {raw!r}")
    raise SchemaError(f"{where}: expected a number, got {type(raw).__name__}")


def loads(text: str) -> Any:
    """json.loads with floats parsed to exact Fractions."""
    try:
        return json.loads(text, parse_float=lambda s: Fraction(s))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from exc


class _Encoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, Fraction):
            return number_to_json(o)
        return super().default(o)


def dumps(obj: Any, indent: int | None = None) -> str:
    if indent is None:
        return json.dumps(obj, cls=_Encoder, separators=(",", ":"))
    return json.dumps(obj, cls=_Encoder, indent=indent)


def _require(obj: Mapping, key: str, where: str) -> Any:
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{where}: expected an object")
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    return obj[key]


def _string(obj: Mapping, key: str, where: str) -> str:
    value = _require(obj, key, where)
    if not isinstance(value, str) or not value:
        raise SchemaError(f"{where}.{key}: expected a non-empty string")
    return value


# ---------------------------------------------------------------------------
# Catalog entities


def institution_to_json(inst: Institution) -> dict:
    return {"id": inst.id, "name": inst.name, "kind": inst.kind.value}


def institution_from_json(obj: Mapping) -> Institution:
    where = f"institution {obj.get('id', '?')}" if isinstance(obj, Mapping) else "institution"
    kind_raw = _string(obj, "kind", where)
    try:
        kind = InstitutionKind(kind_raw)
    except ValueError:
        raise SchemaError(f"{where}: unknown kind {kind_raw!r}")
    return Institution(id=_string(obj, "id", where), name=_string(obj, "name", where), kind=kind)


def course_to_json(course: Course) -> dict:
    return {
        "id": course.id,
        "institution_id": course.institution_id,
        "subject_code": course.subject_code,
        "number": course.number,
        "title": course.title,
        "credit_hours": number_to_json(course.credit_hours),
        "prerequisites": sorted(course.prerequisites),
    }


def course_from_json(obj: Mapping) -> Course:
    where = f"course {obj.get('id', '?')}" if isinstance(obj, Mapping) else "course"
    prereqs = obj.get("prerequisites", [])
    if not isinstance(prereqs, list) or not all(isinstance(p, str) for p in prereqs):
        raise SchemaError(f"{where}: prerequisites must be a list of course ids")
    return Course(
        id=_string(obj, "id", where),
        institution_id=_string(obj, "institution_id", where),
        subject_code=_string(obj, "subject_code", where),
        number=_string(obj, "number", where),
        title=_string(obj, "title", where),
        credit_hours=number_from_json(_require(obj, "credit_hours", where), f"{where}.credit_hours"),
        prerequisites=frozenset(prereqs),
    )


def exam_to_json(exam: ExamDefinition) -> dict:
    return {"id": exam.id, "title": exam.title}


def exam_from_json(obj: Mapping) -> ExamDefinition:
    where = f"exam {obj.get('id', '?')}" if isinstance(obj, Mapping) else "exam"
    return ExamDefinition(id=_string(obj, "id", where), title=_string(obj, "title", where))


# ---------------------------------------------------------------------------
# Requirement trees and programs


def node_to_json(node: RequirementNode) -> dict:
    out: dict[str, Any] = {"id": node.id, "label": node.label, "kind": node.kind.value}
    if node.kind in (NodeKind.ALL, NodeKind.ANY, NodeKind.CHOOSE):
        if node.kind is NodeKind.CHOOSE:
            out["choose_k"] = node.choose_k
        out["children"] = [node_to_json(c) for c in node.children]
    elif node.kind is NodeKind.COURSE:
        out["course_id"] = node.course_id
        out["min_grade"] = node.min_grade.value
    elif node.kind is NodeKind.CREDITS:
        out["min_credit_hours"] = number_to_json(node.min_credit_hours)
        out["course_pool"] = sorted(node.course_pool)
        if node.accepts_electives:
            out["accepts_electives"] = True
    elif node.kind is NodeKind.EXAM:
        out["exam_id"] = node.exam_id
        out["min_score"] = number_to_json(node.min_score)
    if node.shareable:
        out["shareable"] = True
    return out


def node_from_json(obj: Mapping) -> RequirementNode:
    where = f"node {obj.get('id', '?')}" if isinstance(obj, Mapping) else "node"
    kind_raw = _string(obj, "kind", where)
    try:
        kind = NodeKind(kind_raw)
    except ValueError:
        raise SchemaError(f"{where}: unknown node kind {kind_raw!r}")

    node_id = _string(obj, "id", where)
    label = _string(obj, "label", where)
    shareable = bool(obj.get("shareable", False))

    if kind in (NodeKind.ALL, NodeKind.ANY, NodeKind.CHOOSE):
        children_raw = _require(obj, "children", where)
        if not isinstance(children_raw, list):
            raise SchemaError(f"{where}: children must be a list")
        children = tuple(node_from_json(c) for c in children_raw)
        choose_k = None
        if kind is NodeKind.CHOOSE:
            choose_k = _require(obj, "choose_k", where)
            if not isinstance(choose_k, int) or isinstance(choose_k, bool):
                raise SchemaError(f"{where}: choose_k must be an integer")
        return RequirementNode(
            id=node_id, label=label, kind=kind, children=children,
            choose_k=choose_k, shareable=shareable,
        )
    if kind is NodeKind.COURSE:
        return RequirementNode(
            id=node_id, label=label, kind=kind,
            course_id=_string(obj, "course_id", where),
            min_grade=Grade.parse(_string(obj, "min_grade", where)),
            shareable=shareable,
        )
    if kind is NodeKind.CREDITS:
        pool_raw = obj.get("course_pool", [])
        if not isinstance(pool_raw, list) or not all(isinstance(c, str) for c in pool_raw):
            raise SchemaError(f"{where}: course_pool must be a list of course ids")
        return RequirementNode(
            id=node_id, label=label, kind=kind,
            min_credit_hours=number_from_json(
                _require(obj, "min_credit_hours", where), f"{where}.min_credit_hours"
            ),
            course_pool=frozenset(pool_raw),
            accepts_electives=bool(obj.get("accepts_electives", False)),
            shareable=shareable,
        )
    return RequirementNode(
        id=node_id, label=label, kind=kind,
        exam_id=_string(obj, "exam_id", where),
        min_score=number_from_json(_require(obj, "min_score", where), f"{where}.min_score"),
        shareable=shareable,
    )


def program_to_json(program: Program) -> dict:
    return {
        "id": program.id,
        "institution_id": program.institution_id,
        "credential": program.credential.value,
        "title": program.title,
        "total_credit_hours": number_to_json(program.total_credit_hours),
        "root": node_to_json(program.root),
    }


def program_from_json(obj: Mapping) -> Program:
    where = f"program {obj.get('id', '?')}" if isinstance(obj, Mapping) else "program"
    cred_raw = _string(obj, "credential", where)
    try:
        credential = Credential(cred_raw)
    except ValueError:
        raise SchemaError(f"{where}: unknown credential {cred_raw!r}")
    total = number_from_json(_require(obj, "total_credit_hours", where), f"{where}.total_credit_hours")
    if total <= 0:
        raise ValidationError(f"{where}: total_credit_hours must be positive")
    return Program(
        id=_string(obj, "id", where),
        institution_id=_string(obj, "institution_id", where),
        credential=credential,
        title=_string(obj, "title", where),
        root=node_from_json(_require(obj, "root", where)),
        total_credit_hours=total,
    )


def parse_program(document: str, courses: Mapping[str, Course] | None = None,
                  exams: Mapping[str, ExamDefinition] | None = None) -> Program:
    """Parse and validate a single program document.

    Raises SchemaError for malformed documents, DuplicateIdError for
    repeated node ids, and ValidationError for any other tree violation.
    Round-trips with :func:`serialize_program`.
    """
    program = program_from_json(loads(document))
    violations = validate_tree(program.root, courses, exams)
    if violations:
        from .errors import DuplicateIdError

        if all(v.code == "DuplicateNodeId" for v in violations):
            raise DuplicateIdError(
                f"program {program.id}: duplicate node ids",
                detail=[dataclasses.asdict(v) for v in violations],
            )
        raise ValidationError(
            f"program {program.id}: {violations[0].message}",
            detail=[dataclasses.asdict(v) for v in violations],
        )
    return program


def serialize_program(program: Program) -> str:
    return dumps(program_to_json(program), indent=2)


# ---------------------------------------------------------------------------
# Equivalences


def equivalence_to_json(rule: EquivalenceRule) -> dict:
    out = {
        "source_course_id": rule.source_course_id,
        "target_institution_id": rule.target_institution_id,
        "disposition": rule.disposition.value,
    }
    if rule.target_course_id is not None:
        out["target_course_id"] = rule.target_course_id
    out["evaluated_on"] = rule.evaluated_on
    return out


def equivalence_from_json(obj: Mapping) -> EquivalenceRule:
    where = "equivalence"
    disp_raw = _string(obj, "disposition", where)
    try:
        disposition = Disposition(disp_raw)
    except ValueError:
        raise SchemaError(f"{where}: unknown disposition {disp_raw!r}")
    target_course = obj.get("target_course_id")
    if target_course is not None and not isinstance(target_course, str):
        raise SchemaError(f"{where}: target_course_id must be a string")
    evaluated = obj.get("evaluated_on", "")
    if not isinstance(evaluated, str):
        raise SchemaError(f"{where}: evaluated_on must be a string date")
    return EquivalenceRule(
        source_course_id=_string(obj, "source_course_id", where),
        target_institution_id=_string(obj, "target_institution_id", where),
        disposition=disposition,
        target_course_id=target_course,
        evaluated_on=evaluated,
    )


# ---------------------------------------------------------------------------
# Transcripts


def record_to_json(record: TranscriptRecord) -> dict:
    out: dict[str, Any] = {"institution_id": record.institution_id}
    if record.is_course:
        out["course_id"] = record.course_id
        out["grade"] = record.grade.value
        out["credit_hours"] = number_to_json(record.credit_hours)
    else:
        out["exam_id"] = record.exam_id
        out["score"] = number_to_json(record.score)
    out["term_index"] = record.term_index
    if record.elective_level is not None:
        out["elective_level"] = record.elective_level
    return out


def record_from_json(obj: Mapping) -> TranscriptRecord:
    where = "transcript record"
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{where}: expected an object")
    term_index = obj.get("term_index", 0)
    if not isinstance(term_index, int) or isinstance(term_index, bool):
        raise SchemaError(f"{where}: term_index must be an integer")
    elective = obj.get("elective_level")
    if elective is not None and elective not in ("lower", "upper"):
        raise SchemaError(f"{where}: elective_level must be 'lower' or 'upper'")
    institution = _string(obj, "institution_id", where)
    if "course_id" in obj:
        return TranscriptRecord(
            institution_id=institution,
            course_id=_string(obj, "course_id", where),
            grade=Grade.parse(_string(obj, "grade", where)),
            credit_hours=number_from_json(_require(obj, "credit_hours", where), f"{where}.credit_hours"),
            term_index=term_index,
            elective_level=elective,
        )
    if "exam_id" in obj:
        return TranscriptRecord(
            institution_id=institution,
            exam_id=_string(obj, "exam_id", where),
            score=number_from_json(_require(obj, "score", where), f"{where}.score"),
            term_index=term_index,
        )
    raise SchemaError(f"{where}: needs course_id or exam_id")


def transcript_to_json(transcript: Transcript) -> dict:
    return {"records": [record_to_json(r) for r in transcript.records]}


def transcript_from_json(obj: Mapping) -> Transcript:
    records_raw = _require(obj, "records", "transcript")
    if not isinstance(records_raw, list):
        raise SchemaError("transcript: records must be a list")
    return Transcript(tuple(record_from_json(r) for r in records_raw))


def parse_transcript(document: str, courses: Mapping[str, Course] | None = None) -> Transcript:
    """Parse a transcript document, checking hours against the catalog."""
    transcript = transcript_from_json(loads(document))
    if courses:
        for record in transcript.records:
            if record.is_course and record.course_id in courses:
                expected = courses[record.course_id].credit_hours
                if record.credit_hours != expected:
                    raise ValidationError(
                        f"record {record.course_id}: credit_hours {record.credit_hours} "
                        f"does not match catalog value {expected}"
                    )
    return transcript


def translated_record_to_json(tr: TranslatedRecord) -> dict:
    out: dict[str, Any] = {
        "source": record_to_json(tr.source),
        "status": tr.status.value,
    }
    if tr.target_course_id is not None:
        out["target_course_id"] = tr.target_course_id
    if tr.elective_level is not None:
        out["elective_level"] = tr.elective_level
    out["recognized_credit_hours"] = number_to_json(tr.recognized_credit_hours)
    return out
