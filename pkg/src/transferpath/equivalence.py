"""Transcript translation across institutions.

Translation (credit recognition) is separate from application: a record
can be recognized at the receiving institution, as an equivalent course
or as generic elective credit, and still satisfy nothing. The audit over
the translated transcript decides application.
"""

from __future__ import annotations

from fractions import Fraction
from dataclasses import replace

from .audit import AuditPolicy, DEFAULT_POLICY, audit
from .catalog import CatalogSnapshot
from .errors import UnknownInstitution
from .model import (
    Disposition,
    Program,
    Transcript,
    TranscriptRecord,
    TranslatedRecord,
    TranslationStatus,
)

_ELECTIVE_LEVEL = {
    Disposition.ELECTIVE_LOWER: "lower",
    Disposition.ELECTIVE_UPPER: "upper",
}


def translate_record(
    record: TranscriptRecord, target_institution_id: str, snapshot: CatalogSnapshot
) -> TranslatedRecord:
    if not record.is_course:
        # Exam scores are not subject to course articulation; they pass
        # through untouched when already reported at the target and are
        # left unevaluated otherwise.
        status = (
            TranslationStatus.EQUIVALENT
            if record.institution_id == target_institution_id
            else TranslationStatus.UNEVALUATED
        )
        return TranslatedRecord(source=record, status=status)

    course = snapshot.courses.get(record.course_id)
    if course is not None and course.institution_id == target_institution_id:
        # Native coursework needs no articulation.
        return TranslatedRecord(
            source=record,
            status=TranslationStatus.EQUIVALENT,
            target_course_id=record.course_id,
            recognized_credit_hours=record.credit_hours,
        )

    rule = snapshot.equivalence_for(record.course_id, target_institution_id)
    if rule is None:
        return TranslatedRecord(source=record, status=TranslationStatus.UNEVALUATED)
    if rule.disposition is Disposition.DENIED:
        return TranslatedRecord(source=record, status=TranslationStatus.DENIED)
    if rule.disposition is Disposition.EQUIVALENT:
        return TranslatedRecord(
            source=record,
            status=TranslationStatus.EQUIVALENT,
            target_course_id=rule.target_course_id,
            recognized_credit_hours=record.credit_hours,
        )
    return TranslatedRecord(
        source=record,
        status=TranslationStatus.ELECTIVE,
        elective_level=_ELECTIVE_LEVEL[rule.disposition],
        recognized_credit_hours=record.credit_hours,
    )


def translate_transcript(
    transcript: Transcript, target_institution_id: str, snapshot: CatalogSnapshot
) -> list[TranslatedRecord]:
    """Translate each record for the target institution, order preserved."""
    if target_institution_id not in snapshot.institutions:
        raise UnknownInstitution(f"unknown institution {target_institution_id!r}")
    return [translate_record(r, target_institution_id, snapshot) for r in transcript.records]


def effective_transcript(translations: list[TranslatedRecord]) -> Transcript:
    """The transcript as the receiving institution sees it.

    Equivalent records are rewritten to the target course (keeping the
    hours actually earned), electives are marked as such, and denied or
    unevaluated records stay inert under their source ids.
    """
    records = []
    for tr in translations:
        record = tr.source
        if tr.status is TranslationStatus.EQUIVALENT and record.is_course:
            if tr.target_course_id != record.course_id:
                record = replace(record, course_id=tr.target_course_id)
        elif tr.status is TranslationStatus.ELECTIVE:
            record = replace(record, elective_level=tr.elective_level)
        records.append(record)
    return Transcript(tuple(records))


def recognized_hours(translations: list[TranslatedRecord]) -> Fraction:
    return sum((t.recognized_credit_hours for t in translations), Fraction(0))


def applied_vs_recognized(
    transcript: Transcript,
    target_program: Program,
    snapshot: CatalogSnapshot,
    policy: AuditPolicy = DEFAULT_POLICY,
) -> tuple[Fraction, Fraction]:
    """(recognized_hours, applied_hours) for a transcript at a target program."""
    translations = translate_transcript(transcript, target_program.institution_id, snapshot)
    # No catalog-hours re-check here: equivalent records legitimately carry
    # the hours earned at the source, not the target course's hours.
    result = audit(effective_transcript(translations), target_program, policy)
    return recognized_hours(translations), result.applied_credit_hours
