import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from transferpath import (
    Transcript,
    TranslationStatus,
    UnknownInstitution,
    applied_vs_recognized,
    brute_force_audit,
    effective_transcript,
    snapshot_from_objects,
    translate_transcript,
)

from instances import INST, random_audit_instance


def test_two_cc_transfer_translation_statuses(snapshot, transfer_transcript):
    translations = translate_transcript(transfer_transcript, "summit-state", snapshot)
    statuses = [t.status for t in translations]
    assert statuses.count(TranslationStatus.ELECTIVE) == 2
    assert statuses.count(TranslationStatus.UNEVALUATED) == 2
    # Order is preserved and per-record.
    assert [t.source.course_id for t in translations] == [
        r.course_id for r in transfer_transcript.records
    ]
    assert sum(t.recognized_credit_hours for t in translations) == Fraction(8)


def test_equivalent_rule_carries_full_hours(snapshot, transfer_transcript):
    translations = translate_transcript(transfer_transcript, "alameda-tech", snapshot)
    assert all(t.status is TranslationStatus.EQUIVALENT for t in translations)
    assert [t.target_course_id for t in translations] == [
        "at-cs101", "at-cs102", "at-math200", "at-net210",
    ]
    assert sum(t.recognized_credit_hours for t in translations) == Fraction(14)


def test_empty_transcript_translates_to_empty_list(snapshot):
    assert translate_transcript(Transcript(), "summit-state", snapshot) == []


def test_unknown_institution_raises(snapshot, transfer_transcript):
    with pytest.raises(UnknownInstitution):
        translate_transcript(transfer_transcript, "nowhere-u", snapshot)


def test_native_records_pass_through(snapshot):
    from transferpath import Grade, TranscriptRecord

    native = Transcript((TranscriptRecord(
        institution_id="summit-state", course_id="ssu-cs101",
        grade=Grade.A, credit_hours=Fraction(4),
    ),))
    [translated] = translate_transcript(native, "summit-state", snapshot)
    assert translated.status is TranslationStatus.EQUIVALENT
    assert translated.target_course_id == "ssu-cs101"
    assert translated.recognized_credit_hours == Fraction(4)


def test_translation_is_per_record_independent(snapshot, transfer_transcript):
    whole = translate_transcript(transfer_transcript, "alameda-tech", snapshot)
    records = transfer_transcript.records
    first = translate_transcript(Transcript(records[:2]), "alameda-tech", snapshot)
    second = translate_transcript(Transcript(records[2:]), "alameda-tech", snapshot)
    assert whole == first + second


def test_recognized_without_application(snapshot, transfer_transcript):
    recognized, applied = applied_vs_recognized(
        transfer_transcript, snapshot.programs["ssu-bs-cs"], snapshot
    )
    assert recognized == Fraction(8)
    assert applied == 0


def test_perfect_articulation_applies_everything(snapshot, transfer_transcript):
    recognized, applied = applied_vs_recognized(
        transfer_transcript, snapshot.programs["at-bs-cs"], snapshot
    )
    assert recognized == applied == Fraction(14)


def test_mixed_translation_values_match_oracle(snapshot, transfer_transcript):
    program = snapshot.programs["at-bs-cs"]
    translations = translate_transcript(transfer_transcript, program.institution_id, snapshot)
    effective = effective_transcript(translations)
    oracle = brute_force_audit(effective, program)
    recognized, applied = applied_vs_recognized(transfer_transcript, program, snapshot)
    assert applied == oracle.applied_credit_hours


def test_denied_records_recognize_nothing(snapshot):
    from transferpath import Disposition, EquivalenceRule, Grade, TranscriptRecord

    rules = [EquivalenceRule(
        source_course_id="rb-cs101", target_institution_id="sagebrush-cc",
        disposition=Disposition.DENIED, evaluated_on="2025-01-01",
    )]
    small = snapshot_from_objects(
        institutions=list(snapshot.institutions.values()),
        courses=list(snapshot.courses.values()),
        programs=list(snapshot.programs.values()),
        equivalences=rules,
    )
    transcript = Transcript((TranscriptRecord(
        institution_id="riverbend-cc", course_id="rb-cs101",
        grade=Grade.A, credit_hours=Fraction(4),
    ),))
    [translated] = translate_transcript(transcript, "sagebrush-cc", small)
    assert translated.status is TranslationStatus.DENIED
    assert translated.recognized_credit_hours == 0


@given(st.integers(min_value=0, max_value=10**9))
@settings(max_examples=60, deadline=None)
def test_applied_never_exceeds_recognized_never_exceeds_total(seed):
    from transferpath import Institution, InstitutionKind

    rng = random.Random(seed)
    courses, program, transcript = random_audit_instance(rng)
    snap = snapshot_from_objects(
        institutions=[Institution(id=INST, name="Test U", kind=InstitutionKind.UNIVERSITY)],
        courses=list(courses.values()),
        programs=[program],
    )
    recognized, applied = applied_vs_recognized(transcript, program, snap)
    assert applied <= recognized <= transcript.total_credit_hours
