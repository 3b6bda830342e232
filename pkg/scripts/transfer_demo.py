#!/usr/bin/env python3
"""End-to-end walkthrough of the what-if pipeline on the demo catalog.

A student with coursework at two community colleges compares every
bachelor program in the catalog: translation, audit, completion
selection, term planning, and ranking.
"""

from pathlib import Path

from transferpath import (
    Credential,
    TranslationStatus,
    ingest_catalog,
    parse_transcript,
    rank_programs,
    translate_transcript,
    whatif,
)
from transferpath.analyzer import money_to_cents

ROOT = Path(__file__).resolve().parent.parent


def main() -> None:
    snapshot = ingest_catalog(ROOT / "fixtures" / "catalog")
    transcript = parse_transcript(
        (ROOT / "fixtures" / "transcripts" / "two_cc_transfer.json").read_text("utf-8"),
        snapshot.courses,
    )
    print(f"catalog snapshot v{snapshot.version}: "
          f"{len(snapshot.institutions)} institutions, {len(snapshot.courses)} courses, "
          f"{len(snapshot.programs)} programs, {len(snapshot.equivalences)} equivalence rules")
    print(f"transcript: {len(transcript.records)} courses, "
          f"{transcript.total_credit_hours} credit hours\n")

    for institution_id in ("summit-state", "alameda-tech"):
        translations = translate_transcript(transcript, institution_id, snapshot)
        print(f"recognition at {institution_id}:")
        for t in translations:
            label = t.status.value
            if t.status is TranslationStatus.EQUIVALENT:
                label += f" -> {t.target_course_id}"
            elif t.status is TranslationStatus.ELECTIVE:
                label += f" ({t.elective_level}-division)"
            print(f"  {t.source.course_id:<12} {label}")
        print()

    targets = sorted(p.id for p in snapshot.programs.values()
                     if p.credential is Credential.BACHELOR)
    outcomes = whatif(transcript, targets, snapshot)
    ranked = rank_programs([o.analysis for o in outcomes if o.ok])

    print("programs, closest to completion first:")
    for analysis in ranked:
        program = snapshot.programs[analysis.target_program_id]
        print(f"  {program.title} @ {program.institution_id}")
        print(f"    recognized {analysis.recognized_hours} h, applied {analysis.applied_hours} h, "
              f"{analysis.unevaluated_count} course(s) awaiting evaluation")
        print(f"    remaining: {analysis.completion_credit_hours} h over "
              f"{analysis.estimated_terms} term(s), "
              f"about ${money_to_cents(analysis.estimated_cost) / 100:,.2f}")
        for number, term in enumerate(analysis.plan.terms, start=1):
            print(f"      term {number}: {', '.join(sorted(term))}")


if __name__ == "__main__":
    main()
