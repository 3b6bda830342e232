#!/usr/bin/env python3
"""Regenerate the checked-in catalog fixtures deterministically.

Writes the demo catalog under fixtures/catalog/, the sample transcripts
under fixtures/transcripts/, the counting curriculum under
fixtures/curricula/, and the small ingest-count catalog under
tests/data/mini_catalog/. Output is stable byte-for-byte, so running this
script on a clean tree is a no-op.
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def course(cid, inst, subject, number, title, hours, prereqs=()):
    return {
        "id": cid,
        "institution_id": inst,
        "subject_code": subject,
        "number": number,
        "title": title,
        "credit_hours": hours,
        "prerequisites": sorted(prereqs),
    }


def course_leaf(node_id, label, course_id, min_grade="D"):
    return {
        "id": node_id,
        "label": label,
        "kind": "course",
        "course_id": course_id,
        "min_grade": min_grade,
    }


def write(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def main_catalog(out: Path) -> None:
    write(out / "institutions.json", {
        "institutions": [
            {"id": "alameda-tech", "name": "Alameda Institute of Technology", "kind": "university"},
            {"id": "plateau-cc", "name": "Plateau Community College", "kind": "community_college"},
            {"id": "riverbend-cc", "name": "Riverbend Community College", "kind": "community_college"},
            {"id": "sagebrush-cc", "name": "Sagebrush Community College", "kind": "community_college"},
            {"id": "summit-state", "name": "Summit State University", "kind": "university"},
        ],
    })

    write(out / "riverbend.json", {
        "courses": [
            course("rb-cs101", "riverbend-cc", "CS", "101", "Programming I", 4),
            course("rb-cs102", "riverbend-cc", "CS", "102", "Programming II", 4, ["rb-cs101"]),
            course("rb-math210", "riverbend-cc", "MATH", "210", "Discrete Structures", 3),
        ],
        "programs": [
            {
                "id": "rb-as-cs",
                "institution_id": "riverbend-cc",
                "credential": "associate",
                "title": "A.S. Computer Science",
                "total_credit_hours": 60,
                "root": {
                    "id": "rb-as-cs-root",
                    "label": "A.S. Computer Science requirements",
                    "kind": "all",
                    "children": [
                        course_leaf("rb-as-cs-1", "Programming I", "rb-cs101", "C"),
                        course_leaf("rb-as-cs-2", "Programming II", "rb-cs102", "C"),
                        course_leaf("rb-as-cs-3", "Discrete Structures", "rb-math210", "C"),
                    ],
                },
            },
        ],
    })

    write(out / "sagebrush.json", {
        "courses": [
            course("sb-cs230", "sagebrush-cc", "CS", "230", "Computer Networking", 3),
        ],
    })

    # Summit State: a CS major core, the worked general-education core, and
    # an audit-scale general-studies program with 35 top-level rules.
    summit_courses = [
        course("ssu-cs101", "summit-state", "CS", "101", "Programming I", 4),
        course("ssu-cs102", "summit-state", "CS", "102", "Programming II", 4, ["ssu-cs101"]),
        course("ssu-cs210", "summit-state", "CS", "210", "Data Structures", 4, ["ssu-cs102"]),
        course("ssu-cs220", "summit-state", "CS", "220", "Computer Organization", 4, ["ssu-cs102"]),
        course("ssu-cs310", "summit-state", "CS", "310", "Algorithms", 3, ["ssu-cs210"]),
        course("ssu-cs330", "summit-state", "CS", "330", "Computer Networks", 3, ["ssu-cs220"]),
        course("ssu-math150", "summit-state", "MATH", "150", "Discrete Mathematics", 3),
        course("ssu-stat120", "summit-state", "STAT", "120", "Introductory Statistics", 3),
        course("ssu-math110", "summit-state", "MATH", "110", "Precalculus", 4),
        course("ssu-math120", "summit-state", "MATH", "120", "Calculus I", 4),
        course("ssu-hum101", "summit-state", "HUM", "101", "World Literature", 3),
        course("ssu-hum102", "summit-state", "HUM", "102", "Introduction to Philosophy", 3),
        course("ssu-hum103", "summit-state", "HUM", "103", "Cultural Anthropology", 3),
        course("ssu-wri101", "summit-state", "WRI", "101", "College Writing", 3),
        course("ssu-art100", "summit-state", "ART", "100", "Art History Survey", 3),
        course("ssu-art110", "summit-state", "ART", "110", "Music Appreciation", 3),
    ]

    bs_cs = {
        "id": "ssu-bs-cs",
        "institution_id": "summit-state",
        "credential": "bachelor",
        "title": "B.S. Computer Science",
        "total_credit_hours": 120,
        "root": {
            "id": "bscs-root",
            "label": "Computer science major core",
            "kind": "all",
            "children": [
                course_leaf("bscs-cs101", "Programming I", "ssu-cs101", "C"),
                course_leaf("bscs-cs102", "Programming II", "ssu-cs102", "C"),
                course_leaf("bscs-cs210", "Data Structures", "ssu-cs210", "C"),
                course_leaf("bscs-cs220", "Computer Organization", "ssu-cs220", "C"),
                course_leaf("bscs-cs310", "Algorithms", "ssu-cs310", "C"),
                course_leaf("bscs-cs330", "Computer Networks", "ssu-cs330", "C"),
                course_leaf("bscs-math150", "Discrete Mathematics", "ssu-math150", "C"),
            ],
        },
    }

    gen_ed = {
        "id": "ssu-gened",
        "institution_id": "summit-state",
        "credential": "associate",
        "title": "General Education Core",
        "total_credit_hours": 60,
        "root": {
            "id": "gened-root",
            "label": "General education core",
            "kind": "all",
            "children": [
                {
                    "id": "gened-math",
                    "label": "Mathematics core",
                    "kind": "any",
                    "children": [
                        course_leaf("gened-math-stat", "Introductory Statistics", "ssu-stat120"),
                        course_leaf("gened-math-precalc", "Precalculus", "ssu-math110"),
                        course_leaf("gened-math-calc", "Calculus I", "ssu-math120"),
                        {
                            "id": "gened-math-exam",
                            "label": "Mathematics placement exam",
                            "kind": "exam",
                            "exam_id": "exam-math-placement",
                            "min_score": 70,
                        },
                    ],
                },
                {
                    "id": "gened-hum",
                    "label": "Humanities core",
                    "kind": "choose",
                    "choose_k": 2,
                    "children": [
                        course_leaf("gened-hum-1", "World Literature", "ssu-hum101"),
                        course_leaf("gened-hum-2", "Introduction to Philosophy", "ssu-hum102"),
                        course_leaf("gened-hum-3", "Cultural Anthropology", "ssu-hum103"),
                    ],
                },
                course_leaf("gened-wri", "Writing core", "ssu-wri101", "C"),
                {
                    "id": "gened-art",
                    "label": "Fine art core",
                    "kind": "any",
                    "children": [
                        course_leaf("gened-art-1", "Art History Survey", "ssu-art100"),
                        course_leaf("gened-art-2", "Music Appreciation", "ssu-art110"),
                    ],
                },
            ],
        },
    }

    # General studies: 35 rules at audit scale. Rule 1 mirrors a deeply
    # nested science requirement (two sub-rules, mixed and/or); the rest
    # are small single-course or pick-one rules over a generated inventory.
    gs_courses = []
    for i in range(1, 51):
        gs_courses.append(
            course(f"ssu-gs{i:03d}", "summit-state", "GS", f"{100 + i}", f"General Studies {100 + i}", 3)
        )

    def gs_leaf(rule, slot, idx, min_grade="D"):
        return course_leaf(f"gs-r{rule:02d}-{slot}", f"General Studies {100 + idx}", f"ssu-gs{idx:03d}", min_grade)

    rules = [
        {
            "id": "gs-r01",
            "label": "Biological and physical sciences",
            "kind": "all",
            "children": [
                {
                    "id": "gs-r01-a",
                    "label": "Two laboratory sciences",
                    "kind": "choose",
                    "choose_k": 2,
                    "children": [
                        gs_leaf(1, "a1", 1), gs_leaf(1, "a2", 2), gs_leaf(1, "a3", 3), gs_leaf(1, "a4", 4),
                    ],
                },
                {
                    "id": "gs-r01-b",
                    "label": "Science depth",
                    "kind": "any",
                    "children": [
                        {
                            "id": "gs-r01-b1",
                            "label": "Sequence option",
                            "kind": "all",
                            "children": [gs_leaf(1, "b1x", 5), gs_leaf(1, "b1y", 6)],
                        },
                        {
                            "id": "gs-r01-b2",
                            "label": "Breadth option",
                            "kind": "credits",
                            "min_credit_hours": 6,
                            "course_pool": ["ssu-gs007", "ssu-gs008", "ssu-gs009"],
                        },
                    ],
                },
            ],
        },
    ]
    next_course = 10
    for rule in range(2, 35):
        if rule % 5 == 0:
            rules.append({
                "id": f"gs-r{rule:02d}",
                "label": f"Distribution rule {rule}",
                "kind": "any",
                "children": [
                    gs_leaf(rule, "1", next_course),
                    gs_leaf(rule, "2", next_course + 1),
                ],
            })
            next_course += 2
        else:
            rules.append(gs_leaf(rule, "only", next_course))
            next_course += 1
    rules.append({
        "id": "gs-r35",
        "label": "Open electives",
        "kind": "credits",
        "min_credit_hours": 6,
        "course_pool": [f"ssu-gs{next_course:03d}", f"ssu-gs{next_course + 1:03d}"],
        "accepts_electives": True,
    })

    gen_studies = {
        "id": "ssu-bs-gs",
        "institution_id": "summit-state",
        "credential": "bachelor",
        "title": "B.S. General Studies",
        "total_credit_hours": 120,
        "root": {
            "id": "gs-root",
            "label": "General studies requirements",
            "kind": "all",
            "children": rules,
        },
    }

    write(out / "summit_state.json", {
        "courses": summit_courses + gs_courses,
        "exams": [
            {"id": "exam-math-placement", "title": "Mathematics Placement Exam"},
        ],
        "programs": [bs_cs, gen_ed, gen_studies],
    })

    write(out / "alameda_tech.json", {
        "courses": [
            course("at-cs101", "alameda-tech", "CS", "101", "Programming I", 4),
            course("at-cs102", "alameda-tech", "CS", "102", "Programming II", 4, ["at-cs101"]),
            course("at-cs250", "alameda-tech", "CS", "250", "Data Structures", 4, ["at-cs102"]),
            course("at-math200", "alameda-tech", "MATH", "200", "Discrete Mathematics", 3),
            course("at-net210", "alameda-tech", "NET", "210", "Computer Networking", 3),
        ],
        "programs": [
            {
                "id": "at-bs-cs",
                "institution_id": "alameda-tech",
                "credential": "bachelor",
                "title": "B.S. Computer Science",
                "total_credit_hours": 120,
                "root": {
                    "id": "atcs-root",
                    "label": "Computer science major core",
                    "kind": "all",
                    "children": [
                        course_leaf("atcs-cs101", "Programming I", "at-cs101", "C"),
                        course_leaf("atcs-cs102", "Programming II", "at-cs102", "C"),
                        course_leaf("atcs-cs250", "Data Structures", "at-cs250", "C"),
                        course_leaf("atcs-math200", "Discrete Mathematics", "at-math200", "C"),
                        course_leaf("atcs-net210", "Computer Networking", "at-net210", "C"),
                    ],
                },
            },
        ],
    })

    # Forty prerequisite-free courses for the plan-counting fixture.
    write(out / "plateau.json", {
        "courses": [
            course(f"pl-gen{i:02d}", "plateau-cc", "GEN", f"{100 + i}", f"General Elective {100 + i}", 3)
            for i in range(1, 41)
        ],
    })

    write(out / "equivalences.json", {
        "equivalences": [
            {
                "source_course_id": "rb-cs101",
                "target_institution_id": "summit-state",
                "disposition": "elective_lower",
                "evaluated_on": "2025-08-15",
            },
            {
                "source_course_id": "rb-cs102",
                "target_institution_id": "summit-state",
                "disposition": "elective_lower",
                "evaluated_on": "2025-08-15",
            },
            {
                "source_course_id": "rb-cs101",
                "target_institution_id": "alameda-tech",
                "disposition": "equivalent",
                "target_course_id": "at-cs101",
                "evaluated_on": "2025-06-30",
            },
            {
                "source_course_id": "rb-cs102",
                "target_institution_id": "alameda-tech",
                "disposition": "equivalent",
                "target_course_id": "at-cs102",
                "evaluated_on": "2025-06-30",
            },
            {
                "source_course_id": "rb-math210",
                "target_institution_id": "alameda-tech",
                "disposition": "equivalent",
                "target_course_id": "at-math200",
                "evaluated_on": "2025-06-30",
            },
            {
                "source_course_id": "sb-cs230",
                "target_institution_id": "alameda-tech",
                "disposition": "equivalent",
                "target_course_id": "at-net210",
                "evaluated_on": "2025-07-12",
            },
        ],
    })


def transcripts(out: Path) -> None:
    # A two-community-college transfer history: two programming courses
    # and discrete math at one college, networking at another.
    write(out / "two_cc_transfer.json", {
        "records": [
            {"institution_id": "riverbend-cc", "course_id": "rb-cs101", "grade": "A", "credit_hours": 4, "term_index": 0},
            {"institution_id": "riverbend-cc", "course_id": "rb-cs102", "grade": "B", "credit_hours": 4, "term_index": 1},
            {"institution_id": "riverbend-cc", "course_id": "rb-math210", "grade": "B", "credit_hours": 3, "term_index": 1},
            {"institution_id": "sagebrush-cc", "course_id": "sb-cs230", "grade": "A", "credit_hours": 3, "term_index": 2},
        ],
    })
    write(out / "empty.json", {"records": []})


def curricula(out: Path) -> None:
    write(out / "forty_free_courses.json", {
        "courses": [f"pl-gen{i:02d}" for i in range(1, 41)],
    })


def mini_catalog(out: Path) -> None:
    """Two institutions, twelve courses, two programs, four equivalences."""
    write(out / "mini.json", {
        "institutions": [
            {"id": "mini-cc", "name": "Mini Community College", "kind": "community_college"},
            {"id": "mini-u", "name": "Mini University", "kind": "university"},
        ],
        "courses": [
            course(f"cc-c{i}", "mini-cc", "CC", f"10{i}", f"CC Course {i}", 3) for i in range(1, 7)
        ] + [
            course(f"u-c{i}", "mini-u", "U", f"20{i}", f"University Course {i}", 3) for i in range(1, 7)
        ],
        "programs": [
            {
                "id": "mini-as",
                "institution_id": "mini-cc",
                "credential": "associate",
                "title": "Mini A.S.",
                "total_credit_hours": 60,
                "root": {
                    "id": "mini-as-root", "label": "Core", "kind": "all",
                    "children": [course_leaf(f"mini-as-{i}", f"CC Course {i}", f"cc-c{i}") for i in range(1, 4)],
                },
            },
            {
                "id": "mini-bs",
                "institution_id": "mini-u",
                "credential": "bachelor",
                "title": "Mini B.S.",
                "total_credit_hours": 120,
                "root": {
                    "id": "mini-bs-root", "label": "Core", "kind": "all",
                    "children": [course_leaf(f"mini-bs-{i}", f"University Course {i}", f"u-c{i}") for i in range(1, 4)],
                },
            },
        ],
        "equivalences": [
            {
                "source_course_id": f"cc-c{i}",
                "target_institution_id": "mini-u",
                "disposition": "equivalent" if i <= 2 else "elective_lower",
                **({"target_course_id": f"u-c{i}"} if i <= 2 else {}),
                "evaluated_on": "2025-01-01",
            }
            for i in range(1, 5)
        ],
    })


def main() -> None:
    main_catalog(ROOT / "fixtures" / "catalog")
    transcripts(ROOT / "fixtures" / "transcripts")
    curricula(ROOT / "fixtures" / "curricula")
    mini_catalog(ROOT / "tests" / "data" / "mini_catalog")
    print("fixtures written")


if __name__ == "__main__":
    main()
