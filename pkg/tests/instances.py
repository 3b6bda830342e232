"""Seeded random instance generation for solver-versus-oracle testing.

Builds small catalogs, requirement trees, and transcripts sized so the
exhaustive audit oracle stays tractable. Everything is driven by a
caller-supplied ``random.Random`` so suites are reproducible.
"""

from __future__ import annotations

import random
from fractions import Fraction

from transferpath import (
    Course,
    Credential,
    Grade,
    NodeKind,
    Program,
    RequirementNode,
    Transcript,
    TranscriptRecord,
)

GRADES = [Grade.A, Grade.B, Grade.C, Grade.D, Grade.F]
HOURS = [Fraction(1), Fraction(2), Fraction(3), Fraction(3), Fraction(4), Fraction(9, 2)]

INST = "test-u"


def random_courses(rng: random.Random, n: int) -> dict[str, Course]:
    out = {}
    for i in range(n):
        cid = f"c{i:02d}"
        out[cid] = Course(
            id=cid,
            institution_id=INST,
            subject_code="T",
            number=str(100 + i),
            title=f"Course {i}",
            credit_hours=rng.choice(HOURS),
        )
    return out


def random_tree(
    rng: random.Random,
    courses: dict[str, Course],
    max_leaves: int = 10,
    allow_exams: bool = True,
) -> RequirementNode:
    counter = [0]
    leaves_left = [rng.randint(1, max_leaves)]
    course_ids = sorted(courses)

    def next_id(prefix: str) -> str:
        counter[0] += 1
        return f"{prefix}{counter[0]}"

    def leaf() -> RequirementNode:
        leaves_left[0] -= 1
        roll = rng.random()
        if roll < 0.55:
            return RequirementNode(
                id=next_id("n"),
                label="course leaf",
                kind=NodeKind.COURSE,
                course_id=rng.choice(course_ids),
                min_grade=rng.choice([Grade.D, Grade.D, Grade.C, Grade.B]),
                shareable=rng.random() < 0.1,
            )
        if roll < 0.85 or not allow_exams:
            pool = frozenset(rng.sample(course_ids, k=rng.randint(1, min(4, len(course_ids)))))
            return RequirementNode(
                id=next_id("n"),
                label="credits leaf",
                kind=NodeKind.CREDITS,
                min_credit_hours=Fraction(rng.randint(2, 9)),
                course_pool=pool,
                accepts_electives=rng.random() < 0.3,
            )
        return RequirementNode(
            id=next_id("n"),
            label="exam leaf",
            kind=NodeKind.EXAM,
            exam_id=rng.choice(["e0", "e1"]),
            min_score=Fraction(rng.randint(50, 90)),
        )

    def node(depth: int) -> RequirementNode:
        if depth >= 3 or leaves_left[0] <= 1 or rng.random() < 0.35:
            return leaf()
        width = rng.randint(1, min(3, max(1, leaves_left[0])))
        children = tuple(node(depth + 1) for _ in range(width))
        kind = rng.choice([NodeKind.ALL, NodeKind.ANY, NodeKind.CHOOSE])
        choose_k = rng.randint(1, len(children)) if kind is NodeKind.CHOOSE else None
        return RequirementNode(
            id=next_id("n"),
            label="composite",
            kind=kind,
            children=children,
            choose_k=choose_k,
        )

    root = node(0)
    if root.is_leaf:
        root = RequirementNode(
            id=next_id("n"), label="wrap", kind=NodeKind.ALL, children=(root,)
        )
    return root


def random_transcript(
    rng: random.Random, courses: dict[str, Course], max_records: int = 6
) -> Transcript:
    records = []
    course_ids = sorted(courses)
    for _ in range(rng.randint(0, max_records)):
        if rng.random() < 0.12:
            records.append(
                TranscriptRecord(
                    institution_id=INST,
                    exam_id=rng.choice(["e0", "e1"]),
                    score=Fraction(rng.randint(40, 100)),
                )
            )
        else:
            cid = rng.choice(course_ids)
            records.append(
                TranscriptRecord(
                    institution_id=INST,
                    course_id=cid,
                    grade=rng.choice(GRADES),
                    credit_hours=courses[cid].credit_hours,
                    elective_level=rng.choice([None, None, None, None, "lower", "upper"]),
                )
            )
    return Transcript(tuple(records))


def enumeration_cost(tree: RequirementNode, transcript: Transcript) -> int:
    """Upper bound on oracle enumeration size for rejection sampling."""
    from transferpath.oracle import _leaf_list, _matches

    leaves = _leaf_list(tree)
    cost = 1
    for record in transcript.records:
        options = 1 + sum(1 for l in leaves if _matches(record, l))
        cost *= options
        if cost > 10**9:
            break
    return cost


def random_audit_instance(
    rng: random.Random,
    max_records: int = 6,
    max_leaves: int = 10,
    max_cost: int = 60_000,
) -> tuple[dict[str, Course], Program, Transcript]:
    """A (courses, program, transcript) triple the oracle can enumerate."""
    while True:
        courses = random_courses(rng, rng.randint(2, 8))
        tree = random_tree(rng, courses, max_leaves=max_leaves)
        transcript = random_transcript(rng, courses, max_records=max_records)
        if enumeration_cost(tree, transcript) > max_cost:
            continue
        program = Program(
            id="p-test",
            institution_id=INST,
            credential=Credential.BACHELOR,
            title="Test Program",
            root=tree,
            total_credit_hours=Fraction(200),
        )
        return courses, program, transcript


def random_plan_instance(
    rng: random.Random, max_courses: int = 8
) -> tuple[dict[str, Course], frozenset[str]]:
    """A small acyclic course set for plan generation and counting."""
    n = rng.randint(2, max_courses)
    ids = [f"c{i:02d}" for i in range(n)]
    courses = {}
    for i, cid in enumerate(ids):
        prereq_pool = ids[:i]
        prereqs = frozenset(
            p for p in prereq_pool if rng.random() < 0.25
        )
        courses[cid] = Course(
            id=cid,
            institution_id=INST,
            subject_code="T",
            number=str(100 + i),
            title=f"Course {i}",
            credit_hours=Fraction(rng.choice([2, 3, 3, 4])),
            prerequisites=prereqs,
        )
    return courses, frozenset(ids)
