import itertools
from fractions import Fraction

import pytest

from transferpath import (
    Course,
    Grade,
    NodeKind,
    RequirementNode,
    TranscriptRecord,
    ValidationError,
    validate_tree,
)


def test_grade_points_match_letter_order():
    assert Grade.A.points == 4 and Grade.F.points == 0
    ordered = [Grade.A, Grade.B, Grade.C, Grade.D, Grade.F]
    for better, worse in zip(ordered, ordered[1:]):
        assert better > worse
        assert better.points > worse.points


def test_grade_order_is_total():
    for a, b in itertools.product(Grade, Grade):
        assert (a < b) + (a == b) + (a > b) == 1


def test_grade_parse_rejects_unknown():
    assert Grade.parse("b") is Grade.B
    with pytest.raises(ValidationError):
        Grade.parse("E")


def test_course_requires_positive_hours():
    with pytest.raises(ValidationError):
        Course(
            id="x", institution_id="i", subject_code="S", number="1",
            title="t", credit_hours=Fraction(0),
        )


def test_record_needs_exactly_one_variant():
    with pytest.raises(ValidationError):
        TranscriptRecord(institution_id="i")
    with pytest.raises(ValidationError):
        TranscriptRecord(
            institution_id="i", course_id="c", grade=Grade.A, credit_hours=Fraction(3),
            exam_id="e", score=Fraction(80),
        )


def test_exam_records_carry_no_hours():
    with pytest.raises(ValidationError):
        TranscriptRecord(
            institution_id="i", exam_id="e", score=Fraction(70), credit_hours=Fraction(3)
        )


def _course_leaf(node_id, course_id):
    return RequirementNode(
        id=node_id, label=course_id, kind=NodeKind.COURSE,
        course_id=course_id, min_grade=Grade.D,
    )


def test_validate_tree_clean_math_core():
    courses = {
        cid: Course(
            id=cid, institution_id="u", subject_code="M", number="1",
            title=cid, credit_hours=Fraction(3),
        )
        for cid in ("stat", "precalc", "calc1")
    }
    root = RequirementNode(
        id="math", label="Math core", kind=NodeKind.ANY,
        children=(
            _course_leaf("m1", "stat"),
            _course_leaf("m2", "precalc"),
            _course_leaf("m3", "calc1"),
            RequirementNode(
                id="m4", label="placement", kind=NodeKind.EXAM,
                exam_id="placement", min_score=Fraction(70),
            ),
        ),
    )
    assert validate_tree(root, courses) == []


def test_validate_tree_dangling_course():
    root = _course_leaf("only", "ghost")
    violations = validate_tree(root, {})
    assert [v.code for v in violations] == ["DanglingCourse"]


def test_validate_tree_empty_composite():
    root = RequirementNode(id="r", label="empty", kind=NodeKind.ALL)
    assert [v.code for v in validate_tree(root)] == ["EmptyComposite"]


def test_validate_tree_choose_k_too_large():
    root = RequirementNode(
        id="r", label="choose", kind=NodeKind.CHOOSE, choose_k=3,
        children=(_course_leaf("a", "x"), _course_leaf("b", "y")),
    )
    codes = [v.code for v in validate_tree(root)]
    assert "ChooseKInvalid" in codes


def test_validate_tree_duplicate_node_ids():
    root = RequirementNode(
        id="r", label="dup", kind=NodeKind.ALL,
        children=(_course_leaf("same", "x"), _course_leaf("same", "y")),
    )
    codes = [v.code for v in validate_tree(root)]
    assert "DuplicateNodeId" in codes
