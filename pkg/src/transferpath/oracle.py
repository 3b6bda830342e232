"""Exhaustive audit oracle for desk-scale instances.

Reimplements the audit semantics by plain enumeration, sharing only the
data model with the optimizing solver in :mod:`transferpath.audit` so the
two can be compared as genuinely independent routes. Every candidate
assignment is generated, filtered against the assignment rules, scored,
and the lexicographic best kept.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .audit import Assignment, AuditResult, NodeStatus
from .errors import OracleTooLarge
from .model import (
    NodeKind,
    PASSING_GRADE,
    Program,
    RequirementNode,
    Transcript,
    TranscriptRecord,
)

MAX_RECORDS = 12
MAX_LEAVES = 16


def _matches(record: TranscriptRecord, leaf: RequirementNode) -> bool:
    if record.course_id is None:
        return False
    if leaf.kind is NodeKind.COURSE:
        if record.elective_level is not None:
            return False
        return record.course_id == leaf.course_id and record.grade >= leaf.min_grade
    if leaf.kind is NodeKind.CREDITS:
        if record.grade < PASSING_GRADE:
            return False
        if record.elective_level is not None:
            return leaf.accepts_electives
        return record.course_id in leaf.course_pool
    return False


def _leaf_list(root: RequirementNode) -> list[RequirementNode]:
    if root.is_leaf:
        return [root]
    out = []
    for child in root.children:
        out.extend(_leaf_list(child))
    return out


def _branches_used(node: RequirementNode, assigned_leaf_ids: set[str]) -> int:
    """How many child subtrees of ``node`` contain an assigned leaf."""
    used = 0
    for child in node.children:
        if any(l.id in assigned_leaf_ids for l in _leaf_list(child)):
            used += 1
    return used


def _assignment_legal(
    root: RequirementNode, records: tuple[TranscriptRecord, ...], pairs: tuple[tuple[int, str], ...]
) -> bool:
    leaves = {l.id: l for l in _leaf_list(root)}
    per_leaf: dict[str, int] = {}
    for i, leaf_id in pairs:
        leaf = leaves[leaf_id]
        if not _matches(records[i], leaf):
            return False
        per_leaf[leaf_id] = per_leaf.get(leaf_id, 0) + 1
        if leaf.kind is NodeKind.COURSE and not leaf.shareable and per_leaf[leaf_id] > 1:
            return False
    assigned_ids = set(per_leaf)

    def walk(node: RequirementNode) -> bool:
        if node.is_leaf:
            return True
        if node.kind is NodeKind.ANY and _branches_used(node, assigned_ids) > 1:
            return False
        if node.kind is NodeKind.CHOOSE and _branches_used(node, assigned_ids) > node.choose_k:
            return False
        return all(walk(c) for c in node.children)

    return walk(root)


def _evaluate_plain(
    root: RequirementNode, transcript: Transcript, pairs: tuple[tuple[int, str], ...]
) -> tuple[dict[str, bool], int]:
    """Leaf truth plus satisfied-leaf count, computed by direct recursion."""
    hours_at: dict[str, Fraction] = {}
    count_at: dict[str, int] = {}
    for i, leaf_id in pairs:
        hours_at[leaf_id] = hours_at.get(leaf_id, Fraction(0)) + transcript.records[i].credit_hours
        count_at[leaf_id] = count_at.get(leaf_id, 0) + 1

    truth: dict[str, bool] = {}
    for leaf in _leaf_list(root):
        if leaf.kind is NodeKind.COURSE:
            truth[leaf.id] = count_at.get(leaf.id, 0) >= 1
        elif leaf.kind is NodeKind.CREDITS:
            truth[leaf.id] = hours_at.get(leaf.id, Fraction(0)) >= leaf.min_credit_hours
        else:
            truth[leaf.id] = any(
                r.exam_id == leaf.exam_id and r.score is not None and r.score >= leaf.min_score
                for r in transcript.records
                if r.course_id is None
            )
    return truth, sum(truth.values())


def _node_status_plain(root: RequirementNode, truth: Mapping[str, bool]) -> dict[str, NodeStatus]:
    def ok(node: RequirementNode) -> bool:
        if node.is_leaf:
            return truth[node.id]
        hits = sum(ok(c) for c in node.children)
        if node.kind is NodeKind.ALL:
            return hits == len(node.children)
        if node.kind is NodeKind.ANY:
            return hits >= 1
        return hits >= node.choose_k

    out: dict[str, NodeStatus] = {}

    def fill(node: RequirementNode):
        if node.is_leaf:
            out[node.id] = NodeStatus.SATISFIED if truth[node.id] else NodeStatus.UNSATISFIED
        else:
            if ok(node):
                out[node.id] = NodeStatus.SATISFIED
            elif any(ok(c) for c in node.children):
                out[node.id] = NodeStatus.PARTIAL
            else:
                out[node.id] = NodeStatus.UNSATISFIED
            for c in node.children:
                fill(c)

    fill(root)
    return {n.id: out[n.id] for n in root.iter_nodes()}


def brute_force_audit(transcript: Transcript, program: Program) -> AuditResult:
    """Enumerate every legal assignment and return the lexicographic optimum.

    Same result contract as :func:`transferpath.audit.audit`; limited to
    12 records and 16 leaves.
    """
    leaves = _leaf_list(program.root)
    if len(transcript.records) > MAX_RECORDS or len(leaves) > MAX_LEAVES:
        raise OracleTooLarge(
            f"{len(transcript.records)} records x {len(leaves)} leaves exceeds oracle limits"
        )

    records = transcript.records
    options: list[tuple[int, list[str]]] = []
    for i, record in enumerate(records):
        matching = sorted(l.id for l in leaves if _matches(record, l))
        if matching:
            options.append((i, matching))

    best: list = [None]

    def consider(pairs: tuple[tuple[int, str], ...]):
        if not _assignment_legal(program.root, records, pairs):
            return
        hours = sum((records[i].credit_hours for i, _ in pairs), Fraction(0))
        _, leaf_count = _evaluate_plain(program.root, transcript, pairs)
        key = (-hours, -leaf_count, pairs)
        if best[0] is None or key < best[0]:
            best[0] = key

    def enumerate_from(pos: int, pairs: tuple[tuple[int, str], ...]):
        if pos == len(options):
            consider(pairs)
            return
        record_index, matching = options[pos]
        for leaf_id in matching:
            enumerate_from(pos + 1, pairs + ((record_index, leaf_id),))
        enumerate_from(pos + 1, pairs)

    enumerate_from(0, ())
    pairs = best[0][2]
    truth, leaf_count = _evaluate_plain(program.root, transcript, pairs)
    applied = sum((records[i].credit_hours for i, _ in pairs), Fraction(0))
    return AuditResult(
        program_id=program.id,
        assignment=Assignment(pairs),
        node_status=_node_status_plain(program.root, truth),
        applied_credit_hours=applied,
        unapplied_credit_hours=transcript.total_credit_hours - applied,
        satisfied_leaf_count=leaf_count,
        exact=True,
        transcript=transcript,
    )
