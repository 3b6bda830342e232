"""Degree audits: optimal assignment of transcript records to requirements.

The audit searches for the assignment that is lexicographically best under
(1) maximum applied credit hours, (2) maximum satisfied leaf count,
(3) smallest assignment under (record index, leaf id) ordering.

Assignment validity, beyond per-pair matching and one-record-per-leaf for
non-shareable COURSE leaves, excludes surplus credit: records may only be
assigned inside the child subtrees a disjunctive node actually uses. An
ANY node uses at most one child subtree and a CHOOSE node at most
``choose_k``; courses beyond that stay unapplied, the way extra courses
under a pick-N rule become excess credit on a real audit. CREDITS leaves
have no such cap: every pool member can be applied, even past the
minimum.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import CatalogMismatch, InvalidAssignment, LimitExceeded
from .model import (
    Course,
    NodeKind,
    PASSING_GRADE,
    Program,
    RequirementNode,
    Transcript,
    TranscriptRecord,
)


class NodeStatus(enum.Enum):
    SATISFIED = "satisfied"
    UNSATISFIED = "unsatisfied"
    PARTIAL = "partial"


@dataclass(frozen=True, slots=True)
class Assignment:
    """Partial map from transcript record index to requirement leaf id."""

    pairs: tuple[tuple[int, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted(self.pairs)))
        indices = [i for i, _ in self.pairs]
        if len(set(indices)) != len(indices):
            raise InvalidAssignment("a record maps to more than one leaf")

    @property
    def mapping(self) -> dict[int, str]:
        return dict(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True, slots=True)
class AuditPolicy:
    """Exactness limits. Above them a flagged greedy fallback is used
    (or LimitExceeded is raised when ``allow_heuristic`` is off)."""

    max_exact_records: int = 200
    max_exact_leaves: int = 200
    allow_heuristic: bool = True


DEFAULT_POLICY = AuditPolicy()


@dataclass(frozen=True)
class AuditResult:
    program_id: str
    assignment: Assignment
    node_status: Mapping[str, NodeStatus]
    applied_credit_hours: Fraction
    unapplied_credit_hours: Fraction
    satisfied_leaf_count: int
    exact: bool
    transcript: Transcript

    @property
    def root_satisfied(self) -> bool:
        return next(iter(self.node_status.values())) is NodeStatus.SATISFIED


# ---------------------------------------------------------------------------
# Matching rules


def record_matches_leaf(record: TranscriptRecord, leaf: RequirementNode) -> bool:
    """Whether a record may be assigned to a leaf at all."""
    if not record.is_course:
        return False
    if leaf.kind is NodeKind.COURSE:
        return (
            record.elective_level is None
            and record.course_id == leaf.course_id
            and record.grade >= leaf.min_grade
        )
    if leaf.kind is NodeKind.CREDITS:
        if record.grade < PASSING_GRADE:
            return False
        if record.elective_level is not None:
            return leaf.accepts_electives
        return record.course_id in leaf.course_pool
    return False


def exam_leaf_satisfied(leaf: RequirementNode, transcript: Transcript) -> bool:
    return any(
        not r.is_course and r.exam_id == leaf.exam_id and r.score >= leaf.min_score
        for r in transcript.records
    )


# ---------------------------------------------------------------------------
# Tree indexing


class _TreeIndex:
    """Preorder node list plus leaf lookup and disjunction budgets."""

    def __init__(self, root: RequirementNode):
        self.root = root
        self.nodes: list[RequirementNode] = list(root.iter_nodes())
        self.leaves: list[RequirementNode] = [n for n in self.nodes if n.is_leaf]
        self.leaf_by_id: dict[str, RequirementNode] = {l.id: l for l in self.leaves}
        # Child-subtree budget for each disjunctive node: ANY uses one
        # branch, CHOOSE uses choose_k.
        self.budget: dict[str, int] = {}
        # For each leaf: the (disjunctive ancestor id, child index) steps
        # on its root path.
        self.leaf_constraints: dict[str, tuple[tuple[str, int], ...]] = {}
        self._walk(root, ())
        # Leaves reachable from a given course id, for fast candidate lookup.
        self.course_leaves: dict[str, list[RequirementNode]] = {}
        self.pool_leaves: dict[str, list[RequirementNode]] = {}
        self.elective_leaves: list[RequirementNode] = []
        for leaf in self.leaves:
            if leaf.kind is NodeKind.COURSE and leaf.course_id is not None:
                self.course_leaves.setdefault(leaf.course_id, []).append(leaf)
            elif leaf.kind is NodeKind.CREDITS:
                for cid in leaf.course_pool:
                    self.pool_leaves.setdefault(cid, []).append(leaf)
                if leaf.accepts_electives:
                    self.elective_leaves.append(leaf)

    def leaves_for_record(self, record: TranscriptRecord) -> list[RequirementNode]:
        """Matching leaves, sorted by id (same relation as record_matches_leaf)."""
        if not record.is_course:
            return []
        if record.elective_level is not None:
            if record.grade < PASSING_GRADE:
                return []
            return sorted(self.elective_leaves, key=lambda l: l.id)
        out = [
            l for l in self.course_leaves.get(record.course_id, ())
            if record.grade >= l.min_grade
        ]
        if record.grade >= PASSING_GRADE:
            out.extend(self.pool_leaves.get(record.course_id, ()))
        return sorted(out, key=lambda l: l.id)

    def _walk(self, node: RequirementNode, path: tuple[tuple[str, int], ...]):
        if node.is_leaf:
            self.leaf_constraints[node.id] = path
            return
        binding = False
        if node.kind is NodeKind.ANY and len(node.children) > 1:
            self.budget[node.id] = 1
            binding = True
        elif node.kind is NodeKind.CHOOSE and (node.choose_k or 0) < len(node.children):
            self.budget[node.id] = node.choose_k or 0
            binding = True
        for idx, child in enumerate(node.children):
            if binding:
                self._walk(child, path + ((node.id, idx),))
            else:
                self._walk(child, path)

    def capacity(self, leaf: RequirementNode) -> int | None:
        """Max records assignable to a leaf; None means unbounded."""
        if leaf.kind is NodeKind.COURSE and not leaf.shareable:
            return 1
        if leaf.kind is NodeKind.EXAM:
            return 0
        return None


# ---------------------------------------------------------------------------
# Validity and evaluation


def check_assignment(
    root: RequirementNode, transcript: Transcript, assignment: Assignment
) -> None:
    """Raise InvalidAssignment unless every assignment invariant holds."""
    index = _TreeIndex(root)
    per_leaf: dict[str, int] = {}
    branch_use: dict[str, set[int]] = {}
    for record_index, leaf_id in assignment.pairs:
        if not 0 <= record_index < len(transcript.records):
            raise InvalidAssignment(f"record index {record_index} out of range")
        leaf = index.leaf_by_id.get(leaf_id)
        if leaf is None:
            raise InvalidAssignment(f"unknown requirement leaf {leaf_id!r}")
        record = transcript.records[record_index]
        if not record_matches_leaf(record, leaf):
            raise InvalidAssignment(
                f"record {record_index} cannot satisfy leaf {leaf_id!r}"
            )
        per_leaf[leaf_id] = per_leaf.get(leaf_id, 0) + 1
        cap = index.capacity(leaf)
        if cap is not None and per_leaf[leaf_id] > cap:
            raise InvalidAssignment(f"leaf {leaf_id!r} takes at most {cap} record(s)")
        for node_id, child_idx in index.leaf_constraints[leaf_id]:
            branch_use.setdefault(node_id, set()).add(child_idx)
    for node_id, used in branch_use.items():
        if len(used) > index.budget[node_id]:
            raise InvalidAssignment(
                f"assignments span {len(used)} branches of {node_id!r}, "
                f"which uses at most {index.budget[node_id]}"
            )


def _leaf_truth(
    index: _TreeIndex, transcript: Transcript, assignment: Assignment
) -> dict[str, bool]:
    count: dict[str, int] = {}
    hours: dict[str, Fraction] = {}
    for record_index, leaf_id in assignment.pairs:
        record = transcript.records[record_index]
        count[leaf_id] = count.get(leaf_id, 0) + 1
        hours[leaf_id] = hours.get(leaf_id, Fraction(0)) + record.credit_hours
    truth: dict[str, bool] = {}
    for leaf in index.leaves:
        if leaf.kind is NodeKind.COURSE:
            truth[leaf.id] = count.get(leaf.id, 0) >= 1
        elif leaf.kind is NodeKind.CREDITS:
            truth[leaf.id] = hours.get(leaf.id, Fraction(0)) >= leaf.min_credit_hours
        else:
            truth[leaf.id] = exam_leaf_satisfied(leaf, transcript)
    return truth


def _statuses(root: RequirementNode, leaf_truth: Mapping[str, bool]) -> dict[str, NodeStatus]:
    """Fold leaf truth values up the tree into a preorder status map."""
    status: dict[str, NodeStatus] = {}

    def visit(node: RequirementNode) -> bool:
        if node.is_leaf:
            ok = leaf_truth[node.id]
            status[node.id] = NodeStatus.SATISFIED if ok else NodeStatus.UNSATISFIED
            return ok
        child_ok = [visit(c) for c in node.children]
        satisfied_children = sum(child_ok)
        if node.kind is NodeKind.ALL:
            ok = satisfied_children == len(child_ok)
        elif node.kind is NodeKind.ANY:
            ok = satisfied_children >= 1
        else:
            ok = satisfied_children >= (node.choose_k or 0)
        if ok:
            status[node.id] = NodeStatus.SATISFIED
        elif satisfied_children >= 1:
            status[node.id] = NodeStatus.PARTIAL
        else:
            status[node.id] = NodeStatus.UNSATISFIED
        return ok

    visit(root)
    # Reorder to preorder for stable serialization.
    return {node.id: status[node.id] for node in root.iter_nodes()}


def evaluate(
    root: RequirementNode, assignment: Assignment, transcript: Transcript
) -> dict[str, NodeStatus]:
    """Pure Boolean evaluation of a tree under a validated assignment."""
    check_assignment(root, transcript, assignment)
    index = _TreeIndex(root)
    return _statuses(root, _leaf_truth(index, transcript, assignment))


# ---------------------------------------------------------------------------
# Optimal audit


def _candidates(
    index: _TreeIndex, transcript: Transcript
) -> list[tuple[int, Fraction, list[RequirementNode]]]:
    """(record index, hours, matching leaves sorted by id) for assignable records."""
    out = []
    for i, record in enumerate(transcript.records):
        if not record.is_course:
            continue
        leaves = index.leaves_for_record(record)
        if leaves:
            out.append((i, record.credit_hours, leaves))
    return out


class _SearchState:
    __slots__ = ("per_leaf", "hours_at", "branch_use", "pairs", "hours")

    def __init__(self):
        self.per_leaf: dict[str, int] = {}
        self.hours_at: dict[str, Fraction] = {}
        self.branch_use: dict[str, dict[int, int]] = {}
        self.pairs: list[tuple[int, str]] = []
        self.hours = Fraction(0)

    def can_take(self, index: _TreeIndex, leaf: RequirementNode) -> bool:
        cap = index.capacity(leaf)
        if cap is not None and self.per_leaf.get(leaf.id, 0) >= cap:
            return False
        for node_id, child_idx in index.leaf_constraints[leaf.id]:
            used = self.branch_use.get(node_id)
            if used and child_idx not in used and len(used) >= index.budget[node_id]:
                return False
        return True

    def pure_gain(self, index: _TreeIndex, leaf: RequirementNode) -> bool:
        """Taking this leaf cannot block any other record: unbounded
        capacity and no fresh disjunction branch consumed."""
        if index.capacity(leaf) is not None:
            return False
        for node_id, child_idx in index.leaf_constraints[leaf.id]:
            used = self.branch_use.get(node_id)
            if not used or child_idx not in used:
                return False
        return True

    def take(self, index: _TreeIndex, record_index: int, hours: Fraction, leaf: RequirementNode):
        self.per_leaf[leaf.id] = self.per_leaf.get(leaf.id, 0) + 1
        self.hours_at[leaf.id] = self.hours_at.get(leaf.id, Fraction(0)) + hours
        for node_id, child_idx in index.leaf_constraints[leaf.id]:
            used = self.branch_use.setdefault(node_id, {})
            used[child_idx] = used.get(child_idx, 0) + 1
        self.pairs.append((record_index, leaf.id))
        self.hours += hours

    def release(self, index: _TreeIndex, record_index: int, hours: Fraction, leaf: RequirementNode):
        self.per_leaf[leaf.id] -= 1
        self.hours_at[leaf.id] -= hours
        for node_id, child_idx in index.leaf_constraints[leaf.id]:
            used = self.branch_use[node_id]
            used[child_idx] -= 1
            if not used[child_idx]:
                del used[child_idx]
        self.pairs.remove((record_index, leaf.id))
        self.hours -= hours


def _exam_truth(index: _TreeIndex, transcript: Transcript) -> dict[str, bool]:
    return {
        leaf.id: exam_leaf_satisfied(leaf, transcript)
        for leaf in index.leaves
        if leaf.kind is NodeKind.EXAM
    }


def _state_leaf_truth(
    index: _TreeIndex, state: _SearchState, exam_truth: Mapping[str, bool]
) -> dict[str, bool]:
    truth = {}
    for leaf in index.leaves:
        if leaf.kind is NodeKind.COURSE:
            truth[leaf.id] = state.per_leaf.get(leaf.id, 0) >= 1
        elif leaf.kind is NodeKind.CREDITS:
            truth[leaf.id] = state.hours_at.get(leaf.id, Fraction(0)) >= leaf.min_credit_hours
        else:
            truth[leaf.id] = exam_truth[leaf.id]
    return truth


def _root_true(node: RequirementNode, truth: Mapping[str, bool]) -> bool:
    if node.is_leaf:
        return truth[node.id]
    hits = sum(_root_true(c, truth) for c in node.children)
    if node.kind is NodeKind.ALL:
        return hits == len(node.children)
    if node.kind is NodeKind.ANY:
        return hits >= 1
    return hits >= (node.choose_k or 0)


def _search_exact(
    index: _TreeIndex, transcript: Transcript
) -> tuple[tuple[int, str], ...]:
    """Branch and bound over per-record leaf choices.

    Records are scanned in index order and leaves in id order with "leave
    unassigned" last, so among objective ties the first complete solution
    found is the lexicographically smallest; an explicit key comparison
    keeps that property independent of visit order. Two cuts keep the
    search desk-scale: a relaxed bound (even assigning every remaining
    matchable record, ignoring the disjunction coupling, cannot beat the
    incumbent) and a dominance rule (skipping a record is pointless when
    some assignable leaf has unbounded capacity and consumes no fresh
    disjunction branch).
    """
    cands = _candidates(index, transcript)
    n = len(cands)
    suffix = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + cands[i][1]

    exam_truth = _exam_truth(index, transcript)
    best_key: list = [None]
    state = _SearchState()

    def complete():
        if best_key[0] is not None and state.hours < -best_key[0][0]:
            return
        truth = _state_leaf_truth(index, state, exam_truth)
        key = (-state.hours, -sum(truth.values()), tuple(state.pairs))
        if best_key[0] is None or key < best_key[0]:
            best_key[0] = key

    def dfs(i: int):
        if best_key[0] is not None and state.hours + suffix[i] < -best_key[0][0]:
            return
        if i == n:
            complete()
            return
        record_index, hours, leaves = cands[i]
        skip_dominated = False
        for leaf in leaves:
            if state.can_take(index, leaf):
                if state.pure_gain(index, leaf):
                    skip_dominated = True
                state.take(index, record_index, hours, leaf)
                dfs(i + 1)
                state.release(index, record_index, hours, leaf)
        if not skip_dominated:
            dfs(i + 1)

    dfs(0)
    assert best_key[0] is not None
    return best_key[0][2]


def satisfiable(
    root: RequirementNode, transcript: Transcript, index: "_TreeIndex | None" = None
) -> bool:
    """Whether any legal assignment makes the root evaluate true.

    The hours-maximal audit assignment may legally leave the root
    unsatisfied when a heavier disjunction branch cannot be completed, so
    completion planning asks this weaker, monotone question instead.
    ``index`` lets repeat callers reuse the tree indexing.
    """
    if index is None:
        index = _TreeIndex(root)
    exam_truth = _exam_truth(index, transcript)
    cands = _candidates(index, transcript)
    n = len(cands)

    # Per leaf: positions (in scan order) and suffix hour totals of the
    # records that match it, for the optimistic cut below.
    match_pos: dict[str, list[int]] = {l.id: [] for l in index.leaves}
    for pos, (_, _, leaves) in enumerate(cands):
        for leaf in leaves:
            match_pos[leaf.id].append(pos)
    suffix_hours: dict[str, list[Fraction]] = {}
    for leaf_id, positions in match_pos.items():
        totals = [Fraction(0)] * (len(positions) + 1)
        for k in range(len(positions) - 1, -1, -1):
            totals[k] = totals[k + 1] + cands[positions[k]][1]
        suffix_hours[leaf_id] = totals

    state = _SearchState()

    def optimistic(i: int) -> bool:
        """Could the root still come true, granting every record from
        position ``i`` on its best case individually? Blocked stays
        blocked deeper in the search, so a false here is final."""
        truth = {}
        for leaf in index.leaves:
            if leaf.kind is NodeKind.EXAM:
                truth[leaf.id] = exam_truth[leaf.id]
                continue
            if leaf.kind is NodeKind.COURSE:
                if state.per_leaf.get(leaf.id, 0) >= 1:
                    truth[leaf.id] = True
                    continue
            else:
                if state.hours_at.get(leaf.id, Fraction(0)) >= leaf.min_credit_hours:
                    truth[leaf.id] = True
                    continue
            if not state.can_take(index, leaf):
                truth[leaf.id] = False
                continue
            k = bisect.bisect_left(match_pos[leaf.id], i)
            if leaf.kind is NodeKind.COURSE:
                truth[leaf.id] = k < len(match_pos[leaf.id])
            else:
                have = state.hours_at.get(leaf.id, Fraction(0))
                truth[leaf.id] = have + suffix_hours[leaf.id][k] >= leaf.min_credit_hours
        return _root_true(root, truth)

    def dfs(i: int) -> bool:
        if not optimistic(i):
            return False
        if i == n:
            return True
        record_index, hours, leaves = cands[i]
        for leaf in leaves:
            if state.can_take(index, leaf):
                state.take(index, record_index, hours, leaf)
                if dfs(i + 1):
                    return True
                state.release(index, record_index, hours, leaf)
        return dfs(i + 1)

    return dfs(0)


def _search_greedy(
    index: _TreeIndex, transcript: Transcript
) -> tuple[tuple[int, str], ...]:
    """Greedy by credit hours with one local exchange pass."""
    cands = _candidates(index, transcript)
    order = sorted(range(len(cands)), key=lambda i: (-cands[i][1], cands[i][0]))
    state = _SearchState()
    placed: dict[int, RequirementNode] = {}
    for i in order:
        record_index, hours, leaves = cands[i]
        for leaf in leaves:
            if state.can_take(index, leaf):
                state.take(index, record_index, hours, leaf)
                placed[i] = leaf
                break
    for i in order:
        if i in placed:
            continue
        record_index, hours, leaves = cands[i]
        # Try displacing a lighter record whose leaf we could use.
        for leaf in leaves:
            blocker = next(
                (
                    j
                    for j, other in placed.items()
                    if other.id == leaf.id and cands[j][1] < hours
                ),
                None,
            )
            if blocker is None:
                continue
            b_index, b_hours, b_leaves = cands[blocker]
            old_leaf = placed[blocker]
            state.release(index, b_index, b_hours, old_leaf)
            del placed[blocker]
            if state.can_take(index, leaf):
                state.take(index, record_index, hours, leaf)
                placed[i] = leaf
                # Re-home the displaced record if possible.
                for other_leaf in b_leaves:
                    if state.can_take(index, other_leaf):
                        state.take(index, b_index, b_hours, other_leaf)
                        placed[blocker] = other_leaf
                        break
                break
            state.take(index, b_index, b_hours, old_leaf)
            placed[blocker] = old_leaf
    return tuple(sorted(state.pairs))


def audit(
    transcript: Transcript,
    program: Program,
    policy: AuditPolicy = DEFAULT_POLICY,
    courses: Mapping[str, Course] | None = None,
) -> AuditResult:
    """Audit a transcript against a program, optimally applying credit."""
    if courses:
        for record in transcript.records:
            if record.is_course and record.course_id in courses:
                expected = courses[record.course_id].credit_hours
                if record.credit_hours != expected:
                    raise CatalogMismatch(
                        f"record {record.course_id}: hours {record.credit_hours} "
                        f"differ from catalog hours {expected}"
                    )

    index = _TreeIndex(program.root)
    within_limits = (
        len(transcript.records) <= policy.max_exact_records
        and len(index.leaves) <= policy.max_exact_leaves
    )
    if within_limits:
        pairs = _search_exact(index, transcript)
        exact = True
    elif policy.allow_heuristic:
        pairs = _search_greedy(index, transcript)
        exact = False
    else:
        raise LimitExceeded(
            f"{len(transcript.records)} records x {len(index.leaves)} leaves "
            f"exceeds exact policy limits"
        )

    assignment = Assignment(pairs)
    truth = _leaf_truth(index, transcript, assignment)
    status = _statuses(program.root, truth)
    applied = sum(
        (transcript.records[i].credit_hours for i, _ in assignment.pairs), Fraction(0)
    )
    return AuditResult(
        program_id=program.id,
        assignment=assignment,
        node_status=status,
        applied_credit_hours=applied,
        unapplied_credit_hours=transcript.total_credit_hours - applied,
        satisfied_leaf_count=sum(truth.values()),
        exact=exact,
        transcript=transcript,
    )


def audit_result_to_json(result: AuditResult) -> dict:
    """Stable-order serialization (assignment by record index, statuses preorder)."""
    from .serialize import number_to_json

    return {
        "program_id": result.program_id,
        "exact": result.exact,
        "applied_credit_hours": number_to_json(result.applied_credit_hours),
        "unapplied_credit_hours": number_to_json(result.unapplied_credit_hours),
        "satisfied_leaf_count": result.satisfied_leaf_count,
        "assignment": [
            {"record_index": i, "leaf_id": leaf_id} for i, leaf_id in result.assignment.pairs
        ],
        "node_status": {node_id: st.value for node_id, st in result.node_status.items()},
    }
