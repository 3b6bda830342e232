"""Term-by-term degree planning, plan counting, and completion selection."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Mapping

from .audit import AuditResult, satisfiable
from .errors import Infeasible, TooLarge, Unsatisfiable, ValidationError
from .model import Course, Grade, NodeKind, Program, TranscriptRecord

COUNTING_DP_LIMIT = 24
COMPLETION_EXACT_LIMIT = 30


@dataclass(frozen=True, slots=True)
class PlanConstraints:
    num_terms: int = 12
    min_credits_per_term: Fraction = Fraction(0)
    max_credits_per_term: Fraction = Fraction(15)
    exact_courses_per_term: int | None = None
    toxic_pairs: frozenset[frozenset[str]] = frozenset()

    def __post_init__(self):
        if self.num_terms < 1:
            raise ValidationError("num_terms must be positive")
        if self.min_credits_per_term < 0:
            raise ValidationError("min_credits_per_term must be non-negative")
        if self.max_credits_per_term <= 0:
            raise ValidationError("max_credits_per_term must be positive")
        if self.min_credits_per_term > self.max_credits_per_term:
            raise ValidationError("min_credits_per_term exceeds max_credits_per_term")
        if self.exact_courses_per_term is not None and self.exact_courses_per_term < 1:
            raise ValidationError("exact_courses_per_term must be positive")
        for pair in self.toxic_pairs:
            if len(pair) != 2:
                raise ValidationError("toxic pairs must contain exactly two course ids")


@dataclass(frozen=True, slots=True)
class DegreePlan:
    terms: tuple[frozenset[str], ...]
    total_credit_hours: Fraction

    @property
    def num_terms(self) -> int:
        return len(self.terms)


def _course_hours(course_ids, courses: Mapping[str, Course]) -> Fraction:
    return sum((courses[c].credit_hours for c in course_ids), Fraction(0))


def _internal_prereqs(
    course_ids: frozenset[str], courses: Mapping[str, Course], satisfied: frozenset[str]
) -> dict[str, frozenset[str]]:
    """Prerequisites each course still needs inside the set to schedule."""
    out = {}
    for cid in course_ids:
        out[cid] = frozenset(
            p for p in courses[cid].prerequisites if p not in satisfied
        )
    return out


def _chain_depth(pending: dict[str, frozenset[str]]) -> int:
    """Longest prerequisite chain among the pending courses."""
    depth: dict[str, int] = {}

    def visit(cid: str) -> int:
        if cid in depth:
            return depth[cid]
        depth[cid] = 1 + max(
            (visit(p) for p in pending[cid] if p in pending), default=0
        )
        return depth[cid]

    return max((visit(c) for c in pending), default=0)


def _term_subsets(
    available: list[str],
    courses: Mapping[str, Course],
    toxic: frozenset[frozenset[str]],
    min_load: Fraction,
    max_load: Fraction,
) -> Iterator[tuple[str, ...]]:
    """Non-empty feasible term subsets in lexicographic order of sorted ids."""
    chosen: list[str] = []

    def extend(start: int, load: Fraction):
        if chosen and load >= min_load:
            yield tuple(chosen)
        for k in range(start, len(available)):
            cid = available[k]
            new_load = load + courses[cid].credit_hours
            if new_load > max_load:
                continue
            if any(frozenset((cid, other)) in toxic for other in chosen):
                continue
            chosen.append(cid)
            yield from extend(k + 1, new_load)
            chosen.pop()

    yield from extend(0, Fraction(0))


def generate_plan(
    curriculum: frozenset[str] | set[str],
    completed: frozenset[str] | set[str],
    constraints: PlanConstraints,
    courses: Mapping[str, Course],
) -> DegreePlan:
    """Schedule the curriculum into the fewest terms, then flatten the load.

    Among plans with minimal non-empty term count and minimal maximum
    term load, the lexicographically smallest term sequence (terms as
    sorted course-id tuples) is returned.
    """
    completed = frozenset(completed)
    to_schedule = frozenset(curriculum) - completed
    for cid in sorted(to_schedule):
        if cid not in courses:
            raise ValidationError(f"unknown course in curriculum: {cid!r}")

    missing = {
        cid: sorted(p for p in courses[cid].prerequisites if p not in to_schedule and p not in completed)
        for cid in to_schedule
    }
    missing = {cid: m for cid, m in missing.items() if m}
    if missing:
        cid, prereqs = sorted(missing.items())[0]
        raise Infeasible(
            f"course {cid!r} needs prerequisite(s) {prereqs} outside the plan",
            reason="prerequisite_depth",
        )

    if not to_schedule:
        return DegreePlan(terms=(), total_credit_hours=Fraction(0))

    total = _course_hours(to_schedule, courses)
    heaviest = max(to_schedule, key=lambda c: (courses[c].credit_hours, c))
    if courses[heaviest].credit_hours > constraints.max_credits_per_term:
        raise Infeasible(
            f"course {heaviest!r} alone exceeds the per-term credit limit",
            reason="capacity",
        )
    pending = _internal_prereqs(to_schedule, courses, completed)
    depth = _chain_depth(pending)
    if depth > constraints.num_terms:
        raise Infeasible(
            f"prerequisite chains need {depth} terms, only {constraints.num_terms} allowed",
            reason="prerequisite_depth",
        )
    if total > constraints.num_terms * constraints.max_credits_per_term:
        raise Infeasible(
            f"{total} credit hours cannot fit in {constraints.num_terms} terms "
            f"of at most {constraints.max_credits_per_term}",
            reason="capacity",
        )

    lower_bound = max(depth, math.ceil(total / constraints.max_credits_per_term), 1)
    plan_terms = None
    num_terms = lower_bound
    for num_terms in range(lower_bound, constraints.num_terms + 1):
        plan_terms = _first_plan(
            to_schedule, completed, constraints, courses, num_terms,
            constraints.max_credits_per_term,
        )
        if plan_terms is not None:
            break

    if plan_terms is None:
        if constraints.toxic_pairs:
            relaxed = replace(constraints, toxic_pairs=frozenset())
            try:
                generate_plan(to_schedule, completed, relaxed, courses)
            except Infeasible:
                pass
            else:
                raise Infeasible(
                    "no schedule avoids the toxic course pairings", reason="toxic_pair"
                )
        raise Infeasible(
            "no schedule satisfies the term credit bounds", reason="capacity"
        )

    # Minimum term count found; now flatten the peak load. Any term's load
    # is a subset sum of the course hours, so binary search over those.
    # Feasibility under a load cap is monotone in the cap, and the lex-first
    # plan under the minimal feasible cap is the overall optimum.
    loads = _achievable_loads(to_schedule, courses, constraints.max_credits_per_term)
    current_max = max(_course_hours(t, courses) for t in plan_terms)
    lo, hi = 0, loads.index(current_max)
    while lo < hi:
        mid = (lo + hi) // 2
        attempt = _first_plan(
            to_schedule, completed, constraints, courses, num_terms, loads[mid]
        )
        if attempt is None:
            lo = mid + 1
        else:
            plan_terms = attempt
            hi = mid

    return DegreePlan(
        terms=tuple(frozenset(t) for t in plan_terms),
        total_credit_hours=total,
    )


def _achievable_loads(
    course_ids: frozenset[str], courses: Mapping[str, Course], cap: Fraction
) -> list[Fraction]:
    """Every subset sum of the course hours that fits under the cap."""
    sums = {Fraction(0)}
    for cid in sorted(course_ids):
        hours = courses[cid].credit_hours
        sums |= {s + hours for s in sums if s + hours <= cap}
    sums.discard(Fraction(0))
    return sorted(sums)


def _first_plan(
    to_schedule: frozenset[str],
    completed: frozenset[str],
    constraints: PlanConstraints,
    courses: Mapping[str, Course],
    num_terms: int,
    load_cap: Fraction,
) -> tuple[tuple[str, ...], ...] | None:
    """Lexicographically first plan using at most ``num_terms`` terms with
    every term load at most ``load_cap``, or None.

    Term subsets are explored in lex order of their sorted course ids, so
    the first complete plan is the lex-smallest one; dead (scheduled set,
    terms left) states are memoized.
    """
    if load_cap < constraints.min_credits_per_term:
        return None
    failed: set[tuple[frozenset[str], int]] = set()
    total = _course_hours(to_schedule, courses)

    def dfs(
        scheduled: frozenset[str], done_hours: Fraction, terms_left: int
    ) -> tuple[tuple[str, ...], ...] | None:
        remaining = to_schedule - scheduled
        if not remaining:
            return ()
        if terms_left == 0:
            return None
        key = (scheduled, terms_left)
        if key in failed:
            return None
        if total - done_hours > terms_left * load_cap:
            failed.add(key)
            return None
        pending = _internal_prereqs(remaining, courses, completed | scheduled)
        if _chain_depth(pending) > terms_left:
            failed.add(key)
            return None
        available = sorted(c for c, need in pending.items() if not need)
        for subset in _term_subsets(
            available, courses, constraints.toxic_pairs,
            constraints.min_credits_per_term, load_cap,
        ):
            rest = dfs(
                scheduled | frozenset(subset),
                done_hours + _course_hours(subset, courses),
                terms_left - 1,
            )
            if rest is not None:
                return (subset,) + rest
        failed.add(key)
        return None

    return dfs(frozenset(), Fraction(0), num_terms)


# ---------------------------------------------------------------------------
# Plan counting


def count_plans(
    curriculum: frozenset[str] | set[str],
    constraints: PlanConstraints,
    courses: Mapping[str, Course],
) -> int:
    """Exact number of term assignments of the curriculum.

    Terms are labeled (term 1 differs from term 2) and order within a
    term is immaterial. When ``exact_courses_per_term`` is set it
    overrides the credit bounds; otherwise every term must fall in the
    credit window, and empty terms are allowed only when the minimum is
    zero. Prerequisites outside the curriculum are assumed already
    satisfied. Beyond 24 courses only the prerequisite-free
    exact-courses-per-term case has a closed form; anything else raises
    TooLarge.
    """
    ids = sorted(frozenset(curriculum))
    for cid in ids:
        if cid not in courses:
            raise ValidationError(f"unknown course in curriculum: {cid!r}")
    n = len(ids)
    num_terms = constraints.num_terms
    in_set = set(ids)
    has_prereqs = any(
        p in in_set for cid in ids for p in courses[cid].prerequisites
    )

    if (
        constraints.exact_courses_per_term is not None
        and not has_prereqs
        and not constraints.toxic_pairs
    ):
        k = constraints.exact_courses_per_term
        if n != k * num_terms:
            return 0
        return math.factorial(n) // math.factorial(k) ** num_terms

    if n > COUNTING_DP_LIMIT:
        raise TooLarge(
            f"{n} courses exceeds the {COUNTING_DP_LIMIT}-course exact counting limit"
        )

    pos = {cid: i for i, cid in enumerate(ids)}
    prereq_mask = [0] * n
    for cid in ids:
        for p in courses[cid].prerequisites:
            if p in pos:
                prereq_mask[pos[cid]] |= 1 << pos[p]
    hours = [courses[cid].credit_hours for cid in ids]
    toxic_masks: list[int] = []
    for pair in constraints.toxic_pairs:
        a, b = sorted(pair)
        if a in pos and b in pos:
            toxic_masks.append((1 << pos[a]) | (1 << pos[b]))

    exact_k = constraints.exact_courses_per_term
    min_cr = constraints.min_credits_per_term
    max_cr = constraints.max_credits_per_term
    allow_empty = exact_k is None and min_cr == 0
    full = (1 << n) - 1

    def term_options(avail: list[int]) -> Iterator[int]:
        """Feasible term masks drawn from the available courses."""
        chosen_mask = 0
        chosen_load = Fraction(0)
        chosen_count = 0

        def extend(start: int) -> Iterator[int]:
            nonlocal chosen_mask, chosen_load, chosen_count
            if exact_k is not None:
                if chosen_count == exact_k:
                    yield chosen_mask
                    return
            elif chosen_mask and chosen_load >= min_cr:
                yield chosen_mask
            for idx in range(start, len(avail)):
                c = avail[idx]
                bit = 1 << c
                if exact_k is None and chosen_load + hours[c] > max_cr:
                    continue
                if any((tm & (chosen_mask | bit)) == tm for tm in toxic_masks):
                    continue
                chosen_mask |= bit
                chosen_load += hours[c]
                chosen_count += 1
                yield from extend(idx + 1)
                chosen_mask &= ~bit
                chosen_load -= hours[c]
                chosen_count -= 1

        yield from extend(0)

    states: dict[int, int] = {0: 1}
    for _ in range(num_terms):
        nxt: dict[int, int] = {}
        for mask, ways in states.items():
            avail = [
                c for c in range(n)
                if not (mask >> c) & 1 and (prereq_mask[c] & mask) == prereq_mask[c]
            ]
            if allow_empty:
                nxt[mask] = nxt.get(mask, 0) + ways
            for term_mask in term_options(avail):
                new_mask = mask | term_mask
                nxt[new_mask] = nxt.get(new_mask, 0) + ways
        states = nxt
    return states.get(full, 0)


# ---------------------------------------------------------------------------
# Completion selection


@dataclass(frozen=True, slots=True)
class CompletionSelection:
    courses: frozenset[str]
    credit_hours: Fraction
    exact: bool


def _completion_candidates(
    result: AuditResult, program: Program, courses: Mapping[str, Course]
) -> list[str]:
    """Courses that could still help: referenced by some requirement leaf,
    offered by the program's institution, and not already on the transcript."""
    taken = {
        r.course_id for r in result.transcript.records if r.is_course
    }
    referenced: set[str] = set()
    for leaf in program.root.leaves():
        if leaf.kind is NodeKind.COURSE and leaf.course_id is not None:
            referenced.add(leaf.course_id)
        elif leaf.kind is NodeKind.CREDITS:
            referenced.update(leaf.course_pool)
    return sorted(
        c for c in referenced
        if c in courses
        and courses[c].institution_id == program.institution_id
        and c not in taken
    )


def _hypothetical_records(
    course_ids, courses: Mapping[str, Course]
) -> tuple[TranscriptRecord, ...]:
    return tuple(
        TranscriptRecord(
            institution_id=courses[c].institution_id,
            course_id=c,
            grade=Grade.A,
            credit_hours=courses[c].credit_hours,
        )
        for c in sorted(course_ids)
    )


def _forced_courses(result: AuditResult, program: Program, candidate_set: frozenset[str]) -> frozenset[str]:
    """Candidates every satisfying augmentation must contain: courses of
    mandatory COURSE leaves (on an all-conjunctive root path) that no
    transcript record can satisfy."""
    records = result.transcript.records
    forced: set[str] = set()

    def walk(node, mandatory: bool):
        if node.is_leaf:
            if mandatory and node.kind is NodeKind.COURSE and node.course_id in candidate_set:
                covered = any(
                    r.is_course
                    and r.elective_level is None
                    and r.course_id == node.course_id
                    and r.grade >= node.min_grade
                    for r in records
                )
                if not covered:
                    forced.add(node.course_id)
            return
        conjunctive = (
            node.kind is NodeKind.ALL
            or (node.kind is NodeKind.CHOOSE and node.choose_k == len(node.children))
            or (node.kind is NodeKind.ANY and len(node.children) == 1)
        )
        for child in node.children:
            walk(child, mandatory and conjunctive)

    walk(program.root, True)
    return frozenset(forced)


def select_completion_courses(
    result: AuditResult,
    program: Program,
    courses: Mapping[str, Course],
) -> CompletionSelection:
    """Minimum-credit set of untaken courses whose addition satisfies the root.

    "Satisfies" means some legal assignment of the augmented transcript
    makes the root true, which a re-audit can certify. Exact via branch
    and bound up to 30 candidates; beyond that a greedy add/strip pass is
    used and flagged inexact.
    """
    from .audit import _TreeIndex

    transcript = result.transcript
    tree_index = _TreeIndex(program.root)
    sat_cache: dict[frozenset[str], bool] = {}

    def satisfies(chosen: frozenset[str]) -> bool:
        if chosen not in sat_cache:
            augmented = transcript.with_records(_hypothetical_records(chosen, courses))
            sat_cache[chosen] = satisfiable(program.root, augmented, tree_index)
        return sat_cache[chosen]

    if satisfies(frozenset()):
        return CompletionSelection(frozenset(), Fraction(0), exact=True)

    candidates = _completion_candidates(result, program, courses)
    if not satisfies(frozenset(candidates)):
        raise Unsatisfiable(
            f"program {program.id}: requirements reference no attainable course set"
        )

    forced = _forced_courses(result, program, frozenset(candidates))
    if len(candidates) <= COMPLETION_EXACT_LIMIT:
        chosen = _select_exact(candidates, forced, courses, satisfies)
        exact = True
    else:
        chosen = _select_greedy(candidates, courses, satisfies)
        exact = False
    return CompletionSelection(chosen, _course_hours(chosen, courses), exact)


def _select_exact(candidates, forced, courses, satisfies) -> frozenset[str]:
    free = [c for c in candidates if c not in forced]
    hours = {c: courses[c].credit_hours for c in candidates}
    base_load = sum((hours[c] for c in forced), Fraction(0))
    cheapest_from: list[Fraction | None] = [None] * (len(free) + 1)
    for i in range(len(free) - 1, -1, -1):
        nxt = cheapest_from[i + 1]
        here = hours[free[i]]
        cheapest_from[i] = here if nxt is None else min(here, nxt)

    best: list = [None]  # (total hours, sorted id tuple)

    # Free candidates are scanned in ascending id order, include before
    # exclude, and a satisfied set is recorded without extension (supersets
    # cost strictly more). Among equal-hour sets that visits the
    # lex-smallest sorted tuple first, so equal-potential branches can be
    # cut outright.
    def dfs(i: int, chosen: list[str], load: Fraction):
        key_set = forced | frozenset(chosen)
        if satisfies(key_set):
            key = (load, tuple(sorted(key_set)))
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        if i == len(free):
            return
        # At least one more course is needed.
        if best[0] is not None and load + cheapest_from[i] >= best[0][0]:
            return
        cid = free[i]
        chosen.append(cid)
        dfs(i + 1, chosen, load + hours[cid])
        chosen.pop()
        dfs(i + 1, chosen, load)

    dfs(0, [], base_load)
    assert best[0] is not None
    return frozenset(best[0][1])


def _select_greedy(candidates, courses, satisfies) -> frozenset[str]:
    order = sorted(candidates, key=lambda c: (courses[c].credit_hours, c))
    chosen: list[str] = []
    for cid in order:
        chosen.append(cid)
        if satisfies(frozenset(chosen)):
            break
    kept = set(chosen)
    for cid in sorted(kept, key=lambda c: (-courses[c].credit_hours, c)):
        trial = kept - {cid}
        if satisfies(frozenset(trial)):
            kept = trial
    return frozenset(kept)
