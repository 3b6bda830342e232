"""Standalone degree-plan checker.

Re-derives every plan rule directly from the inputs with plain loops and
shares no logic with the plan generator, so it can vouch for generated
plans independently. Returns human-readable violation strings; an empty
list means the plan is valid.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .model import Course
from .planner import PlanConstraints


def check_plan(
    terms: Sequence[Sequence[str]],
    curriculum: frozenset[str] | set[str],
    completed: frozenset[str] | set[str],
    constraints: PlanConstraints,
    courses: Mapping[str, Course],
) -> list[str]:
    problems: list[str] = []
    curriculum = frozenset(curriculum)
    completed = frozenset(completed)
    expected = curriculum - completed

    seen: set[str] = set()
    for number, term in enumerate(terms, start=1):
        for cid in term:
            if cid in seen:
                problems.append(f"course {cid!r} is scheduled more than once")
            seen.add(cid)
            if cid not in courses:
                problems.append(f"term {number}: unknown course {cid!r}")

    for cid in sorted(expected - seen):
        problems.append(f"course {cid!r} is in the curriculum but never scheduled")
    for cid in sorted(seen - expected):
        if cid in completed:
            problems.append(f"course {cid!r} is already completed")
        elif cid in courses or cid in seen:
            problems.append(f"course {cid!r} is scheduled but not in the curriculum")

    if len(terms) > constraints.num_terms:
        problems.append(
            f"plan uses {len(terms)} terms, more than the {constraints.num_terms} allowed"
        )

    term_of: dict[str, int] = {}
    for number, term in enumerate(terms, start=1):
        for cid in term:
            term_of.setdefault(cid, number)

    for number, term in enumerate(terms, start=1):
        known = [cid for cid in term if cid in courses]
        load = Fraction(0)
        for cid in known:
            load += courses[cid].credit_hours
        if not term:
            problems.append(f"term {number} is empty")
            continue
        if load > constraints.max_credits_per_term:
            problems.append(
                f"term {number}: {load} credit hours exceeds the maximum "
                f"{constraints.max_credits_per_term}"
            )
        if load < constraints.min_credits_per_term:
            problems.append(
                f"term {number}: {load} credit hours is under the minimum "
                f"{constraints.min_credits_per_term}"
            )
        for cid in known:
            for prereq in sorted(courses[cid].prerequisites):
                if prereq in completed:
                    continue
                when = term_of.get(prereq)
                if when is None:
                    problems.append(
                        f"term {number}: {cid!r} needs {prereq!r}, which is neither "
                        f"completed nor scheduled"
                    )
                elif when >= number:
                    problems.append(
                        f"term {number}: {cid!r} needs {prereq!r} in a strictly earlier term"
                    )
        term_set = set(term)
        for pair in constraints.toxic_pairs:
            if pair <= term_set:
                a, b = sorted(pair)
                problems.append(f"term {number}: toxic pairing of {a!r} and {b!r}")

    return problems
