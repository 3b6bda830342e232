"""Catalog snapshots: immutable, cross-validated views of a catalog directory.

A catalog directory holds one or more UTF-8 JSON files, each with any of
the top-level sections ``institutions``, ``courses``, ``programs``,
``equivalences``, and ``exams``. Ids are globally unique across the
directory. Ingestion resolves every cross-reference and publishes an
immutable snapshot; re-ingesting produces a fresh snapshot with a larger
version number, never a mutation of an existing one.
"""

from __future__ import annotations

import dataclasses
import itertools
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from . import serialize
from .errors import CrossRefError, DuplicateIdError, SchemaError, ValidationError
from .model import (
    Course,
    Disposition,
    EquivalenceRule,
    ExamDefinition,
    Institution,
    Program,
    validate_tree,
)

_version_lock = threading.Lock()
_version_counter = itertools.count(1)


def _next_version() -> int:
    with _version_lock:
        return next(_version_counter)


@dataclass(frozen=True)
class CatalogSnapshot:
    version: int
    source_path: str
    loaded_at: float
    institutions: Mapping[str, Institution]
    courses: Mapping[str, Course]
    programs: Mapping[str, Program]
    exams: Mapping[str, ExamDefinition]
    equivalences: Mapping[tuple[str, str], EquivalenceRule] = field(default_factory=dict)

    def equivalence_for(self, source_course_id: str, target_institution_id: str) -> EquivalenceRule | None:
        return self.equivalences.get((source_course_id, target_institution_id))

    def programs_at(self, institution_id: str) -> list[Program]:
        return sorted(
            (p for p in self.programs.values() if p.institution_id == institution_id),
            key=lambda p: p.id,
        )


def _check_prerequisite_graph(courses: Mapping[str, Course]) -> None:
    for course in courses.values():
        for prereq in course.prerequisites:
            other = courses.get(prereq)
            if other is None:
                raise CrossRefError(f"course {course.id}: unknown prerequisite {prereq!r}")
            if other.institution_id != course.institution_id:
                raise CrossRefError(
                    f"course {course.id}: prerequisite {prereq!r} belongs to another institution"
                )

    # Iterative DFS cycle detection over the prerequisite digraph.
    WHITE, GREY, BLACK = 0, 1, 2
    color = {cid: WHITE for cid in courses}
    for start in sorted(courses):
        if color[start] != WHITE:
            continue
        stack = [(start, iter(sorted(courses[start].prerequisites)))]
        color[start] = GREY
        while stack:
            node, edges = stack[-1]
            advanced = False
            for nxt in edges:
                if color[nxt] == GREY:
                    raise ValidationError(f"prerequisite cycle through {nxt!r}")
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(sorted(courses[nxt].prerequisites))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()


def _check_section(raw: object, name: str, path: Path) -> list:
    if raw is None:
        return []
    if not isinstance(raw, list):
        raise SchemaError(f"{path.name}: section {name!r} must be a list")
    return raw


def ingest_catalog(directory: str | Path) -> CatalogSnapshot:
    """Load and cross-validate every catalog file under ``directory``.

    Files are read in sorted name order for determinism. Raises
    SchemaError, DuplicateIdError, or CrossRefError; on success returns a
    fully resolved immutable snapshot carrying a fresh version.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise SchemaError(f"catalog directory not found: {directory}")

    institutions: dict[str, Institution] = {}
    courses: dict[str, Course] = {}
    program_docs: list[tuple[Path, dict]] = []
    exams: dict[str, ExamDefinition] = {}
    equivalence_docs: list[tuple[Path, dict]] = []
    all_ids: set[str] = set()

    def claim_id(entity_id: str, path: Path) -> None:
        if entity_id in all_ids:
            raise DuplicateIdError(f"{path.name}: duplicate id {entity_id!r}")
        all_ids.add(entity_id)

    for path in sorted(directory.glob("*.json")):
        doc = serialize.loads(path.read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise SchemaError(f"{path.name}: top level must be an object")
        for raw in _check_section(doc.get("institutions"), "institutions", path):
            inst = serialize.institution_from_json(raw)
            claim_id(inst.id, path)
            institutions[inst.id] = inst
        for raw in _check_section(doc.get("courses"), "courses", path):
            course = serialize.course_from_json(raw)
            claim_id(course.id, path)
            courses[course.id] = course
        for raw in _check_section(doc.get("exams"), "exams", path):
            exam = serialize.exam_from_json(raw)
            claim_id(exam.id, path)
            exams[exam.id] = exam
        for raw in _check_section(doc.get("programs"), "programs", path):
            program_docs.append((path, raw))
        for raw in _check_section(doc.get("equivalences"), "equivalences", path):
            equivalence_docs.append((path, raw))

    for course in courses.values():
        if course.institution_id not in institutions:
            raise CrossRefError(f"course {course.id}: unknown institution {course.institution_id!r}")
    _check_prerequisite_graph(courses)

    programs: dict[str, Program] = {}
    for path, raw in program_docs:
        program = serialize.program_from_json(raw)
        claim_id(program.id, path)
        if program.institution_id not in institutions:
            raise CrossRefError(f"program {program.id}: unknown institution {program.institution_id!r}")
        institution_courses = {
            cid: c for cid, c in courses.items() if c.institution_id == program.institution_id
        }
        violations = validate_tree(program.root, institution_courses, exams)
        if violations:
            first = violations[0]
            raise ValidationError(
                f"program {program.id}: {first.message}",
                detail=[dataclasses.asdict(v) for v in violations],
            )
        programs[program.id] = program

    equivalences: dict[tuple[str, str], EquivalenceRule] = {}
    for path, raw in equivalence_docs:
        rule = serialize.equivalence_from_json(raw)
        if rule.source_course_id not in courses:
            raise CrossRefError(
                f"{path.name}: equivalence references unknown course {rule.source_course_id!r}"
            )
        if rule.target_institution_id not in institutions:
            raise CrossRefError(
                f"{path.name}: equivalence references unknown institution {rule.target_institution_id!r}"
            )
        if rule.disposition is Disposition.EQUIVALENT:
            target = courses.get(rule.target_course_id)
            if target is None:
                raise CrossRefError(
                    f"{path.name}: equivalence references unknown course {rule.target_course_id!r}"
                )
            if target.institution_id != rule.target_institution_id:
                raise CrossRefError(
                    f"{path.name}: target course {rule.target_course_id!r} is not offered "
                    f"by {rule.target_institution_id!r}"
                )
        key = (rule.source_course_id, rule.target_institution_id)
        if key in equivalences:
            raise DuplicateIdError(f"{path.name}: duplicate equivalence for {key}")
        equivalences[key] = rule

    return CatalogSnapshot(
        version=_next_version(),
        source_path=str(directory),
        loaded_at=time.time(),
        institutions=MappingProxyType(dict(sorted(institutions.items()))),
        courses=MappingProxyType(dict(sorted(courses.items()))),
        programs=MappingProxyType(dict(sorted(programs.items()))),
        exams=MappingProxyType(dict(sorted(exams.items()))),
        equivalences=MappingProxyType(dict(sorted(equivalences.items()))),
    )


def snapshot_from_objects(
    institutions: list[Institution],
    courses: list[Course],
    programs: list[Program],
    equivalences: list[EquivalenceRule] = (),
    exams: list[ExamDefinition] = (),
    source_path: str = "<memory>",
) -> CatalogSnapshot:
    """Build a snapshot directly from model objects (tests, generators)."""
    return CatalogSnapshot(
        version=_next_version(),
        source_path=source_path,
        loaded_at=time.time(),
        institutions=MappingProxyType({i.id: i for i in institutions}),
        courses=MappingProxyType({c.id: c for c in courses}),
        programs=MappingProxyType({p.id: p for p in programs}),
        exams=MappingProxyType({e.id: e for e in exams}),
        equivalences=MappingProxyType(
            {(r.source_course_id, r.target_institution_id): r for r in equivalences}
        ),
    )
