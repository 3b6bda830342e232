"""HTTP facade over the engine.

Read endpoints serve a single immutable catalog snapshot captured at the
start of the request, so concurrent reloads never mix versions inside one
response. Reload swaps the snapshot atomically; in-flight requests finish
on the version they started with. Transcripts travel in request bodies;
nothing is persisted.

Routes (all JSON, UTF-8):
    GET  /v1/institutions
    GET  /v1/programs?institution=ID
    GET  /v1/programs/{id}
    POST /v1/audit   {program_id, transcript}
    POST /v1/whatif  {transcript, target_program_ids?, constraints?, cost_model?}
    POST /v1/plan    {program_id, transcript, constraints?}
    POST /v1/admin/reload
Errors use {code, message, detail} bodies: 400 bad input, 404 unknown id,
409 reload in progress, 422 engine errors, 500 internal.
"""

from __future__ import annotations

import os
import threading
from pathlib import Path
from typing import Any, Mapping

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import serialize
from .analyzer import (
    CostModel,
    DEFAULT_COST_MODEL,
    analysis_to_json,
    outcome_to_json,
    plan_to_json,
    rank_programs,
    whatif,
)
from .audit import audit, audit_result_to_json
from .catalog import CatalogSnapshot, ingest_catalog
from .errors import (
    Infeasible,
    LimitExceeded,
    SchemaError,
    TransferPathError,
    Unsatisfiable,
    ValidationError,
)
from .model import Credential, Transcript
from .planner import PlanConstraints
from .serialize import number_from_json

ENGINE_ERROR_STATUS = 422
_ENGINE_ERRORS = (Infeasible, Unsatisfiable, LimitExceeded)


class SnapshotHolder:
    """Atomic published snapshot with single-writer reload."""

    def __init__(self, catalog_dir: str | Path):
        self.catalog_dir = Path(catalog_dir)
        self._reload_lock = threading.Lock()
        self._snapshot = ingest_catalog(self.catalog_dir)

    @property
    def snapshot(self) -> CatalogSnapshot:
        return self._snapshot

    def reload(self) -> CatalogSnapshot:
        if not self._reload_lock.acquire(blocking=False):
            raise ReloadInProgress()
        try:
            fresh = ingest_catalog(self.catalog_dir)
            self._snapshot = fresh
            return fresh
        finally:
            self._reload_lock.release()


class ReloadInProgress(Exception):
    pass


def _error(status: int, code: str, message: str, detail: Any = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _parse_constraints(raw: Mapping | None) -> PlanConstraints:
    if raw is None:
        return PlanConstraints()
    if not isinstance(raw, Mapping):
        raise SchemaError("constraints must be an object")
    kwargs: dict[str, Any] = {}
    if "num_terms" in raw:
        kwargs["num_terms"] = int(raw["num_terms"])
    if "min_credits_per_term" in raw:
        kwargs["min_credits_per_term"] = number_from_json(raw["min_credits_per_term"], "min_credits_per_term")
    if "max_credits_per_term" in raw:
        kwargs["max_credits_per_term"] = number_from_json(raw["max_credits_per_term"], "max_credits_per_term")
    if raw.get("exact_courses_per_term") is not None:
        kwargs["exact_courses_per_term"] = int(raw["exact_courses_per_term"])
    if "toxic_pairs" in raw:
        pairs = raw["toxic_pairs"]
        if not isinstance(pairs, list):
            raise SchemaError("toxic_pairs must be a list of two-element lists")
        kwargs["toxic_pairs"] = frozenset(frozenset(p) for p in pairs)
    return PlanConstraints(**kwargs)


def _parse_cost_model(raw: Mapping | None) -> CostModel:
    if raw is None:
        return DEFAULT_COST_MODEL
    if not isinstance(raw, Mapping):
        raise SchemaError("cost_model must be an object")
    kwargs = {}
    for name in (
        "annual_tuition_cc",
        "annual_tuition_univ",
        "credits_per_year",
        "hours_per_pathway",
        "work_hours_per_year",
    ):
        if name in raw:
            kwargs[name] = number_from_json(raw[name], name)
    return CostModel(**kwargs)


def _transcript_from_body(body: Mapping, snapshot: CatalogSnapshot) -> Transcript:
    raw = body.get("transcript")
    if not isinstance(raw, Mapping):
        raise SchemaError("body needs a transcript object with a records list")
    transcript = serialize.transcript_from_json(raw)
    for record in transcript.records:
        if record.is_course and record.course_id in snapshot.courses:
            expected = snapshot.courses[record.course_id].credit_hours
            if record.credit_hours != expected:
                raise ValidationError(
                    f"record {record.course_id}: credit_hours {record.credit_hours} "
                    f"does not match the catalog value {expected}"
                )
    return transcript


def create_app(catalog_dir: str | Path | None = None) -> FastAPI:
    catalog_dir = catalog_dir or os.environ.get("CATALOG_DIR")
    if not catalog_dir:
        raise SchemaError("catalog directory required (argument or CATALOG_DIR)")
    holder = SnapshotHolder(catalog_dir)
    app = FastAPI(title="transferpath", docs_url="/docs", openapi_url="/openapi.json")
    app.state.holder = holder

    # The browser navigator is served from its own origin and talks only
    # to this API; the API is stateless and auth-free, so a permissive
    # read/post policy is safe.
    from fastapi.middleware.cors import CORSMiddleware

    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(Exception)
    async def on_internal_error(_request: Request, exc: Exception):
        return _error(500, "internal_error", str(exc))

    def run(handler, *args, **kwargs):
        """Translate engine exceptions into the HTTP error convention."""
        try:
            return handler(*args, **kwargs)
        except _ENGINE_ERRORS as exc:
            return _error(ENGINE_ERROR_STATUS, exc.code, exc.message, exc.detail)
        except (SchemaError, ValidationError) as exc:
            return _error(400, exc.code, exc.message, exc.detail)

    @app.get("/v1/institutions")
    def institutions():
        snap = holder.snapshot
        return {
            "snapshot_version": snap.version,
            "institutions": [
                serialize.institution_to_json(i) for i in snap.institutions.values()
            ],
        }

    @app.get("/v1/programs")
    def programs(institution: str | None = None):
        snap = holder.snapshot
        if institution is not None and institution not in snap.institutions:
            return _error(404, "unknown_institution", f"unknown institution {institution!r}")
        items = (
            snap.programs_at(institution)
            if institution is not None
            else sorted(snap.programs.values(), key=lambda p: p.id)
        )
        return {
            "snapshot_version": snap.version,
            "programs": [
                {
                    "id": p.id,
                    "institution_id": p.institution_id,
                    "credential": p.credential.value,
                    "title": p.title,
                    "total_credit_hours": serialize.number_to_json(p.total_credit_hours),
                }
                for p in items
            ],
        }

    @app.get("/v1/programs/{program_id}")
    def program_detail(program_id: str):
        snap = holder.snapshot
        program = snap.programs.get(program_id)
        if program is None:
            return _error(404, "unknown_program", f"unknown program {program_id!r}")
        return {
            "snapshot_version": snap.version,
            "program": serialize.program_to_json(program),
        }

    @app.post("/v1/audit")
    async def audit_endpoint(request: Request):
        snap = holder.snapshot

        def handle(body):
            program_id = body.get("program_id")
            program = snap.programs.get(program_id)
            if program is None:
                return _error(404, "unknown_program", f"unknown program {program_id!r}")
            transcript = _transcript_from_body(body, snap)
            result = audit(transcript, program, courses=snap.courses)
            return {
                "snapshot_version": snap.version,
                "result": audit_result_to_json(result),
            }

        try:
            body = await _json_body(request)
        except SchemaError as exc:
            return _error(400, exc.code, exc.message, exc.detail)
        return run(handle, body)

    @app.post("/v1/whatif")
    async def whatif_endpoint(request: Request):
        snap = holder.snapshot

        def handle(body):
            transcript = _transcript_from_body(body, snap)
            targets = body.get("target_program_ids")
            if targets is None:
                targets = sorted(
                    p.id
                    for p in snap.programs.values()
                    if p.credential is Credential.BACHELOR
                )
            elif not isinstance(targets, list) or not all(isinstance(t, str) for t in targets):
                raise SchemaError("target_program_ids must be a list of program ids")
            constraints = _parse_constraints(body.get("constraints"))
            cost_model = _parse_cost_model(body.get("cost_model"))
            outcomes = whatif(transcript, targets, snap, cost_model, constraints)
            ranked = rank_programs([o.analysis for o in outcomes if o.ok])
            return {
                "snapshot_version": snap.version,
                "outcomes": [outcome_to_json(o) for o in outcomes],
                "ranked": [analysis_to_json(a) for a in ranked],
            }

        try:
            body = await _json_body(request)
        except SchemaError as exc:
            return _error(400, exc.code, exc.message, exc.detail)
        return run(handle, body)

    @app.post("/v1/plan")
    async def plan_endpoint(request: Request):
        snap = holder.snapshot

        def handle(body):
            program_id = body.get("program_id")
            program = snap.programs.get(program_id)
            if program is None:
                return _error(404, "unknown_program", f"unknown program {program_id!r}")
            transcript = _transcript_from_body(body, snap)
            constraints = _parse_constraints(body.get("constraints"))
            from .analyzer import analyze_target

            analysis = analyze_target(transcript, program, snap, constraints=constraints)
            return {
                "snapshot_version": snap.version,
                "program_id": program.id,
                "completion_courses": list(analysis.completion_courses),
                "plan": plan_to_json(analysis.plan),
            }

        try:
            body = await _json_body(request)
        except SchemaError as exc:
            return _error(400, exc.code, exc.message, exc.detail)
        return run(handle, body)

    @app.post("/v1/admin/reload")
    def reload_endpoint():
        try:
            fresh = holder.reload()
        except ReloadInProgress:
            return _error(409, "reload_in_progress", "another reload is running")
        except (SchemaError, ValidationError) as exc:
            return _error(400, exc.code, exc.message, exc.detail)
        return {"snapshot_version": fresh.version, "source_path": fresh.source_path}

    return app


async def _json_body(request: Request) -> Mapping:
    try:
        body = serialize.loads((await request.body()).decode("utf-8"))
    except (SchemaError, UnicodeDecodeError) as exc:
        raise SchemaError(f"request body is not valid JSON: {exc}")
    if not isinstance(body, Mapping):
        raise SchemaError("request body must be a JSON object")
    return body


def serve(catalog_dir: str | Path | None = None, port: int | None = None, host: str = "127.0.0.1"):
    """Run the service with uvicorn (blocking)."""
    import uvicorn

    app = create_app(catalog_dir)
    port = port if port is not None else int(os.environ.get("PORT", "8000"))
    uvicorn.run(app, host=host, port=port, log_level="warning")
