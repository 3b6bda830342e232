"""Command-line access to the engine.

Machine-readable JSON goes to stdout (``--format table`` for humans);
diagnostics go to stderr only. Exit codes: 0 success, 1 usage, 2 invalid
input, 3 engine error (infeasible, unsatisfiable, over limits).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import serialize
from .analyzer import (
    CostModel,
    LossAssumptions,
    PathwayScenario,
    analysis_to_json,
    count_pathways,
    estimate_effort,
    estimate_national_loss,
    money_to_cents,
    outcome_to_json,
    plan_to_json,
    rank_programs,
    whatif,
)
from .audit import audit, audit_result_to_json
from .catalog import CatalogSnapshot, ingest_catalog
from .equivalence import translate_transcript
from .errors import SchemaError, TransferPathError, ValidationError
from .model import Credential, Transcript
from .plancheck import check_plan
from .planner import PlanConstraints, count_plans
from .serialize import number_from_json, number_to_json

USAGE_EXIT = 1
VALIDATION_EXIT = 2
ENGINE_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        print(f"error: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _emit(payload: dict, fmt: str) -> None:
    if fmt == "table":
        _print_table(payload)
    else:
        print(serialize.dumps(payload, indent=2))


def _print_table(payload: dict, prefix: str = "") -> None:
    for key, value in payload.items():
        if isinstance(value, dict):
            print(f"{prefix}{key}:")
            _print_table(value, prefix + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{prefix}{key}:")
            for item in value:
                _print_table(item, prefix + "  - ")
                prefix_cont = prefix + "    "
        else:
            print(f"{prefix}{key}: {value}")


def _load_snapshot(args) -> CatalogSnapshot:
    catalog = args.catalog or os.environ.get("CATALOG_DIR")
    if not catalog:
        raise SchemaError("no catalog directory: pass --catalog or set CATALOG_DIR")
    return ingest_catalog(catalog)


def _load_transcript(path: str, snapshot: CatalogSnapshot) -> Transcript:
    return serialize.parse_transcript(Path(path).read_text(encoding="utf-8"), snapshot.courses)


def _constraints_from_args(args) -> PlanConstraints:
    kwargs = {}
    if getattr(args, "terms", None) is not None:
        kwargs["num_terms"] = args.terms
    if getattr(args, "max_credits", None) is not None:
        kwargs["max_credits_per_term"] = Fraction(str(args.max_credits))
    if getattr(args, "min_credits", None) is not None:
        kwargs["min_credits_per_term"] = Fraction(str(args.min_credits))
    if getattr(args, "per_term", None) is not None:
        kwargs["exact_courses_per_term"] = args.per_term
    return PlanConstraints(**kwargs)


def cmd_audit(args) -> dict:
    snapshot = _load_snapshot(args)
    program = snapshot.programs.get(args.program)
    if program is None:
        raise ValidationError(f"unknown program {args.program!r}")
    transcript = _load_transcript(args.transcript, snapshot)
    result = audit(transcript, program, courses=snapshot.courses)
    return {"snapshot_version": snapshot.version, "result": audit_result_to_json(result)}


def cmd_whatif(args) -> dict:
    snapshot = _load_snapshot(args)
    transcript = _load_transcript(args.transcript, snapshot)
    if args.targets:
        targets = [t for chunk in args.targets for t in chunk.split(",") if t]
    else:
        targets = sorted(
            p.id for p in snapshot.programs.values() if p.credential is Credential.BACHELOR
        )
    outcomes = whatif(
        transcript, targets, snapshot, constraints=_constraints_from_args(args),
        jobs=args.jobs,
    )
    ranked = rank_programs([o.analysis for o in outcomes if o.ok])
    return {
        "snapshot_version": snapshot.version,
        "outcomes": [outcome_to_json(o) for o in outcomes],
        "ranked": [analysis_to_json(a) for a in ranked],
    }


def cmd_plan(args) -> dict:
    snapshot = _load_snapshot(args)
    program = snapshot.programs.get(args.program)
    if program is None:
        raise ValidationError(f"unknown program {args.program!r}")
    transcript = _load_transcript(args.transcript, snapshot)
    from .analyzer import analyze_target

    analysis = analyze_target(
        transcript, program, snapshot, constraints=_constraints_from_args(args)
    )
    return {
        "snapshot_version": snapshot.version,
        "program_id": program.id,
        "completion_courses": list(analysis.completion_courses),
        "completion_credit_hours": number_to_json(analysis.completion_credit_hours),
        "plan": plan_to_json(analysis.plan),
    }


def cmd_translate(args) -> dict:
    snapshot = _load_snapshot(args)
    transcript = _load_transcript(args.transcript, snapshot)
    translations = translate_transcript(transcript, args.to, snapshot)
    return {
        "snapshot_version": snapshot.version,
        "target_institution_id": args.to,
        "records": [serialize.translated_record_to_json(t) for t in translations],
    }


def cmd_count_pathways(args) -> dict:
    scenario = PathwayScenario(
        num_ccs=args.ccs,
        programs_per_cc=args.programs,
        targets_per_program=args.targets,
        num_universities=args.universities,
    )
    counts = count_pathways(scenario)
    effort = estimate_effort(scenario)
    return {
        "pathways_per_university": counts.per_university,
        "pathways_statewide": counts.statewide,
        "person_years_per_university": number_to_json(effort.per_university_person_years),
        "person_years_statewide": number_to_json(effort.statewide_person_years),
    }


def cmd_count_plans(args) -> dict:
    snapshot = _load_snapshot(args)
    doc = serialize.loads(Path(args.curriculum).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or not isinstance(doc.get("courses"), list):
        raise SchemaError("curriculum file needs a top-level courses list")
    curriculum = frozenset(doc["courses"])
    constraints = _constraints_from_args(args)
    total = count_plans(curriculum, constraints, snapshot.courses)
    return {
        "num_courses": len(curriculum),
        "num_terms": constraints.num_terms,
        "count": total,
        "over_one_million": total > 10**6,
    }


def cmd_estimate_loss(args) -> dict:
    assumptions = LossAssumptions()
    cost_model = CostModel()
    if args.assumptions:
        doc = serialize.loads(Path(args.assumptions).read_text(encoding="utf-8"))
        if not isinstance(doc, dict):
            raise SchemaError("assumptions file must hold a JSON object")
        a_kwargs = {}
        for name in ("population", "community_college_population"):
            if name in doc:
                a_kwargs[name] = int(doc[name])
        for name in ("transfer_once_rate", "transfer_twice_rate", "lost_years_per_transfer"):
            if name in doc:
                a_kwargs[name] = number_from_json(doc[name], name)
        assumptions = LossAssumptions(**a_kwargs)
        c_kwargs = {}
        for name in ("annual_tuition_cc", "annual_tuition_univ"):
            if name in doc:
                c_kwargs[name] = number_from_json(doc[name], name)
        if c_kwargs:
            cost_model = CostModel(**c_kwargs)
    loss = estimate_national_loss(assumptions, cost_model)
    return {
        "assumptions": {
            "population": assumptions.population,
            "community_college_population": assumptions.community_college_population,
            "transfer_once_rate": number_to_json(assumptions.transfer_once_rate),
            "transfer_twice_rate": number_to_json(assumptions.transfer_twice_rate),
            "lost_years_per_transfer": number_to_json(assumptions.lost_years_per_transfer),
            "annual_tuition_cc": number_to_json(cost_model.annual_tuition_cc),
            "annual_tuition_univ": number_to_json(cost_model.annual_tuition_univ),
        },
        "annual_loss_cents": money_to_cents(loss),
        "annual_loss_dollars": number_to_json(loss),
        "exceeds_50_billion": loss > Fraction(50_000_000_000),
    }


def cmd_check_plan(args) -> dict:
    snapshot = _load_snapshot(args)
    doc = serialize.loads(Path(args.plan).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or not isinstance(doc.get("terms"), list):
        raise SchemaError("plan file needs a top-level terms list of course-id lists")
    terms = doc["terms"]
    curriculum = frozenset(doc.get("curriculum") or [c for t in terms for c in t])
    completed = frozenset(doc.get("completed") or [])
    constraints = _constraints_from_args(args)
    problems = check_plan(terms, curriculum, completed, constraints, snapshot.courses)
    return {"valid": not problems, "violations": problems}


def cmd_serve(args) -> dict:
    from .service import serve

    catalog = args.catalog or os.environ.get("CATALOG_DIR")
    if not catalog:
        raise SchemaError("no catalog directory: pass --catalog or set CATALOG_DIR")
    serve(catalog, port=args.port, host=args.host)
    return {}


def build_parser() -> _Parser:
    parser = _Parser(prog="transferpath", description=__doc__)
    parser.add_argument("--catalog", help="catalog directory (default: CATALOG_DIR env)")
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--jobs", type=int, default=1, help="parallel what-if workers")
    # The same flags are accepted after the subcommand; SUPPRESS keeps a
    # pre-subcommand value from being clobbered by a default.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--catalog", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[common], **kwargs)

    p = add_parser("audit", help="audit a transcript against a program")
    p.add_argument("--program", required=True)
    p.add_argument("--transcript", required=True)
    p.set_defaults(func=cmd_audit)

    p = add_parser("whatif", help="what-if analysis across target programs")
    p.add_argument("--transcript", required=True)
    p.add_argument("--targets", action="append", help="comma-separated program ids")
    p.add_argument("--terms", type=int)
    p.add_argument("--max-credits", dest="max_credits")
    p.add_argument("--min-credits", dest="min_credits")
    p.set_defaults(func=cmd_whatif)

    p = add_parser("plan", help="completion plan for one target program")
    p.add_argument("--program", required=True)
    p.add_argument("--transcript", required=True)
    p.add_argument("--terms", type=int)
    p.add_argument("--max-credits", dest="max_credits")
    p.add_argument("--min-credits", dest="min_credits")
    p.set_defaults(func=cmd_plan)

    p = add_parser("translate", help="translate a transcript for an institution")
    p.add_argument("--transcript", required=True)
    p.add_argument("--to", required=True, help="target institution id")
    p.set_defaults(func=cmd_translate)

    p = add_parser("count-pathways", help="articulation pathway combinatorics")
    p.add_argument("--ccs", type=int, required=True)
    p.add_argument("--programs", type=int, required=True)
    p.add_argument("--targets", type=int, required=True)
    p.add_argument("--universities", type=int, required=True)
    p.set_defaults(func=cmd_count_pathways)

    p = add_parser("count-plans", help="count term-by-term arrangements")
    p.add_argument("--curriculum", required=True)
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--per-term", dest="per_term", type=int)
    p.add_argument("--max-credits", dest="max_credits")
    p.add_argument("--min-credits", dest="min_credits")
    p.set_defaults(func=cmd_count_plans)

    p = add_parser("estimate-loss", help="annual excess-tuition estimate")
    p.add_argument("--assumptions", help="JSON file of assumption overrides")
    p.set_defaults(func=cmd_estimate_loss)

    p = add_parser("check-plan", help="validate a degree plan file")
    p.add_argument("--plan", required=True)
    p.add_argument("--terms", type=int)
    p.add_argument("--max-credits", dest="max_credits")
    p.add_argument("--min-credits", dest="min_credits")
    p.set_defaults(func=cmd_check_plan)

    p = add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        payload = args.func(args)
    except (SchemaError, ValidationError) as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return VALIDATION_EXIT
    except TransferPathError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return ENGINE_EXIT
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_EXIT
    if args.command == "check-plan" and not payload.get("valid", True):
        _emit(payload, args.format)
        return VALIDATION_EXIT
    _emit(payload, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
