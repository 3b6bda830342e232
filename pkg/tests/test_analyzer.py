import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from transferpath import (
    CostModel,
    LossAssumptions,
    PathwayScenario,
    ValidationError,
    count_pathways,
    estimate_effort,
    estimate_national_loss,
    rank_programs,
    whatif,
)
from transferpath.analyzer import money_to_cents, outcome_to_json


# ---------------------------------------------------------------------------
# Pathway combinatorics and effort


def test_state_system_pathway_counts():
    counts = count_pathways(PathwayScenario(15, 100, 5, 6))
    assert counts.per_university == 7_500
    assert counts.statewide == 45_000


def test_single_everything_is_one_pathway():
    counts = count_pathways(PathwayScenario(1, 1, 1, 1))
    assert counts.per_university == counts.statewide == 1


def test_effort_in_person_years():
    effort = estimate_effort(PathwayScenario(15, 100, 5, 6))
    assert effort.per_university_person_years == Fraction(15, 4)  # 3.75
    assert effort.statewide_person_years == Fraction(45, 2)  # 22.5
    assert effort.statewide_person_years > 22


@given(
    st.integers(1, 50), st.integers(1, 200), st.integers(1, 20), st.integers(1, 12)
)
@settings(max_examples=80, deadline=None)
def test_pathway_count_is_multiplicative_and_symmetric(a, b, c, u):
    base = count_pathways(PathwayScenario(a, b, c, u)).per_university
    for perm in itertools.permutations((a, b, c)):
        assert count_pathways(PathwayScenario(*perm, u)).per_university == base
    assert count_pathways(PathwayScenario(a, b, c, u)).statewide == base * u


def test_scenario_rejects_non_positive():
    with pytest.raises(ValidationError):
        PathwayScenario(0, 1, 1, 1)


# ---------------------------------------------------------------------------
# National loss estimator


def test_zero_transfer_rates_mean_zero_loss():
    zero = LossAssumptions(transfer_once_rate=Fraction(0), transfer_twice_rate=Fraction(0))
    assert estimate_national_loss(zero) == 0


def test_documented_assumptions_exceed_fifty_billion():
    loss = estimate_national_loss()
    assert loss > 50 * 10**9
    # 17M students, 46% transfer events, one lost year at the
    # enrollment-weighted tuition blend:
    blend = (6_000_000 * 3500 + 11_000_000 * 10000) / Fraction(17_000_000)
    assert loss == Fraction(17_000_000) * Fraction(46, 100) * blend


def test_loss_is_linear_in_tuition():
    base = estimate_national_loss()
    doubled = estimate_national_loss(
        cost_model=CostModel(annual_tuition_cc=Fraction(7000), annual_tuition_univ=Fraction(20000))
    )
    assert doubled == 2 * base


def test_loss_rejects_bad_rates():
    with pytest.raises(ValidationError):
        LossAssumptions(transfer_once_rate=Fraction(3, 2))


# ---------------------------------------------------------------------------
# What-if pipeline over the demo catalog


def _bachelor_targets(snapshot):
    from transferpath import Credential

    return sorted(p.id for p in snapshot.programs.values()
                  if p.credential is Credential.BACHELOR)


def test_whatif_two_cc_transfer_scenario(snapshot, transfer_transcript):
    outcomes = whatif(transfer_transcript, _bachelor_targets(snapshot), snapshot)
    by_id = {o.target_program_id: o for o in outcomes}

    cs = by_id["ssu-bs-cs"].analysis
    assert cs.recognized_hours == Fraction(8)
    assert cs.applied_hours == 0
    assert cs.unevaluated_count == 2
    # Nothing applied: the completion set is the full major core.
    assert cs.completion_courses == (
        "ssu-cs101", "ssu-cs102", "ssu-cs210", "ssu-cs220",
        "ssu-cs310", "ssu-cs330", "ssu-math150",
    )
    assert cs.completion_credit_hours == Fraction(25)
    assert cs.estimated_terms == 4

    at = by_id["at-bs-cs"].analysis
    assert at.recognized_hours == at.applied_hours == Fraction(14)
    assert at.completion_courses == ("at-cs250",)
    assert at.estimated_terms == 1


def test_whatif_cost_uses_target_tuition_class(snapshot, transfer_transcript):
    outcomes = whatif(transfer_transcript, ["ssu-bs-cs"], snapshot)
    analysis = outcomes[0].analysis
    # 25 remaining hours at 10000/30 per credit hour.
    assert analysis.estimated_cost == Fraction(25) * Fraction(10000, 30)
    assert money_to_cents(analysis.estimated_cost) == 833333


def test_whatif_results_are_input_order_and_error_isolated(snapshot, transfer_transcript):
    outcomes = whatif(
        transfer_transcript, ["ssu-bs-cs", "no-such-program", "at-bs-cs"], snapshot
    )
    assert [o.target_program_id for o in outcomes] == [
        "ssu-bs-cs", "no-such-program", "at-bs-cs",
    ]
    assert outcomes[0].ok and outcomes[2].ok
    assert not outcomes[1].ok
    assert outcomes[1].error_code == "cross_ref_error"


def test_whatif_is_deterministic_and_parallel_safe(snapshot, transfer_transcript):
    targets = _bachelor_targets(snapshot)
    serial = whatif(transfer_transcript, targets, snapshot)
    parallel = whatif(transfer_transcript, targets, snapshot, jobs=4)
    assert [outcome_to_json(o) for o in serial] == [outcome_to_json(o) for o in parallel]


def test_whatif_recompute_after_edit_equals_fresh(snapshot, transfer_transcript):
    targets = _bachelor_targets(snapshot)
    whatif(transfer_transcript, targets, snapshot)  # warm anything cached
    edited = transfer_transcript.with_records(())
    edited = type(transfer_transcript)(transfer_transcript.records[:-1])
    again = whatif(edited, targets, snapshot)
    fresh = whatif(edited, targets, snapshot)
    assert [outcome_to_json(o) for o in again] == [outcome_to_json(o) for o in fresh]


def test_full_coverage_transcript_costs_nothing(snapshot):
    from transferpath import Grade, Transcript, TranscriptRecord

    records = tuple(
        TranscriptRecord(
            institution_id="alameda-tech", course_id=cid, grade=Grade.A,
            credit_hours=snapshot.courses[cid].credit_hours,
        )
        for cid in ("at-cs101", "at-cs102", "at-cs250", "at-math200", "at-net210")
    )
    outcomes = whatif(Transcript(records), ["at-bs-cs"], snapshot)
    analysis = outcomes[0].analysis
    assert analysis.completion_credit_hours == 0
    assert analysis.estimated_cost == 0
    assert analysis.estimated_terms == 0
    assert analysis.unsatisfied_leaves == ()


def test_ranking_orders_by_remaining_then_cost_then_id(snapshot, transfer_transcript):
    outcomes = whatif(transfer_transcript, _bachelor_targets(snapshot), snapshot)
    ranked = rank_programs([o.analysis for o in outcomes if o.ok])
    ids = [a.target_program_id for a in ranked]
    assert ids[0] == "at-bs-cs"
    assert ids.index("at-bs-cs") < ids.index("ssu-bs-cs") < ids.index("ssu-bs-gs")
    hours = [a.completion_credit_hours for a in ranked]
    assert hours == sorted(hours)


def test_ranking_tie_breaks():
    from transferpath.analyzer import TransferAnalysis
    from transferpath.planner import DegreePlan

    def stub(pid, hours, cost):
        return TransferAnalysis(
            target_program_id=pid,
            recognized_hours=Fraction(0), applied_hours=Fraction(0),
            unevaluated_count=0, unsatisfied_leaves=(), completion_courses=(),
            completion_credit_hours=Fraction(hours), estimated_terms=1,
            estimated_cost=Fraction(cost), plan=DegreePlan((), Fraction(0)),
            exact=True,
        )

    ranked = rank_programs([stub("b", 10, 500), stub("a", 10, 400), stub("c", 5, 900)])
    assert [a.target_program_id for a in ranked] == ["c", "a", "b"]
    # Equal hours and cost: ordered by program id.
    ranked = rank_programs([stub("z", 10, 400), stub("a", 10, 400)])
    assert [a.target_program_id for a in ranked] == ["a", "z"]


def test_terms_respect_credit_ceiling_invariant(snapshot, transfer_transcript):
    import math

    from transferpath import PlanConstraints

    constraints = PlanConstraints(max_credits_per_term=Fraction(12))
    outcomes = whatif(transfer_transcript, _bachelor_targets(snapshot), snapshot,
                      constraints=constraints)
    for outcome in outcomes:
        analysis = outcome.analysis
        assert analysis is not None
        floor = math.ceil(analysis.completion_credit_hours / constraints.max_credits_per_term)
        assert analysis.estimated_terms >= floor
        assert analysis.applied_hours <= analysis.recognized_hours


def test_adding_equivalent_credit_never_raises_completion(snapshot, transfer_transcript):
    from transferpath import Grade, TranscriptRecord

    base = whatif(transfer_transcript, ["ssu-bs-cs"], snapshot)[0].analysis
    # A native Summit State course that hits an unsatisfied leaf.
    extra = TranscriptRecord(
        institution_id="summit-state", course_id="ssu-math150",
        grade=Grade.A, credit_hours=Fraction(3),
    )
    richer = transfer_transcript.with_records((extra,))
    after = whatif(richer, ["ssu-bs-cs"], snapshot)[0].analysis
    assert after.completion_credit_hours <= base.completion_credit_hours
    assert after.completion_credit_hours == Fraction(22)


def test_fixture_totals_cover_minimum_satisfying_demand(snapshot):
    """Each program's stated total credit hours bounds the cheapest
    satisfying course set (upper-bounded by the selector's answer)."""
    from transferpath import Transcript, audit, select_completion_courses

    for program in snapshot.programs.values():
        result = audit(Transcript(), program)
        selection = select_completion_courses(result, program, snapshot.courses)
        assert selection.credit_hours <= program.total_credit_hours, program.id
