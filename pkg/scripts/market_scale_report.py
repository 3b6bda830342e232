#!/usr/bin/env python3
"""Print the market-scale figures: pathway counts for a state system,
the hand-maintenance effort they imply, arrangement counts for one
degree, and the annual excess-tuition estimate under the documented
assumptions. Every number is recomputed, nothing is hardcoded."""

from fractions import Fraction

from transferpath import (
    CostModel,
    Course,
    LossAssumptions,
    PathwayScenario,
    PlanConstraints,
    count_pathways,
    count_plans,
    estimate_effort,
    estimate_national_loss,
)


def main() -> None:
    scenario = PathwayScenario(
        num_ccs=15, programs_per_cc=100, targets_per_program=5, num_universities=6
    )
    counts = count_pathways(scenario)
    effort = estimate_effort(scenario)
    print("articulation pathways, hand-built")
    print(f"  per university : {counts.per_university:,}")
    print(f"  statewide      : {counts.statewide:,}")
    print(f"  person-years   : {float(effort.per_university_person_years):.2f} per university, "
          f"{float(effort.statewide_person_years):.1f} statewide (1 hour each, 2,000 hr/yr)")

    forty = {
        f"c{i:02d}": Course(
            id=f"c{i:02d}", institution_id="u", subject_code="G", number=str(i),
            title=f"Course {i}", credit_hours=Fraction(3),
        )
        for i in range(40)
    }
    arrangements = count_plans(
        frozenset(forty), PlanConstraints(num_terms=8, exact_courses_per_term=5), forty
    )
    print("\ndegree-plan arrangements, 40 courses over 8 terms, 5 per term")
    print(f"  exact count    : {arrangements:,}")
    print(f"  over a million : {arrangements > 10**6}")

    assumptions = LossAssumptions()
    cost_model = CostModel()
    loss = estimate_national_loss(assumptions, cost_model)
    print("\nannual excess tuition from transfer credit loss")
    print(f"  population     : {assumptions.population:,} "
          f"({assumptions.community_college_population:,} at community colleges)")
    print(f"  transfer rates : {float(assumptions.transfer_once_rate):.0%} once, "
          f"{float(assumptions.transfer_twice_rate):.0%} twice; "
          f"{assumptions.lost_years_per_transfer} lost year per transfer")
    print(f"  tuition        : ${int(cost_model.annual_tuition_cc):,}/yr community college, "
          f"${int(cost_model.annual_tuition_univ):,}/yr university (enrollment-weighted blend)")
    print(f"  estimated loss : ${float(loss) / 1e9:.2f} billion per year")


if __name__ == "__main__":
    main()
