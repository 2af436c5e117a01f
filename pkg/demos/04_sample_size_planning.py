"""Precision-based sample-size planning, one round at a time.

The plan targets the half-width of the Wald interval for the kappa ratio.
Each round checks the current sample's precision; when it falls short, the
variance formula says how many subjects to add. The loop is driven by
actually collecting the extra subjects, so here we emulate the collection
step by sampling from a population that mimics the pilot estimates.
"""

from kappacmp import (
    PairedCounts,
    RandomStream,
    accuracy_from_counts,
    plan_iteration,
    sample_counts,
    scenario_probabilities,
)

pilot = PairedCounts(41, 0, 40, 8, 5, 1, 24, 181)
c, phi = 0.9, 0.10

plan = plan_iteration(pilot, c, phi)
print(f"pilot n = {plan.pilot_n}")
print(f"Wald ratio interval ({plan.ci.lower:.3f}, {plan.ci.upper:.3f}), "
      f"half-width {plan.ci.half_width:.4f}")
print(f"target precision {phi} -> achieved: {plan.achieved}")
print(f"required n = {plan.n_required}, so add {plan.additional_needed} subjects")

# Emulate the follow-up collection round: draw the additional subjects from
# a population whose parameters equal the pilot estimates.
acc = accuracy_from_counts(pilot)
population = scenario_probabilities(acc.se1, acc.sp1, acc.se2, acc.sp2, acc.p,
                                    acc.eps1, acc.eps0, c=c)
stream = RandomStream(7, 0)
extra = sample_counts(population, plan.additional_needed, stream)
enlarged = PairedCounts(*(a + b for a, b in zip(pilot.cells(), extra.cells())))

second = plan_iteration(enlarged, c, phi)
print(f"\nafter adding {plan.additional_needed} subjects (n = {second.pilot_n}):")
print(f"Wald ratio interval ({second.ci.lower:.3f}, {second.ci.upper:.3f}), "
      f"half-width {second.ci.half_width:.4f}")
print("precision reached" if second.achieved
      else f"still short; next round asks for n = {second.n_required}")

# The formula is nearly unbiased in the pilot: re-estimating the size from
# fresh pilots of the planned size moves the answer very little.
rounds, total = 300, 0
for _ in range(rounds):
    fresh = sample_counts(population, plan.n_required, stream)
    est = accuracy_from_counts(fresh)
    total += plan_iteration(fresh, c, phi).n_required
print(f"\nmean recomputed size over {rounds} fresh pilots of n = {plan.n_required}: "
      f"{total / rounds:.0f}")

# Ratios above one need no special treatment: swapping the test labels
# turns a precision phi' for theta > 1 into phi = theta_swapped^2 * phi'.
swapped = plan_iteration(pilot.swap_tests(), c, 0.47)
print(f"\nplanning on the swapped labels (theta > 1): required n = {swapped.n_required}")
