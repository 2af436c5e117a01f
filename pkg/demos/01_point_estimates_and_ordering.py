"""Point estimation walkthrough on the bundled worked dataset.

Two screening tests and a reference standard applied to the same 300
subjects. Test 1 is very specific but insensitive; test 2 the opposite.
Which one agrees better with the reference depends on how much weight a
false positive carries relative to a false negative.
"""

from kappacmp import (
    PairedCounts,
    accuracy_from_counts,
    compare_over_range,
    crossover_index,
    kappa_pair,
)

counts = PairedCounts(41, 0, 40, 8, 5, 1, 24, 181)
print(f"n = {counts.n:g} subjects: {counts.s:g} diseased, {counts.r:g} healthy")

acc = accuracy_from_counts(counts)
print(f"\ntest 1: Se = {acc.se1:.4f}, Sp = {acc.sp1:.4f}")
print(f"test 2: Se = {acc.se2:.4f}, Sp = {acc.sp2:.4f}")
print(f"prevalence = {acc.p:.4f}")
print(f"within-stratum dependence: eps1 = {acc.eps1:.4f}, eps0 = {acc.eps0:.4f}")
print(f"sensitivity ratio Se1/Se2 = {acc.rtpf:.3f}, "
      f"false-positive ratio (1-Sp1)/(1-Sp2) = {acc.rfpf:.3f}")

# The weighting index c moves from "false positives matter most" (c = 0)
# to "false negatives matter most" (c = 1); c = 0.5 is the Cohen kappa.
print("\n    c   kappa1   kappa2")
for c in (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0):
    kp = kappa_pair(acc, c)
    print(f"  {c:4.2f}   {kp.kappa1:6.3f}   {kp.kappa2:6.3f}")

c_prime = crossover_index(acc)
verdict = compare_over_range(acc)
print(f"\ncrossover index c' = {c_prime:.4f}")
print(f"ordering rule {verdict.rule}: {verdict.describe()}")
print("\nSo test 1 agrees better when false positives dominate the concern")
print(f"(c below {c_prime:.3f}) and test 2 is better everywhere above that.")
