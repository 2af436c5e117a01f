"""Export kappa-versus-c curves and show how prevalence moves the crossover.

Writes one delimited text file per prevalence (columns c, kappa1, kappa2)
that any plotting tool can read. For this accuracy configuration the
crossover index falls from 0.95 to 0.25 as prevalence rises from 5% to 75%.
"""

import pathlib

from kappacmp import AccuracyEstimates, crossover_index, kappa_curve, render_curve

SE1, SP1 = 0.80, 0.95   # test 1: more specific
SE2, SP2 = 0.90, 0.85   # test 2: more sensitive

out_dir = pathlib.Path("curves")
out_dir.mkdir(exist_ok=True)

grid = [i / 200 for i in range(201)]
for p in (0.05, 0.25, 0.50, 0.75):
    acc = AccuracyEstimates(se1=SE1, sp1=SP1, se2=SE2, sp2=SP2, p=p)
    rows = kappa_curve(acc, grid)
    path = out_dir / f"kappa_curve_p{int(p * 100):02d}.txt"
    path.write_text(render_curve(rows), encoding="utf-8")
    print(f"prevalence {p:4.0%}: crossover at c' = {crossover_index(acc):.2f} "
          f"-> wrote {path}")

print("\nReading one curve back:")
acc = AccuracyEstimates(se1=SE1, sp1=SP1, se2=SE2, sp2=SP2, p=0.50)
for c, k1, k2 in kappa_curve(acc, [0.25, 0.5, 0.75]):
    ordering = ">" if k1 > k2 else "<" if k1 < k2 else "="
    print(f"  c = {c:4.2f}: kappa1 = {k1:.3f} {ordering} kappa2 = {k2:.3f}")
