"""Sharp examples, quasi-extremizer extraction and a small-union search."""
from __future__ import annotations

from flatunion import (
    captured_fraction,
    extract_quasi_extremizers,
    minimize_union,
    planes_family_lines,
    run_sweep,
)
from flatunion.harness import SUITES

for r in run_sweep(SUITES["sharpness"]).records:
    print(f"k={r.k} d={r.d} beta={r.beta}: |L|={r.size}, union {r.union}, ratio {r.ratio}")

three = planes_family_lines(2, 3, 3, 3)
found = extract_quasi_extremizers(three, 2)
print(f"extracted {len(found)} planes, densities {[str(x.density) for x in found]}, "
      f"capturing {captured_fraction(three, found)} of the union")

for steps in (0, 500, 5000):
    fam, union = minimize_union(3, 1, 12, 3, seed=1, steps=steps)
    print(f"12 lines in F_3^3 after {steps:>4} swap steps: union {union}")
