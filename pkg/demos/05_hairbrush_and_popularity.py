"""A hairbrush through one line, traced through selection, pruning and bucketing."""
from __future__ import annotations

from flatunion import hairbrush_decompose, hairbrush_family, standard_flat

stem = standard_flat(3, 1, 3)
hairs = hairbrush_family(stem, 1 / 9, seed=0)
family = hairs.like([stem, *hairs])

trace = hairbrush_decompose(family, d=2)
print(f"case {trace.case}, m = {trace.decomposition.m}, stem = {trace.stem}")
print("lines per leaf:", [len(b.lines) for b in trace.buckets])
r = trace.refinement
print(f"popularity pruning kept {len(r.P_sharp)} points and {len(r.L_sharp)} lines "
      f"({r.branch} branch)")
for row in trace.ledger:
    mark = "asserted" if row.asserted else "measured"
    flag = "vacuous" if row.vacuous else ("ok" if row.passed else "below")
    print(f"  [{mark}] {row.name}: {row.lhs} vs {row.rhs:.4g} ({flag})")
