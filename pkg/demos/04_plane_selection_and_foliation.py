"""Rich-plane selection on a mixed family, then a foliation around a line."""
from __future__ import annotations

from flatunion import foliate, plane_select, planes_family_lines, random_family, standard_flat

q = 3
rich = planes_family_lines(2, 2, 4, q)
noise = random_family(4, 1, 20, q, seed=7)
family = rich.like([*rich, *noise])

dec = plane_select(family, 3)
print(f"|L| = {len(family)}; selection stopped at m = {dec.m} with N = {dec.N} planes")
print("part sizes:", [len(p) for p in dec.parts])
print("left over after each level:", {m: len(F) for m, F in dec.residue_chain})
print("violated properties:", dec.violations() or "none")

S = standard_flat(4, 1, q)
fol = foliate(S, 0, 1)
check = fol.verify_exhaustive()
print(f"foliation around a line of F_3^4: {len(fol.leaves)} leaves of dimension {fol.leaf_dim}")
print(f"  {check.pairs} (point, line) pairs routed, {check.violations} misrouted")
