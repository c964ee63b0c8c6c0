"""Union sizes and the two Wolff-type axioms on a few line families."""
from __future__ import annotations

from flatunion import (
    FlatFamily,
    check_dplane_wolff,
    check_wolff,
    planes_family_lines,
    skew_lines,
    standard_flat,
    subflats,
    union_points,
)

planar = FlatFamily.of(subflats(standard_flat(4, 2, 3), 1))
print(f"all lines of one 2-plane in F_3^4: {len(planar)} lines, union {union_points(planar)}")
print("  2-plane axiom:", check_wolff(planar).to_record())
print("  3-plane axiom:", check_dplane_wolff(planar, 3).to_record())
# The d-plane version asks less: 12 lines fit under the q^3 = 27 budget of a 3-plane.

skew = skew_lines(4, 12, 3, seed=0)
print(f"12 pairwise skew lines: union {union_points(skew)}, "
      f"2-plane max {check_wolff(skew).max_count}")

three = planes_family_lines(2, 3, 3, 3)
print(f"lines of 3 parallel planes in F_3^3: {len(three)} lines, union {union_points(three)}")
