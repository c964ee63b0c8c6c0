"""Affine flats over F_3: canonical forms, meets and joins.

Run with ``python demos/01_flats_over_small_fields.py``.
"""
from __future__ import annotations

from flatunion import canonicalize, flat_points, intersect, join, point_flat, rref

# Row reduction is exact mod p.
R, r, pivots = rref([[1, 1], [1, 2]], 3)
print("rref([[1,1],[1,2]]) over F_3:", R, "rank", r, "pivots", pivots)

# Two different presentations of the same line give one canonical object.
a = canonicalize((0, 0), [(1, 1), (2, 2)], 3)
b = canonicalize((1, 1), [(1, 1)], 3)
print("same line:", a == b, a)
print("its points:", sorted(flat_points(a)))

x_axis = canonicalize((0, 0), [(1, 0)], 3)
y_axis = canonicalize((0, 0), [(0, 1)], 3)
shifted = canonicalize((0, 1), [(1, 0)], 3)
print("x-axis meets y-axis in", intersect(x_axis, y_axis))
print("x-axis meets its translate in", intersect(x_axis, shifted))
print(f"join of the axes is a {join(x_axis, y_axis).k}-flat")
print("join of two points:", join(point_flat((0, 0), 3), point_flat((1, 1), 3)))
