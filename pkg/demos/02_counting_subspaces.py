"""Gaussian binomials and flat counts, checked against brute-force point sets."""
from __future__ import annotations

from flatunion import count_containing, count_flats, gaussian_binomial
from flatunion.oracles import brute_count_flats, brute_gaussian

for q in (2, 3):
    print(f"q = {q}")
    for d in range(1, 5):
        row = []
        for k in range(d + 1):
            g, gp = gaussian_binomial(d, k, q), count_flats(d, k, q)
            assert g == brute_gaussian(d, k, q) and gp == brute_count_flats(d, k, q)
            row.append(f"{g}/{gp}")
        print(f"  d={d}: subspaces/flats by k ->", "  ".join(row))

# Sizes stay within a factor 4^k of q^(k(d-k)).
q, d, k = 7, 6, 3
g = gaussian_binomial(d, k, q)
print(f"G({d},{k}) over F_{q} = {g}; ratio to q^(k(d-k)) = {g / q ** (k * (d - k)):.4f}")
print("2-planes of F_3^4 through a fixed line:", count_containing(1, 2, 4, 3))
