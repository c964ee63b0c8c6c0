from __future__ import annotations

import pytest

from flatunion.constructions import (
    d_planes,
    hairbrush_family,
    minimize_union,
    planes_family,
    planes_family_lines,
    random_family,
    skew_lines,
)
from flatunion.flats import (
    EMPTY,
    all_flats,
    contains,
    count_flats,
    intersect,
    join,
    standard_flat,
)
from flatunion.incidence import FlatFamily, union_points


@pytest.mark.parametrize("q", [2, 3, 5])
@pytest.mark.parametrize("d,n", [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
def test_parallel_planes_are_disjoint_and_exact(q, d, n):
    for N in range(1, q + 1):
        fam = planes_family_lines(d, N, n, q)
        assert len(fam) == N * count_flats(d, 1, q)
        assert union_points(fam) == N * q**d


def test_sharpness_examples():
    fam = planes_family_lines(2, 1, 3, 3)
    assert len(fam) == 12 and union_points(fam) == 9
    fam = planes_family_lines(2, 3, 3, 3)
    assert len(fam) == 36 >= 3 ** (2 * (2 - 1) + 1) and union_points(fam) == 27
    single = planes_family_lines(1, 1, 3, 5)
    assert len(single) == 1 and union_points(single) == 5
    planes = planes_family(3, 1, 4, 2, k=2)
    assert len(planes) == count_flats(3, 2, 2) and union_points(planes) == 8


def test_pencil_mode():
    R = d_planes(2, 4, 3, 3, "pencil")
    axis = standard_flat(3, 1, 3)
    assert len(set(R)) == 4 and all(contains(P, axis) for P in R)
    fam = planes_family_lines(2, 4, 3, 3, "pencil")
    # four planes sharing one line: 4*12 - 3 lines, covering all of F_3^3
    assert len(fam) == 45 and union_points(fam) == 27
    with pytest.raises(ValueError):
        d_planes(2, 14, 3, 3, "pencil")


def test_lines_of_a_higher_plane_saturate_union():
    # all lines of a (d+1)-plane: |L| >= q^(2(d-1)+2) but the union is only q^(d+1)
    for q in (2, 3):
        for d in (1, 2):
            fam = planes_family_lines(d + 1, 1, d + 2, q)
            assert len(fam) == count_flats(d + 1, 1, q) >= q ** (2 * (d - 1) + 2)
            assert union_points(fam) == q ** (d + 1)


def test_planes_family_errors():
    with pytest.raises(ValueError):
        planes_family_lines(2, 4, 3, 3)
    with pytest.raises(ValueError):
        planes_family_lines(3, 1, 3, 3)
    with pytest.raises(ValueError):
        d_planes(2, 1, 3, 3, "spiral")


def brute_hairs(S):
    return {L for L in all_flats(S.p, S.n, 1) if (X := intersect(L, S)) is not EMPTY and X.k == 0}


def test_hairbrush_full_density_matches_filter():
    for q, n in [(3, 2), (2, 3), (3, 3)]:
        S = standard_flat(n, 1, q)
        fam = hairbrush_family(S, 1.0)
        assert set(fam) == brute_hairs(S)
    assert len(hairbrush_family(standard_flat(3, 1, 3), 1.0)) == 36
    assert len(hairbrush_family(standard_flat(3, 1, 3), 0.0)) == 0


def test_hairbrush_sampling_is_seeded():
    S = standard_flat(3, 1, 3)
    a = hairbrush_family(S, 0.5, seed=4)
    assert a == hairbrush_family(S, 0.5, seed=4)
    assert set(a) <= brute_hairs(S)
    with pytest.raises(ValueError):
        hairbrush_family(standard_flat(3, 2, 3), 1.0)
    with pytest.raises(ValueError):
        hairbrush_family(S, 1.5)


def test_random_family():
    assert len(random_family(3, 1, 0, 2, 0)) == 0
    assert set(random_family(3, 1, 28, 2, 5)) == set(all_flats(2, 3, 1))
    assert random_family(4, 2, 20, 3, 9) == random_family(4, 2, 20, 3, 9)
    assert random_family(4, 2, 20, 3, 9) != random_family(4, 2, 20, 3, 10)
    with pytest.raises(ValueError):
        random_family(3, 1, 29, 2, 0)


def test_minimize_union_contracts():
    start = random_family(3, 1, 12, 3, 2)
    fam, u = minimize_union(3, 1, 12, 3, seed=2, steps=0)
    assert fam == start and u == union_points(start)
    best = planes_family_lines(2, 1, 3, 3)
    fam, u = minimize_union(3, 1, 12, 3, seed=0, steps=500, start=best)
    assert u <= 9 and len(fam) == 12
    with pytest.raises(ValueError):
        minimize_union(3, 1, 11, 3, start=best)


@pytest.mark.parametrize("seed", range(5))
def test_minimize_union_never_worse(seed):
    start = random_family(3, 1, 12, 3, seed)
    fam, u = minimize_union(3, 1, 12, 3, seed=seed, steps=300)
    assert u == union_points(fam) <= union_points(start)
    assert (fam, u) == minimize_union(3, 1, 12, 3, seed=seed, steps=300)


def test_minimize_union_long_run_reported():
    fam, u = minimize_union(3, 1, 12, 3, seed=0, steps=10_000)
    print(f"12 lines in F_3^3 after 10^4 steps: union {u}")
    assert u >= 9
    assert u == union_points(fam)


def test_skew_lines():
    fam = skew_lines(4, 12, 3, 0)
    assert len(fam) == 12
    for i, A in enumerate(fam):
        for B in fam.members[i + 1:]:
            assert join(A, B).k == 3
    with pytest.raises(ValueError):
        skew_lines(3, 50, 2, 0)


def test_generators_return_valid_families():
    for fam in (planes_family(2, 2, 4, 3, k=2), hairbrush_family(standard_flat(4, 1, 2), 1.0),
                random_family(4, 3, 5, 2, 1)):
        assert isinstance(fam, FlatFamily)
        assert len(set(fam)) == len(fam)
        assert all(L.k == fam.k for L in fam)
