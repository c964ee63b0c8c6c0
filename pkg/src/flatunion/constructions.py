"""Sharpness witnesses, hairbrush families, random corpora and a small-union search."""
from __future__ import annotations

import random

import numpy as np

from .flats import (
    AffineFlat,
    EMPTY,
    _subspace_bases,
    all_flats,
    canonicalize,
    count_flats,
    intersect,
    join,
    subflats,
    superflats,
)
from .gf_linear import PrimeField, as_field
from .incidence import FlatFamily, union_points


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(n))


def _pencil_directions(count: int, p: int) -> list[tuple[int, ...]]:
    """1-dim subspaces of F_p^count, those inside the first two coordinates first."""
    vecs = [b[0] for b in _subspace_bases(count, 1, p)]
    return sorted(vecs, key=lambda v: (max(i for i, x in enumerate(v) if x), v))


def d_planes(d: int, N: int, n: int, field: PrimeField | int, mode: str = "parallel") -> list[AffineFlat]:
    """N d-planes of F^n: parallel translates of one d-subspace, or a pencil through a (d-1)-plane."""
    p = as_field(field).p
    if not 0 < d < n:
        raise ValueError(f"need 0 < d < n, got d={d}, n={n}")
    if mode == "parallel":
        if N > p:
            raise ValueError(f"only {p} translates along one axis, asked for N={N}")
        span = [_unit(n, i) for i in range(d)]
        return [canonicalize(tuple(t if i == d else 0 for i in range(n)), span, p) for t in range(N)]
    if mode == "pencil":
        common = [_unit(n, i) for i in range(d - 1)]
        dirs = _pencil_directions(n - d + 1, p)
        if N > len(dirs):
            raise ValueError(f"the pencil has only {len(dirs)} planes, asked for N={N}")
        out = []
        for v in dirs[:N]:
            extra = tuple([0] * (d - 1) + list(v))
            out.append(canonicalize((0,) * n, common + [extra], p))
        return out
    raise ValueError(f"unknown mode {mode!r}")


def planes_family(d: int, N: int, n: int, field: PrimeField | int, k: int = 1,
                  mode: str = "parallel") -> FlatFamily:
    """All k-flats contained in N chosen d-planes."""
    p = as_field(field).p
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got k={k}, d={d}")
    flats = set()
    for R in d_planes(d, N, n, p, mode):
        flats.update(subflats(R, k))
    return FlatFamily(p, n, k, tuple(flats))


def planes_family_lines(d: int, N: int, n: int, field: PrimeField | int,
                        mode: str = "parallel") -> FlatFamily:
    """The lines contained in N d-planes; the sharpness witness for line unions."""
    return planes_family(d, N, n, field, 1, mode)


def hairbrush_family(S: AffineFlat, density: float, seed: int = 0) -> FlatFamily:
    """Lines meeting the line ``S`` in exactly one point.

    Each 2-plane through S contributes ``round(density * q^2)`` of its q^2 such
    lines, sampled with ``random.Random(seed)``.
    """
    if S.k != 1 or S.n < 2:
        raise ValueError("the stem must be a line in dimension >= 2")
    if not 0 <= density <= 1:
        raise ValueError("density must lie in [0, 1]")
    rng = random.Random(seed)
    lines = []
    for T in superflats(S, 2):
        hairs = [L for L in subflats(T, 1) if _meets_once(L, S)]
        take = round(density * len(hairs))
        lines.extend(rng.sample(hairs, take) if take < len(hairs) else hairs)
    return FlatFamily(S.p, S.n, 1, tuple(lines))


def _meets_once(L: AffineFlat, S: AffineFlat) -> bool:
    X = intersect(L, S)
    return X is not EMPTY and X.k == 0


def random_family(n: int, k: int, size: int, field: PrimeField | int, seed: int = 0) -> FlatFamily:
    """``size`` distinct k-flats drawn uniformly without replacement."""
    p = as_field(field).p
    total = count_flats(n, k, p)
    if not 0 <= size <= total:
        raise ValueError(f"F_{p}^{n} has {total} {k}-flats, asked for {size}")
    pool = all_flats(p, n, k)
    return FlatFamily(p, n, k, tuple(random.Random(seed).sample(pool, size)))


def minimize_union(n: int, k: int, size: int, field: PrimeField | int, seed: int = 0,
                   steps: int = 1000, start: FlatFamily | None = None,
                   max_sideways: int = 50) -> tuple[FlatFamily, int]:
    """Swap-based hill climbing for a size-``size`` family with a small union.

    Each step swaps one member for one non-member, proposed either uniformly or
    through a random point already covered. A swap is kept if the union does
    not grow; runs of equal-union moves are capped by ``max_sideways``.
    """
    p = as_field(field).p
    rng = random.Random(seed)
    pool = all_flats(p, n, k)
    index = {L: i for i, L in enumerate(pool)}
    if start is None:
        start = random_family(n, k, size, p, seed)
    elif len(start) != size or (start.p, start.n, start.k) != (p, n, k):
        raise ValueError("start family does not match the requested shape")
    cur = [index[L] for L in start]
    if steps <= 0 or not cur or len(cur) == len(pool):
        return start, union_points(start)
    codes = [L.codes for L in pool]
    through: list[list[int]] = [[] for _ in range(p**n)]
    for i, c in enumerate(codes):
        for x in c:
            through[int(x)].append(i)
    counts = np.zeros(p**n, dtype=np.int64)
    for i in cur:
        counts[codes[i]] += 1
    union = int(np.count_nonzero(counts))
    members = set(cur)
    sideways = 0
    for _ in range(steps):
        slot = rng.randrange(size)
        out_i = cur[slot]
        if rng.random() < 0.5:
            pts = codes[rng.choice(cur)]
            in_i = rng.choice(through[int(pts[rng.randrange(len(pts))])])
        else:
            in_i = rng.randrange(len(pool))
        if in_i in members:
            continue
        counts[codes[out_i]] -= 1
        counts[codes[in_i]] += 1
        new = int(np.count_nonzero(counts))
        if new < union or (new == union and sideways < max_sideways):
            sideways = 0 if new < union else sideways + 1
            union = new
            members.discard(out_i)
            members.add(in_i)
            cur[slot] = in_i
        else:
            counts[codes[in_i]] -= 1
            counts[codes[out_i]] += 1
    fam = FlatFamily(p, n, k, tuple(pool[i] for i in cur))
    return fam, union


def skew_lines(n: int, count: int, field: PrimeField | int, seed: int = 0) -> FlatFamily:
    """Greedy random family of lines with no two in a common 2-plane."""
    p = as_field(field).p
    pool = list(all_flats(p, n, 1))
    random.Random(seed).shuffle(pool)
    chosen: list[AffineFlat] = []
    for L in pool:
        if all(join(L, M).k == 3 for M in chosen):
            chosen.append(L)
            if len(chosen) == count:
                break
    if len(chosen) < count:
        raise ValueError(f"found only {len(chosen)} pairwise skew lines")
    return FlatFamily(p, n, 1, tuple(chosen))

