"""Brute-force counts computed on raw point sets.

Nothing here touches row reduction or canonical forms: subspaces are grown
as explicit sets of vectors closed under addition, flats are their
translates. These serve as the independent side of every count check.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

Point = tuple[int, ...]


def _vectors(n: int, q: int) -> list[Point]:
    return list(itertools.product(range(q), repeat=n))


def _add(a: Point, b: Point, q: int) -> Point:
    return tuple((x + y) % q for x, y in zip(a, b))


def _extend(V: frozenset[Point], v: Point, q: int) -> frozenset[Point]:
    """Span of V and v: all u + c*v."""
    out = set()
    for c in range(q):
        cv = tuple((c * x) % q for x in v)
        for u in V:
            out.add(_add(u, cv, q))
    return frozenset(out)


@lru_cache(maxsize=None)
def subspaces_by_dim(n: int, q: int) -> tuple[tuple[frozenset[Point], ...], ...]:
    """All linear subspaces of F_q^n as point sets, grouped by dimension."""
    zero = frozenset({(0,) * n})
    layers = [{zero}]
    vecs = _vectors(n, q)
    for _ in range(n):
        nxt = set()
        for V in layers[-1]:
            for v in vecs:
                if v not in V:
                    nxt.add(_extend(V, v, q))
        layers.append(nxt)
    return tuple(tuple(sorted(layer, key=sorted)) for layer in layers)


@lru_cache(maxsize=None)
def flats_by_dim(n: int, q: int) -> tuple[frozenset[frozenset[Point]], ...]:
    """All affine flats of F_q^n as point sets, grouped by dimension."""
    vecs = _vectors(n, q)
    out = []
    for layer in subspaces_by_dim(n, q):
        out.append(frozenset(frozenset(_add(x, u, q) for u in V) for V in layer for x in vecs))
    return tuple(out)


def brute_gaussian(d: int, k: int, q: int) -> int:
    return len(subspaces_by_dim(d, q)[k])


def brute_count_flats(d: int, k: int, q: int) -> int:
    return len(flats_by_dim(d, q)[k])


def brute_count_containing(l: int, lprime: int, m: int, q: int) -> int:
    layers = flats_by_dim(m, q)
    S = min(layers[l], key=sorted)
    return sum(1 for P in layers[lprime] if S <= P)


def brute_count_disjoint(l: int, k: int, q: int) -> int:
    layers = flats_by_dim(k, q)
    S = min(layers[l], key=sorted)
    return sum(1 for P in layers[k - 1] if not (S & P))


def brute_union(point_sets) -> int:
    out: set = set()
    for s in point_sets:
        out |= set(s)
    return len(out)
