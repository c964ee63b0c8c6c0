"""Canonical affine flats in F_p^n and the exact counts that go with them.

A k-flat is stored as the RREF basis of its direction space plus the unique
coset representative whose pivot-column coordinates are zero. Two flats are
equal as values iff they have the same point set, so flats can be hashed,
deduplicated and sorted directly.
"""
from __future__ import annotations

import functools
import itertools
import os
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .gf_linear import (
    Matrix,
    PrimeField,
    Vec,
    as_field,
    combine,
    complement_units,
    in_span,
    left_null_space,
    reduce_by,
    row_basis,
    solve_combination,
)

DEFAULT_GUARD = 10**7
GUARD_ENV = "FLATUNION_GUARD"


class GuardError(RuntimeError):
    """Raised when an enumeration would exceed the configured item ceiling."""


def guard_limit() -> int:
    raw = os.environ.get(GUARD_ENV)
    return int(raw) if raw else DEFAULT_GUARD


def _check_guard(count: int, what: str) -> None:
    limit = guard_limit()
    if count > limit:
        raise GuardError(f"{what}: {count} items exceeds guard {limit} (set {GUARD_ENV} to override)")


@dataclass(frozen=True, order=True)
class AffineFlat:
    """A k-dimensional affine flat of F_p^n in canonical form.

    Build these with :func:`canonicalize` (or the helpers below) rather than
    the constructor, which trusts its arguments.
    """

    p: int
    n: int
    k: int
    dirs: Matrix
    base: Vec

    @functools.cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.dirs)

    @property
    def size(self) -> int:
        return self.p**self.k

    def contains_point(self, x: Sequence[int]) -> bool:
        off = [(a - b) % self.p for a, b in zip(x, self.base)]
        return in_span(off, self.dirs, self.pivots, self.p)

    @functools.cached_property
    def codes(self) -> np.ndarray:
        """Sorted integer codes of the points (see :func:`point_code`)."""
        _check_guard(self.size, "flat points")
        p, n = self.p, self.n
        base = np.array(self.base, dtype=np.int64)
        if self.k == 0:
            pts = base[None, :]
        else:
            coeffs = np.array(list(itertools.product(range(p), repeat=self.k)), dtype=np.int64)
            pts = (coeffs @ np.array(self.dirs, dtype=np.int64) + base) % p
        codes = pts @ (p ** np.arange(n, dtype=np.int64))
        codes.sort()
        codes.setflags(write=False)
        return codes

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "base": list(self.base),
            "dirs": [list(r) for r in self.dirs],
        }

    @classmethod
    def from_dict(cls, obj: dict, p: int | None = None) -> AffineFlat:
        p = obj.get("p", p)
        if p is None:
            raise ValueError("flat record has no field modulus")
        return canonicalize(obj["base"], obj.get("dirs", []), p)

    def __repr__(self) -> str:
        return f"AffineFlat(p={self.p}, k={self.k}, base={self.base}, dirs={self.dirs})"


class _Empty:
    """Sentinel for the empty intersection of two flats."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "EMPTY"


EMPTY = _Empty()


def point_code(x: Sequence[int], p: int) -> int:
    code = 0
    for i, c in enumerate(x):
        code += (c % p) * p**i
    return code


def decode_point(code: int, p: int, n: int) -> Vec:
    out = []
    for _ in range(n):
        code, r = divmod(code, p)
        out.append(r)
    return tuple(out)


def canonicalize(
    base: Sequence[int], spanning: Sequence[Sequence[int]], field: PrimeField | int
) -> AffineFlat:
    """The flat ``base + span(spanning)`` in canonical form.

    ``spanning`` may be linearly dependent; its rank fixes the dimension.
    """
    p = as_field(field).p
    n = len(base)
    if any(len(r) != n for r in spanning):
        raise ValueError("spanning rows must match the length of base")
    dirs, piv = row_basis(spanning, p) if spanning else ((), ())
    b = reduce_by(base, dirs, piv, p)
    return AffineFlat(p, n, len(dirs), dirs, b)


def point_flat(x: Sequence[int], field: PrimeField | int) -> AffineFlat:
    return canonicalize(x, [], field)


def _same_ambient(A: AffineFlat, B: AffineFlat) -> None:
    if A.p != B.p or A.n != B.n:
        raise ValueError(f"ambient mismatch: F_{A.p}^{A.n} vs F_{B.p}^{B.n}")


def flat_points(L: AffineFlat) -> frozenset[Vec]:
    return frozenset(decode_point(int(c), L.p, L.n) for c in L.codes)


def intersect(A: AffineFlat, B: AffineFlat) -> AffineFlat | _Empty:
    _same_ambient(A, B)
    p, n = A.p, A.n
    diff = [(b - a) % p for a, b in zip(A.base, B.base)]
    rows = A.dirs + B.dirs
    c = solve_combination(rows, diff, p)
    if c is None:
        return EMPTY
    point = [(a + x) % p for a, x in zip(A.base, combine(c[: A.k], A.dirs, p, n))]
    common = [combine(v[: A.k], A.dirs, p, n) for v in left_null_space(rows, p)]
    return canonicalize(point, common, p)


def join(A: AffineFlat, B: AffineFlat) -> AffineFlat:
    _same_ambient(A, B)
    diff = tuple((b - a) % A.p for a, b in zip(A.base, B.base))
    return canonicalize(A.base, A.dirs + B.dirs + (diff,), A.p)


def contains(A: AffineFlat, B: AffineFlat) -> bool:
    """True iff every point of ``B`` lies in ``A``."""
    _same_ambient(A, B)
    if B.k > A.k or not A.contains_point(B.base):
        return False
    return all(in_span(d, A.dirs, A.pivots, A.p) for d in B.dirs)


def meet_dim(A: AffineFlat, B: AffineFlat) -> int:
    """Dimension of ``A ∩ B``; -1 when they are disjoint."""
    X = intersect(A, B)
    return -1 if X is EMPTY else X.k


# --- enumeration -----------------------------------------------------------


def _subspace_bases(n: int, k: int, p: int) -> Iterator[Matrix]:
    """Every k-dim subspace of F_p^n exactly once, as an RREF basis."""
    for piv in itertools.combinations(range(n), k):
        pset = set(piv)
        free = [(i, j) for i in range(k) for j in range(piv[i] + 1, n) if j not in pset]
        for vals in itertools.product(range(p), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, c in enumerate(piv):
                rows[i][c] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield tuple(tuple(r) for r in rows)


def _coset_reps(n: int, pivots: Sequence[int], p: int) -> Iterator[Vec]:
    pset = set(pivots)
    free = [j for j in range(n) if j not in pset]
    for vals in itertools.product(range(p), repeat=len(free)):
        v = [0] * n
        for j, x in zip(free, vals):
            v[j] = x
        yield tuple(v)


@functools.lru_cache(maxsize=64)
def all_flats(p: int, n: int, k: int) -> tuple[AffineFlat, ...]:
    """All k-flats of F_p^n, sorted by canonical form."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    as_field(p)
    _check_guard(count_flats(n, k, p), f"enumerate_flats(n={n}, k={k}, q={p})")
    out = []
    for dirs in _subspace_bases(n, k, p):
        piv = tuple(next(j for j, x in enumerate(r) if x) for r in dirs)
        for b in _coset_reps(n, piv, p):
            out.append(AffineFlat(p, n, k, dirs, b))
    out.sort()
    return tuple(out)


def enumerate_flats(n: int, k: int, field: PrimeField | int) -> Iterator[AffineFlat]:
    return iter(all_flats(as_field(field).p, n, k))


def linear_subspaces(n: int, k: int, field: PrimeField | int) -> Iterator[AffineFlat]:
    """The k-flats through the origin, i.e. the Grassmannian G(n, k)."""
    p = as_field(field).p
    origin = (0,) * n
    for dirs in _subspace_bases(n, k, p):
        yield AffineFlat(p, n, k, dirs, origin)


@functools.lru_cache(maxsize=1 << 16)
def _subflats(L: AffineFlat, kk: int) -> tuple[AffineFlat, ...]:
    p, n = L.p, L.n
    out = set()
    for local in _subspace_bases(L.k, kk, p):
        piv = tuple(next(j for j, x in enumerate(r) if x) for r in local)
        sub_dirs = [combine(r, L.dirs, p, n) for r in local]
        for rep in _coset_reps(L.k, piv, p):
            pt = [(a + b) % p for a, b in zip(L.base, combine(rep, L.dirs, p, n))]
            out.add(canonicalize(pt, sub_dirs, p))
    return tuple(sorted(out))


def subflats(L: AffineFlat, kprime: int) -> Iterator[AffineFlat]:
    """Every k'-flat contained in ``L`` exactly once."""
    if not 0 <= kprime <= L.k:
        raise ValueError(f"need 0 <= k' <= k={L.k}, got {kprime}")
    return iter(_subflats(L, kprime))


@functools.lru_cache(maxsize=1 << 16)
def _superflats(L: AffineFlat, m: int) -> tuple[AffineFlat, ...]:
    p, n = L.p, L.n
    comp = complement_units(L.pivots, n)
    out = []
    for local in _subspace_bases(n - L.k, m - L.k, p):
        extra = tuple(combine(r, comp, p, n) for r in local)
        out.append(canonicalize(L.base, L.dirs + extra, p))
    return tuple(sorted(out))


def superflats(L: AffineFlat, m: int) -> Iterator[AffineFlat]:
    """Every m-flat of the ambient space containing ``L`` exactly once."""
    if not L.k <= m <= L.n:
        raise ValueError(f"need k={L.k} <= m <= n={L.n}, got m={m}")
    return iter(_superflats(L, m))


# --- exact counts ----------------------------------------------------------


def gaussian_binomial(d: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^d."""
    if not 0 <= k <= d:
        raise ValueError(f"need 0 <= k <= d, got d={d}, k={k}")
    num = den = 1
    for i in range(k):
        num *= q ** (d - i) - 1
        den *= q ** (k - i) - 1
    return num // den


def count_flats(d: int, k: int, q: int) -> int:
    """Number of affine k-flats in F_q^d."""
    return q ** (d - k) * gaussian_binomial(d, k, q)


def count_containing(l: int, lprime: int, m: int, q: int) -> int:
    """Number of l'-flats of F_q^m containing a fixed l-flat."""
    if not 0 <= l < lprime <= m:
        raise ValueError(f"need 0 <= l < l' <= m, got l={l}, l'={lprime}, m={m}")
    return gaussian_binomial(m - l, lprime - l, q)


def count_disjoint_hyperplanes(l: int, k: int, q: int) -> int:
    """Number of (k-1)-flats of F_q^k missing a fixed l-flat.

    Such a hyperplane must be a translate of one whose direction contains the
    l-flat's direction; each of those directions has q - 1 disjoint translates.
    """
    if not 0 <= l <= k - 1:
        raise ValueError(f"need 0 <= l <= k-1, got l={l}, k={k}")
    return q ** (k - l) - 1


def standard_flat(n: int, k: int, field: PrimeField | int, offset: Sequence[int] | None = None) -> AffineFlat:
    """``offset + span(e_0, ..., e_{k-1})``."""
    units = [tuple(1 if i == j else 0 for i in range(n)) for j in range(k)]
    return canonicalize(offset or (0,) * n, units, field)
