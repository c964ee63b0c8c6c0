"""Exact arithmetic and row reduction over small prime fields.

Vectors are tuples of ints reduced mod p, matrices are tuples of row tuples.
Everything here is pure and returns immutable values.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

MAX_PRIME = 31

Vec = tuple[int, ...]
Matrix = tuple[Vec, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime ``p <= MAX_PRIME``."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise ValueError(f"field modulus must be prime, got {self.p!r}")
        if self.p > MAX_PRIME:
            raise ValueError(f"p={self.p} exceeds the supported ceiling {MAX_PRIME}")

    @property
    def q(self) -> int:
        return self.p

    def reduce(self, x: int) -> int:
        return x % self.p

    def vec(self, coords: Sequence[int]) -> Vec:
        return tuple(int(c) % self.p for c in coords)

    def inv(self, a: int) -> int:
        return field_inverse(a, self)


def as_field(field: PrimeField | int) -> PrimeField:
    return field if isinstance(field, PrimeField) else PrimeField(int(field))


def field_inverse(a: int, field: PrimeField | int) -> int:
    p = as_field(field).p
    a %= p
    if a == 0:
        raise ZeroDivisionError(f"0 has no inverse mod {p}")
    return pow(a, p - 2, p)


def _rows(M: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    rows = [[int(x) % p for x in row] for row in M]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("ragged matrix")
    return rows


def rref(M: Sequence[Sequence[int]], field: PrimeField | int) -> tuple[Matrix, int, tuple[int, ...]]:
    """Reduced row-echelon form of ``M`` over F_p.

    Returns ``(R, rank, pivots)``. ``R`` keeps the shape of ``M``; zero rows
    collect at the bottom.
    """
    p = as_field(field).p
    rows = _rows(M, p)
    if not rows:
        return (), 0, ()
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        pr = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        if inv != 1:
            rows[r] = [(x * inv) % p for x in rows[r]]
        piv_row = rows[r]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], piv_row)]
        pivots.append(c)
        r += 1
    return tuple(tuple(row) for row in rows), r, tuple(pivots)


def rank(M: Sequence[Sequence[int]], field: PrimeField | int) -> int:
    return rref(M, field)[1]


def transpose(M: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*M))


def row_basis(M: Sequence[Sequence[int]], field: PrimeField | int) -> tuple[Matrix, tuple[int, ...]]:
    """Nonzero rows of the RREF of ``M`` together with their pivot columns."""
    R, r, piv = rref(M, field)
    return R[:r], piv


def reduce_by(v: Sequence[int], basis: Matrix, pivots: Sequence[int], p: int) -> Vec:
    """Reduce ``v`` modulo the row span of an RREF ``basis``.

    The result has zeros in every pivot column and is zero iff ``v`` lies in
    the span.
    """
    out = [x % p for x in v]
    for row, c in zip(basis, pivots):
        f = out[c]
        if f:
            out = [(x - f * y) % p for x, y in zip(out, row)]
    return tuple(out)


def in_span(v: Sequence[int], basis: Matrix, pivots: Sequence[int], p: int) -> bool:
    return not any(reduce_by(v, basis, pivots, p))


def solve_membership(
    point: Sequence[int],
    base: Sequence[int],
    dirs: Sequence[Sequence[int]],
    field: PrimeField | int,
) -> bool:
    """True iff ``point - base`` lies in the row span of ``dirs``."""
    p = as_field(field).p
    n = len(base)
    if len(point) != n or any(len(r) != n for r in dirs):
        raise ValueError("dimension mismatch between point, base and dirs")
    offset = [(a - b) % p for a, b in zip(point, base)]
    if not any(offset):
        return True
    if not dirs:
        return False
    return rank(list(dirs) + [offset], p) == rank(dirs, p)


def left_null_space(M: Sequence[Sequence[int]], field: PrimeField | int) -> Matrix:
    """Basis of ``{c : c @ M = 0}`` (coefficient vectors combining rows to zero)."""
    p = as_field(field).p
    m = len(M)
    if m == 0:
        return ()
    ncols = len(M[0])
    aug = [list(M[i]) + [1 if j == i else 0 for j in range(m)] for i in range(m)]
    R, _, piv = rref(aug, p)
    # rows whose left part vanished carry the dependencies
    out = []
    for row in R:
        if not any(row[:ncols]):
            out.append(tuple(row[ncols:]))
    return tuple(out)


def solve_combination(
    rows: Sequence[Sequence[int]], target: Sequence[int], field: PrimeField | int
) -> Vec | None:
    """Some coefficient vector ``c`` with ``c @ rows == target``, or None."""
    p = as_field(field).p
    m = len(rows)
    if m == 0:
        return () if not any(x % p for x in target) else None
    n = len(target)
    # columns of the system are the rows; solve rows^T c = target
    aug = [[rows[i][j] for i in range(m)] + [target[j]] for j in range(n)]
    R, r, piv = rref(aug, p)
    if piv and piv[-1] == m:
        return None
    c = [0] * m
    for row, col in zip(R[:r], piv):
        c[col] = row[m]
    return tuple(c)


def complement_units(pivots: Sequence[int], n: int) -> Matrix:
    """Unit vectors on the non-pivot columns; they span a complement of the RREF row space."""
    pset = set(pivots)
    return tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n) if j not in pset)


def combine(coeffs: Sequence[int], rows: Sequence[Sequence[int]], p: int, n: int) -> Vec:
    out = [0] * n
    for c, row in zip(coeffs, rows):
        if c:
            for i, x in enumerate(row):
                out[i] += c * x
    return tuple(x % p for x in out)
