from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatunion.gf_linear import (
    MAX_PRIME,
    PrimeField,
    field_inverse,
    in_span,
    is_prime,
    left_null_space,
    rank,
    row_basis,
    rref,
    solve_combination,
    solve_membership,
)

PRIMES = [2, 3, 5, 7]


def matrices(max_rows=4, max_cols=4):
    return st.sampled_from(PRIMES).flatmap(
        lambda p: st.tuples(
            st.just(p),
            st.integers(1, max_rows).flatmap(
                lambda r: st.integers(1, max_cols).flatmap(
                    lambda c: st.lists(
                        st.lists(st.integers(0, p - 1), min_size=c, max_size=c),
                        min_size=r, max_size=r,
                    )
                )
            ),
        )
    )


def brute_span(rows, p):
    n = len(rows[0])
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        out.add(tuple(sum(c * r[i] for c, r in zip(coeffs, rows)) % p for i in range(n)))
    return out


def test_prime_field_validation():
    assert PrimeField(5).q == 5
    with pytest.raises(ValueError):
        PrimeField(4)
    with pytest.raises(ValueError):
        PrimeField(37)
    assert is_prime(MAX_PRIME)


@pytest.mark.parametrize("a,p,expected", [(1, 7, 1), (2, 5, 3), (4, 5, 4)])
def test_field_inverse_examples(a, p, expected):
    assert field_inverse(a, p) == expected


def test_field_inverse_exhaustive_and_zero():
    for p in PRIMES + [11, 13]:
        for a in range(1, p):
            brute = next(x for x in range(p) if a * x % p == 1)
            assert field_inverse(a, p) == brute
        with pytest.raises(ZeroDivisionError):
            field_inverse(0, p)
        with pytest.raises(ZeroDivisionError):
            field_inverse(p, p)


def test_rref_examples():
    R, r, piv = rref([[0, 0], [0, 0]], 3)
    assert (R, r, tuple(piv)) == (((0, 0), (0, 0)), 0, ())
    R, r, piv = rref([[1, 1], [1, 2]], 3)
    assert (R, r, tuple(piv)) == (((1, 0), (0, 1)), 2, (0, 1))
    R, r, piv = rref([[2, 4]], 5)
    assert (R, r, tuple(piv)) == (((1, 2),), 1, (0,))


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rref_properties(pm):
    p, M = pm
    R, r, piv = rref(M, p)
    assert rref(R, p) == (R, r, piv)
    assert r == len(piv) == sum(1 for row in R if any(row))
    # reduced echelon: pivot columns are unit columns, pivots strictly increase
    assert list(piv) == sorted(set(piv))
    for i, c in enumerate(piv):
        assert R[i][c] == 1
        assert all(R[j][c] == 0 for j in range(len(R)) if j != i)
        assert all(x == 0 for x in R[i][:c])
    # same row space
    assert brute_span(M, p) == brute_span(R, p)
    assert len(brute_span(M, p)) == p**r


def test_solve_membership_examples():
    assert solve_membership((2, 2), (0, 0), [[1, 1]], 3)
    assert not solve_membership((1, 0), (0, 0), [[1, 1]], 3)
    assert solve_membership((1, 2, 0), (1, 2, 0), [[0, 1, 1], [1, 0, 0]], 5)
    with pytest.raises(ValueError):
        solve_membership((1, 2), (0, 0, 0), [[1, 0, 0]], 3)


@settings(max_examples=100, deadline=None)
@given(matrices(3, 3), st.data())
def test_membership_matches_brute_span(pm, data):
    p, M = pm
    basis, piv = row_basis(M, p)
    n = len(M[0])
    x = tuple(data.draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n)))
    span = brute_span(M, p)
    assert in_span(x, basis, piv, p) == (x in span)
    assert solve_membership(x, (0,) * n, basis, p) == (x in span)
    coeffs = solve_combination(basis, x, p) if basis else None
    if x in span and basis:
        assert coeffs is not None
        assert tuple(sum(c * r[i] for c, r in zip(coeffs, basis)) % p for i in range(n)) == x
    elif basis:
        assert coeffs is None


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_left_null_space(pm):
    p, M = pm
    N = left_null_space(M, p)
    assert len(N) == len(M) - rank(M, p)
    for y in N:
        assert all(sum(y[i] * M[i][j] for i in range(len(M))) % p == 0 for j in range(len(M[0])))
    if N:
        assert rank(N, p) == len(N)
