import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quivrep.errors import DimensionMismatch, EntryOverflowBudget, FieldMismatch
from quivrep.exactlin import (
    QQ,
    Field,
    Matrix,
    block_diag,
    hstack,
    inverse,
    kernel_matrix,
    kron_product,
    left_kernel_matrix,
    rank,
    rank_and_kernel,
    rref,
    solve_left,
    solve_linear,
    solve_matrix,
)

from factories import F7, random_matrix


def M(rows, k=QQ):
    return Matrix.from_rows(rows, k)


# fields and literals

def test_field_parse_and_names():
    assert Field.parse("Q") == QQ
    assert Field.parse("F7") == F7
    assert F7.name == "F7" and QQ.name == "Q"
    with pytest.raises(ValueError):
        Field.parse("F8")
    with pytest.raises(ValueError):
        Field.parse("R")


def test_literals_round_trip_in_canonical_form():
    assert QQ("4/6") == Fraction(2, 3)
    assert QQ.fmt(QQ("4/6")) == "2/3"
    assert QQ.fmt(QQ("-3/1")) == "-3"
    assert F7.fmt(F7(-1)) == "6"
    assert F7("1/2") == 4
    with pytest.raises(ValueError):
        QQ("1/0")
    with pytest.raises(ValueError):
        QQ("x")
    with pytest.raises(ValueError):
        F7("1/7")


def test_entries_are_exact():
    third = M([["1/3"]])
    assert (third.scale(3)) == Matrix.identity(1)
    assert (third + third + third)[0, 0] == 1


# shapes

def test_ragged_rows_rejected():
    with pytest.raises(DimensionMismatch):
        M([[1, 2], [3]])


def test_product_shape_checked():
    with pytest.raises(DimensionMismatch):
        M([[1, 2]]) @ M([[1, 2]])


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatch):
        M([[1]]) @ M([[1]], F7)


def test_zero_sized_matrices_compose():
    a = Matrix.zeros(2, 0)
    b = Matrix.zeros(0, 3)
    assert (a @ b) == Matrix.zeros(2, 3)
    assert rank(Matrix.zeros(0, 4)) == 0
    assert kernel_matrix(Matrix.zeros(0, 2)) == Matrix.identity(2)


# deterministic reduction

def test_rref_pivots_leftmost_first():
    r, piv = rref(M([[0, 2, 4], [1, 1, 1]]))
    assert piv == (0, 1)
    assert r == M([[1, 0, -1], [0, 1, 2]])


def test_kernel_basis_convention():
    rk, basis = rank_and_kernel(M([[1, 1]]))
    assert rk == 1
    assert basis == [(1, -1)]


def test_solve_linear_particular_sets_free_to_zero():
    sol = solve_linear(M([[1, 1]]), [2])
    assert sol.particular == (2, 0)
    assert sol.kernel == [(1, -1)]
    assert solve_linear(M([[0]]), [1]) is None


def test_inverse_and_singular():
    a = M([[2, 1], [1, 1]])
    assert inverse(a) @ a == Matrix.identity(2)
    assert inverse(M([[1, 2], [2, 4]])) is None
    assert inverse(M([[3, 0], [0, 5]], F7)) == M([[5, 0], [0, 3]], F7)


def test_kron_small():
    assert kron_product(M([[1, 0]]), M([[0, 1]])) == M([[0, 1, 0, 0]])


def test_stacking():
    a, b = M([[1]]), M([[2, 3]])
    assert block_diag([a, b]) == M([[1, 0, 0], [0, 2, 3]])
    assert hstack([a, M([[4]])]) == M([[1, 4]])


def test_power_budget():
    a = M([[2]])
    assert a.power(10) == M([[1024]])
    with pytest.raises(EntryOverflowBudget):
        a.power(100, max_bits=64)


# properties

fields = st.sampled_from([QQ, F7, Field.prime(2)])
seeds = st.integers(0, 10**6)


@settings(max_examples=60, deadline=None)
@given(seeds, fields, st.integers(0, 4), st.integers(0, 4))
def test_rank_nullity(seed, k, r, c):
    a = random_matrix(random.Random(seed), r, c, k)
    ker = kernel_matrix(a)
    assert rank(a) + ker.cols == c
    assert (a @ ker).is_zero()
    assert rank(ker) == ker.cols


@settings(max_examples=60, deadline=None)
@given(seeds, fields, st.integers(0, 4), st.integers(0, 4))
def test_left_kernel_annihilates(seed, k, r, c):
    a = random_matrix(random.Random(seed), r, c, k)
    lk = left_kernel_matrix(a)
    assert (lk @ a).is_zero()
    assert lk.rows + rank(a) == r


@settings(max_examples=60, deadline=None)
@given(seeds, fields, st.integers(1, 4), st.integers(1, 4), st.integers(1, 3))
def test_solve_matrix_solves_consistent_systems(seed, k, r, c, w):
    rng = random.Random(seed)
    a = random_matrix(rng, r, c, k)
    x0 = random_matrix(rng, c, w, k)
    b = a @ x0
    x = solve_matrix(a, b)
    assert x is not None and a @ x == b
    y = solve_left(a.T, b.T)
    assert y @ a.T == b.T


@settings(max_examples=40, deadline=None)
@given(seeds, fields)
def test_kron_mixed_product(seed, k):
    rng = random.Random(seed)
    a, c = random_matrix(rng, 2, 3, k), random_matrix(rng, 3, 2, k)
    b, d = random_matrix(rng, 1, 2, k), random_matrix(rng, 2, 2, k)
    assert kron_product(a, b) @ kron_product(c, d) == kron_product(a @ c, b @ d)


@settings(max_examples=40, deadline=None)
@given(seeds, fields, st.integers(1, 4))
def test_inverse_is_two_sided(seed, k, n):
    a = random_matrix(random.Random(seed), n, n, k)
    inv = inverse(a)
    if rank(a) == n:
        assert inv @ a == Matrix.identity(n, k) == a @ inv
    else:
        assert inv is None
