import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from localcoeff.errors import BadParams, DimensionMismatch, NoSolution
from localcoeff.fieldlin import (FieldElt, FieldMatrix, Subquotient, Subspace, check_modulus, image_basis,
                                 inverse_table, is_prime, kernel_basis, rank, row_reduce, solve)

PRIMES = [2, 3, 5, 7, 11, 13]


@st.composite
def matrices(draw, max_side=6):
    q = draw(st.sampled_from(PRIMES))
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    entries = draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c))
    return FieldMatrix(np.array(entries, dtype=np.int64).reshape(r, c), q)


def test_moduli():
    assert is_prime(2) and is_prime(65521) and not is_prime(1) and not is_prime(91)
    assert check_modulus(5) == 5
    with pytest.raises(BadParams):
        check_modulus(6)
    with pytest.raises(BadParams):
        check_modulus(65537)          # prime but too large
    inv = inverse_table(7)
    assert all((a * inv[a]) % 7 == 1 for a in range(1, 7))


def test_field_elements():
    a, b = FieldElt(3, 7), FieldElt(5, 7)
    assert int(a + b) == 1 and int(a * b) == 1 and int(a - b) == 5
    assert int(a / b) == int(a * b.inverse())
    assert int(-a) == 4
    with pytest.raises(BadParams):
        FieldElt(1, 4)


def test_row_reduce_examples():
    red = row_reduce(FieldMatrix.identity(3, 5))
    assert red.rank == 3 and red.rref.is_identity() and red.pivot_cols == [0, 1, 2]
    assert row_reduce(FieldMatrix.zeros(2, 2, 3)).rank == 0
    # det = 1 - 4 = -3 = 0 mod 3
    assert row_reduce(FieldMatrix([[1, 2], [2, 1]], 3)).rank == 1
    assert row_reduce(FieldMatrix.zeros(0, 4, 5)).rank == 0


def test_kernel_examples():
    assert kernel_basis(FieldMatrix.identity(4, 7)).dim == 0
    assert kernel_basis(FieldMatrix.zeros(2, 3, 5)).dim == 3
    k = kernel_basis(FieldMatrix([[1, 1]], 3))
    assert k.dim == 1 and k.contains([1, 2])


def test_solve_examples():
    b = np.array([1, 2, 3])
    assert np.array_equal(solve(FieldMatrix.identity(3, 5), b), b)
    with pytest.raises(NoSolution):
        solve(FieldMatrix.zeros(2, 2, 5), [1, 0])
    x = solve(FieldMatrix([[1, 2], [2, 1]], 3), [0, 0])
    assert Subspace.span(np.array([[1], [1]]), 3).contains(x)
    with pytest.raises(DimensionMismatch):
        solve(FieldMatrix.identity(2, 3), [1, 2, 0])


def test_matrix_operations():
    a = FieldMatrix([[1, 2], [3, 4]], 5)
    assert (a @ a.inverse()).is_identity()
    assert (a + a - a) == a
    assert a.T.T == a
    assert a.kron(FieldMatrix.identity(2, 5)).shape == (4, 4)
    assert FieldMatrix.block({(0, 0): a, (1, 1): a}, [2, 2], [2, 2], 5).rank() == 4
    with pytest.raises(Exception):
        FieldMatrix([[1, 1], [1, 1]], 5).inverse()


def test_subspace_algebra():
    q = 5
    u = Subspace.span(np.array([[1, 0, 0], [0, 1, 0]]).T, q, 3)
    w = Subspace.span(np.array([[0, 1, 0], [0, 0, 1]]).T, q, 3)
    assert (u + w).dim == 3
    assert u.intersect(w).dim == 1 and u.intersect(w).contains([0, 2, 0])
    assert u.is_subspace_of(u + w)
    c = u.coordinates([3, 4, 0])
    assert np.array_equal(u.array @ c % q, [3, 4, 0])
    sq = Subquotient(u, u.intersect(w))
    assert sq.dim == 1
    assert sq.coords([0, 1, 0]).tolist() == [0]
    assert Subspace.span(np.zeros((3, 0), dtype=np.int64), q, 3).dim == 0
    assert image_basis(FieldMatrix([[1, 1], [1, 1]], q)).dim == 1


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_nullity_and_kernel(m):
    k = kernel_basis(m)
    assert rank(m) + k.dim == m.cols
    if k.dim:
        assert not np.any(m.array @ k.array % m.q)


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rref_idempotent_and_transpose_rank(m):
    red = row_reduce(m)
    assert row_reduce(red.rref).rref == red.rref
    assert rank(m) == rank(m.T) == red.rank


@settings(max_examples=60, deadline=None)
@given(matrices(), st.integers(0, 2**31 - 1))
def test_solve_consistent_systems(m, seed):
    rng = np.random.default_rng(seed)
    x0 = rng.integers(0, m.q, size=m.cols)
    b = m.array @ x0 % m.q
    x = solve(m, b)
    assert np.array_equal(m.array @ x % m.q, b)
