from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bggtate.linalg import CharacteristicMismatch, Field, InconsistentSystem, Matrix, rref_rank

PRIMES = [2, 3, 7, 101, 32003, 2147483647]


def matrices(max_rows=7, max_cols=7):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols), st.integers(0, 2**32)).map(
        lambda t: np.random.default_rng(t[2]).integers(-4, 5, size=(t[0], t[1])).tolist())


def test_identity_over_gf7():
    res = rref_rank(Matrix.from_rows(Field(7), np.eye(3, dtype=int).tolist()))
    assert res.rank == 3
    assert res.kernel_basis.rows == 0


def test_rank_one_over_gf5():
    res = rref_rank(Matrix.from_rows(Field(5), [[1, 2], [2, 4]]))
    assert res.rank == 1
    assert res.kernel_basis.rows == 1
    assert res.pivot_cols == [0]
    ker = res.kernel_basis.data
    assert not np.any(Field(5).mul(ker, Field(5).array([[1, 2], [2, 4]])))


def test_rank_two_over_gf2():
    assert rref_rank(Matrix.from_rows(Field(2), [[1, 1], [1, 0]])).rank == 2


def test_characteristic_mismatch():
    a = Matrix.from_rows(Field(5), [[1]])
    b = Matrix.from_rows(Field(7), [[1]])
    with pytest.raises(CharacteristicMismatch):
        rref_rank(a, b)
    with pytest.raises(CharacteristicMismatch):
        a @ b


def test_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        Field(32001 * 3)


def test_rationals_are_exact():
    Q = Field(0)
    m = Q.array([[1, "1/3"], ["2/3", 5]])
    inv = Q.inverse(m)
    assert Q.mul(m, inv).tolist() == [[1, 0], [0, 1]]
    assert isinstance(inv[0, 0], Fraction)


def test_scalar_coercion():
    f = Field(7)
    assert f.scalar("1/2") == 4
    assert f.scalar(-1) == 6
    assert f.inv(3) * 3 % 7 == 1


@pytest.mark.parametrize("p", PRIMES)
def test_products_are_exact_for_large_inner_dimension(p):
    f = Field(p)
    rng = np.random.default_rng(p % 1000)
    a = f.random(rng, 3, 700)
    b = f.random(rng, 700, 4)
    expected = [[sum(int(x) * int(y) for x, y in zip(a[i], b[:, j])) % p for j in range(4)] for i in range(3)]
    assert f.mul(a, b).tolist() == expected


def test_solve_left_and_inconsistency():
    f = Field(11)
    b = f.array([[1, 0, 2], [0, 1, 3]])
    x = f.solve_left(b, f.array([[2, 3, 2 * 2 + 3 * 3]]))
    assert f.mul(x, b).tolist() == [[2, 3, 13 % 11]]
    with pytest.raises(InconsistentSystem):
        f.solve_left(b, f.array([[0, 0, 1]]))


@given(matrices(), st.sampled_from(PRIMES[:5] + [0]))
def test_rank_nullity(rows, p):
    f = Field(p)
    a = f.array(rows)
    res = rref_rank(Matrix(f, a))
    assert res.rank + res.kernel_basis.rows == a.shape[0]
    assert res.rank <= min(a.shape)
    if res.kernel_basis.rows:
        assert f.is_zero(f.mul(res.kernel_basis.data, a))


@given(matrices(), st.sampled_from([3, 32003, 0]))
def test_rref_idempotent(rows, p):
    f = Field(p)
    r1, piv1 = f.rref(f.array(rows))
    r2, piv2 = f.rref(r1)
    assert np.array_equal(r1, r2) and piv1 == piv2


@given(matrices(), st.integers(0, 2**32))
def test_rank_invariant_under_row_permutation(rows, seed):
    f = Field(32003)
    a = Matrix.from_rows(f, rows)
    perm = np.random.default_rng(seed).permutation(a.rows)
    assert rref_rank(a).rank == rref_rank(a.permute_rows(perm)).rank
    assert rref_rank(a).rank == rref_rank(a.transpose()).rank


@given(matrices(5, 5))
def test_rank_agrees_between_q_and_large_prime_on_small_integers(rows):
    # entries in [-4, 4] with at most 5x5: no prime above 5^5 * 4^5 can divide a nonzero minor
    assert Field(0).rank(Field(0).array(rows)) == Field(2147483647).rank(Field(2147483647).array(rows))
