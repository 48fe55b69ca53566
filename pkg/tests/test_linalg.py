from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dialgebras.linalg import (GF, QQ, DenseMatrix, Echelon, MalformedMatrixError, PrimeField, Subspace,
                               field_from_spec, is_prime, nullspace_basis, rank, rcf, subspace_equal)


def naive_rref(rows, convert, inv):
    """Textbook Gauss-Jordan, one row operation at a time."""
    a = [[convert(x) for x in r] for r in rows]
    piv, r = [], 0
    ncols = len(a[0]) if a else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        s = inv(a[r][c])
        a[r] = [convert(x * s) for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [convert(x - f * y) for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    return a[:r], piv


def naive_mod(rows, p):
    return naive_rref(rows, lambda x: int(x) % p, lambda x: pow(int(x), -1, p))


def naive_frac(rows):
    return naive_rref(rows, Fraction, lambda x: 1 / Fraction(x))


small_matrices = st.integers(1, 7).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=8))


@given(small_matrices)
@settings(max_examples=150, deadline=None)
def test_prime_rcf_matches_naive(rows):
    F = GF(7)
    res = rcf(DenseMatrix.from_rows(rows, F))
    expected, piv = naive_mod(rows, 7)
    assert res.rcf.tolist() == expected
    assert list(res.pivot_columns) == piv


@given(small_matrices)
@settings(max_examples=100, deadline=None)
def test_rational_rcf_matches_naive(rows):
    res = rcf(DenseMatrix.from_rows(rows, QQ))
    expected, piv = naive_frac(rows)
    assert res.rcf.tolist() == expected
    assert list(res.pivot_columns) == piv


@given(small_matrices)
@settings(max_examples=100, deadline=None)
def test_rcf_idempotent_and_rank_nullity(rows):
    for F in (GF(101), QQ):
        m = DenseMatrix.from_rows(rows, F)
        res = rcf(m)
        if res.rank:
            assert rcf(res.rcf).rcf == res.rcf
        ns = nullspace_basis(m)
        assert res.rank + len(ns) == m.ncols
        for v in ns:
            assert all(x == 0 for x in m.apply(v))


@given(st.lists(st.lists(st.integers(0, 100), min_size=40, max_size=40), min_size=1, max_size=60),
       st.integers(1, 17))
@settings(max_examples=40, deadline=None)
def test_echelon_independent_of_chunking(rows, chunk):
    a = np.array(rows, dtype=np.int64)
    e1 = Echelon(40, 101, chunk=chunk)
    for r in a:
        e1.add(r[None, :])
    e2 = Echelon(40, 101)
    e2.add(a)
    assert e1.rank == e2.rank
    assert np.array_equal(e1.basis, e2.basis)
    assert e1.contains(a).all()


def test_large_modulus_falls_back_exactly():
    p = 1_000_003
    F = GF(p)
    rng = np.random.default_rng(0)
    rows = rng.integers(0, p, size=(12, 12)).tolist()
    expected, _ = naive_mod(rows, p)
    assert rcf(DenseMatrix.from_rows(rows, F)).rcf.tolist() == expected


def test_fields():
    assert is_prime(101) and is_prime(103) and not is_prime(100) and not is_prime(1)
    with pytest.raises(ValueError):
        PrimeField(100)
    assert field_from_spec("rational") == QQ
    assert field_from_spec(103) == GF(103)
    assert GF(101).convert(Fraction(1, 2)) == 51
    assert GF(101).signed(100) == -1


def test_malformed():
    with pytest.raises(MalformedMatrixError):
        DenseMatrix.from_rows([[1, 2], [3]], QQ)
    with pytest.raises(MalformedMatrixError):
        DenseMatrix(GF(7), np.array([[7]], dtype=np.int64))
    with pytest.raises(MalformedMatrixError):
        Subspace.from_rows([[1, 2]], QQ).contains([1, 2, 3])


def test_rank_examples():
    assert rank(DenseMatrix.identity(4, QQ)) == 4
    assert rank(DenseMatrix.zeros(3, 4, GF(101))) == 0
    assert rank(DenseMatrix.from_rows([[1, 2], [2, 4]], QQ)) == 1
    # 7 | det: rank drops mod 7 only
    m = [[1, 2], [3, -1]]
    assert rank(DenseMatrix.from_rows(m, QQ)) == 2
    assert rank(DenseMatrix.from_rows(m, GF(7))) == 1


def test_subspace_equality_and_membership():
    a = Subspace.from_rows([[1, 1, 0], [0, 1, 1]], QQ)
    b = Subspace.from_rows([[1, 2, 1], [1, 0, -1]], QQ)
    assert subspace_equal(a, b)
    assert [1, 0, -1] in a
    assert [1, 0, 0] not in a
    c = Subspace.from_rows([[1, 1, 0], [0, 1, 1]], GF(101))
    assert c.dim == 2 and [100, 0, 1] in c
