from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mesharc.fields import (FieldError, FieldSpec, QQ, SpanSolver, kernel_of, rank_of, solve_in_span,
                            vec_add, vec_axpy, vec_scale, vec_sub)


def test_field_spec_validation():
    assert str(QQ) == "Q"
    assert str(FieldSpec(3)) == "GF(3)"
    for bad in (-1, 1, 4, 9):
        with pytest.raises(FieldError):
            FieldSpec(bad)


def test_coercion_and_inverse():
    F = FieldSpec(5)
    assert F(Fraction(1, 2)) == 3
    assert F(-1) == 4
    assert F.inv(2) == 3
    assert QQ.inv(3) == Fraction(1, 3)
    assert QQ(Fraction(4, 2)) == 2
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_vector_helpers_drop_zeros():
    F = FieldSpec(2)
    x = {0: 1, 1: 1}
    y = vec_add(F, x, {1: 1})
    assert y == {0: 1}
    assert vec_sub(QQ, {0: 2}, {0: 2}) == {}
    assert vec_scale(F, 2, x) == {}
    z: dict = {}
    vec_axpy(QQ, z, Fraction(1, 2), {3: 4})
    assert z == {3: 2}


def _brute_rank(p: int, vectors: list, n: int) -> int:
    """log_p of the size of the span, by enumerating all combinations."""
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        v = tuple(sum(c * vec[i] for c, vec in zip(coeffs, vectors)) % p for i in range(n))
        span.add(v)
    r = 0
    while p ** r < len(span):
        r += 1
    assert p ** r == len(span)
    return r


small_matrix = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=4))


@settings(max_examples=60, deadline=None)
@given(small_matrix, st.sampled_from([2, 3]))
def test_rank_matches_span_enumeration(rows, p):
    F = FieldSpec(p)
    n = len(rows[0])
    vecs = [{i: F(x) for i, x in enumerate(r) if F(x)} for r in rows]
    assert rank_of(F, vecs) == _brute_rank(p, [[F(x) for x in r] for r in rows], n)


def _det(M):
    """Laplace expansion; independent of any elimination."""
    if len(M) == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * _det([row[:j] + row[j + 1:] for row in M[1:]]) for j in range(len(M)))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_full_rank_iff_nonzero_determinant(M):
    vecs = [{i: x for i, x in enumerate(r) if x} for r in M]
    assert (rank_of(QQ, vecs) == len(M)) == (_det(M) != 0)


@settings(max_examples=60, deadline=None)
@given(small_matrix, st.sampled_from([0, 2, 3, 5]))
def test_kernel_vectors_annihilate_and_count(rows, p):
    F = FieldSpec(p)
    cols = {t: {i: F(x) for i, x in enumerate(r) if F(x)} for t, r in enumerate(rows)}
    ker = kernel_of(F, cols)
    assert len(ker) == len(rows) - rank_of(F, cols.values())
    for k in ker:
        tot: dict = {}
        for t, c in k.items():
            vec_axpy(F, tot, c, cols[t])
        assert tot == {}


def test_solve_in_span_and_express():
    cols = {"a": {0: 1, 1: 1}, "b": {1: 1}}
    sol = solve_in_span(QQ, cols, {"t": {0: 2, 1: 5}})
    assert sol["t"] == {"a": 2, "b": 3}
    with pytest.raises(FieldError):
        solve_in_span(QQ, cols, {"t": {2: 1}})
    s = SpanSolver(QQ)
    assert s.add({0: 1}, "x")
    assert not s.add({0: 3}, "y")
    assert s.kernel == [{"y": 1, "x": -3}] or s.kernel == [{"x": -3, "y": 1}]
    assert s.express({0: 5}) == {"x": 5}
    assert s.express({1: 1}) is None
    assert s.residual({0: 1, 1: 2}) == {1: 2}
