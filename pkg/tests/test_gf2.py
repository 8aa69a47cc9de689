import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from floqzx import gf2


def brute_rank(mat):
    """Oracle: rank = log2 of the number of distinct row combinations."""
    rows = [int("".join(map(str, r)), 2) if len(r) else 0 for r in mat.tolist()]
    span = {0}
    for r in rows:
        span |= {v ^ r for v in span}
    return len(span).bit_length() - 1


matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 1), min_size=c, max_size=c),
                       min_size=1, max_size=6))


@given(matrices)
@settings(max_examples=200, deadline=None)
def test_rank_matches_span_enumeration(rows):
    mat = np.array(rows, dtype=np.uint8)
    assert gf2.rank(mat) == brute_rank(mat)


@given(matrices)
@settings(max_examples=200, deadline=None)
def test_nullspace_vectors_annihilate(rows):
    mat = np.array(rows, dtype=np.uint8)
    null = gf2.nullspace(mat)
    assert len(null) == mat.shape[1] - gf2.rank(mat)
    for v in null:
        assert not np.any((mat @ v) & 1)
    if len(null):
        assert gf2.rank(null) == len(null)


@given(matrices, st.lists(st.integers(0, 1), min_size=1, max_size=6))
@settings(max_examples=200, deadline=None)
def test_solve_consistency(rows, coeffs):
    mat = np.array(rows, dtype=np.uint8)
    x = np.array((coeffs + [0] * mat.shape[1])[: mat.shape[1]], dtype=np.uint8)
    rhs = (mat @ x) & 1
    sol = gf2.solve(mat, rhs)
    assert sol is not None
    assert not np.any(((mat @ sol) ^ rhs) & 1)


def test_solve_inconsistent():
    mat = np.array([[1, 0], [1, 0]], dtype=np.uint8)
    assert gf2.solve(mat, np.array([1, 0], dtype=np.uint8)) is None


def test_in_rowspan():
    mat = np.array([[1, 1, 0], [0, 1, 1]], dtype=np.uint8)
    assert gf2.in_rowspan(mat, np.array([1, 0, 1], dtype=np.uint8))
    assert not gf2.in_rowspan(mat, np.array([1, 0, 0], dtype=np.uint8))


def test_subspace_sum_dimensions():
    a = np.array([[1, 0, 0]], dtype=np.uint8)
    b = np.array([[0, 1, 0], [1, 1, 0]], dtype=np.uint8)
    s = gf2.subspace_sum(a, b)
    assert gf2.rank(s) == 2
