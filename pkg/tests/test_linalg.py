from fractions import Fraction

import sympy
from hypothesis import given, strategies as st

from koszulkit.linalg import Echelon, axpy, bareiss_rank, nullspace, rank, solve, span_basis, vadd, vscale, vsub

small = st.integers(-3, 3)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def columns_of(mat):
    return {j: {i: Fraction(row[j]) for i, row in enumerate(mat) if row[j]} for j in range(len(mat[0]))}


def test_vector_helpers_drop_zeros():
    v = {"a": Fraction(1)}
    axpy(v, -1, {"a": 1, "b": 2})
    assert v == {"b": -2}
    assert vadd({"a": 1}, {"a": -1}) == {}
    assert vscale(0, {"a": 1}) == {}
    assert vsub({"a": 2}, {"a": 2}) == {}


@given(matrices())
def test_rank_agrees_with_sympy(mat):
    expected = sympy.Matrix(mat).rank()
    cols = list(columns_of(mat).values())
    assert rank(cols) == expected
    assert rank(cols, fast=False) == expected
    assert bareiss_rank([list(r) for r in mat]) == expected


@given(matrices())
def test_nullspace_vectors_are_in_the_kernel(mat):
    cols = columns_of(mat)
    kernel = nullspace(cols)
    assert len(kernel) == len(cols) - sympy.Matrix(mat).rank()
    for x in kernel:
        total = {}
        for j, c in x.items():
            axpy(total, c, cols[j])
        assert total == {}


@given(matrices(), st.lists(small, min_size=6, max_size=6))
def test_solve_consistent_systems(mat, xs):
    cols = columns_of(mat)
    rhs = {}
    for j, col in cols.items():
        axpy(rhs, xs[j], col)
    sol = solve(cols, rhs)
    assert sol is not None
    back = {}
    for j, c in sol.items():
        axpy(back, c, cols[j])
    assert back == rhs


def test_solve_detects_inconsistency():
    cols = {"x": {0: Fraction(1), 1: Fraction(1)}}
    assert solve(cols, {0: 1, 1: 2}) is None
    assert solve(cols, {2: 1}) is None
    assert solve(cols, {}) == {}


def test_echelon_express_and_contains():
    ech = Echelon(track=True)
    ech.add({"a": 1, "b": 1}, "u")
    ech.add({"b": 1}, "v")
    assert ech.contains({"a": 3})
    combo = ech.express({"a": 1})
    assert combo == {"u": 1, "v": -1}
    assert ech.express({"c": 1}) is None
    assert len(span_basis([{"a": 1}, {"a": 2}, {"b": 1}])) == 2
