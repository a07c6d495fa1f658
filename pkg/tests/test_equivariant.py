import pytest
from hypothesis import given, settings, strategies as st

from koszulkit.equivariant import (ActionScenario, a_shriek, build_C, coaction, heisenberg_identity,
                                   omega_algebra)
from koszulkit.algebra import mul
from koszulkit.graded import StructuralError
from koszulkit.suites import rho_zero_regression

E4 = ActionScenario(1, 1, [[[1]]], 2, name="E4")


def test_e4_heisenberg_identity():
    v = heisenberg_identity(E4)
    assert v.ok and v.table_ok
    # e . dx + dx . e = x
    assert v.pairs == {("e", "dx"): ("1*x", "1*x")}


def test_e4_structures():
    assert coaction(E4)[1].ok
    c = build_C(E4)[1]
    assert c.ok and c.difference_is_phi
    assert a_shriek(E4).ok


def test_omega_algebra_grading():
    # forms sit in degree -1 (odd) and O_X is cut off above poly_trunc
    R = omega_algebra(E4)
    dx, x = R.gen("dx"), R.gen("x")
    assert R.degree(R.parse_monomial("dx")) == -1
    assert mul(R, dx, dx) == {}
    assert mul(R, x, mul(R, x, x)) == {}
    assert mul(R, x, x) == {R.parse_monomial("x^2"): 1}
    assert len(R.basis()) == 6


def test_rho_must_be_a_representation():
    with pytest.raises(StructuralError):
        ActionScenario(2, 2, [[[0, 1], [0, 0]], [[0, 0], [1, 0]]], 1)
    # sl2 on its standard representation passes once the bracket is supplied
    sl2 = [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, -1]]]
    bracket = {(0, 1): {2: 1}, (1, 0): {2: -1}, (2, 0): {0: 2}, (0, 2): {0: -2}, (2, 1): {1: -2}, (1, 2): {1: 2}}
    assert ActionScenario(3, 2, sl2, 1, bracket).representation_witness() is None


def test_rho_zero_regression():
    w, _ = rho_zero_regression(E4)
    assert w is None


@settings(max_examples=8)
@given(st.integers(1, 2).flatmap(
    lambda v: st.lists(st.lists(st.integers(-2, 2), min_size=v, max_size=v), min_size=1, max_size=2)))
def test_diagonal_actions(diags):
    # commuting diagonal matrices always give an abelian representation
    v = len(diags[0])
    rho = [[[d[i] if i == j else 0 for j in range(v)] for i in range(v)] for d in diags]
    s = ActionScenario(len(diags), v, rho, 1)
    hv = heisenberg_identity(s)
    assert hv.ok and hv.table_ok
    assert a_shriek(s).ok
    assert build_C(s)[1].ok
