from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from koszulkit.graded import DegreeWindow, StructuralError
from koszulkit.koszul import (KoszulScenario, build_K, classical_koszul, end_comparison, heisenberg_embeddings,
                              twisted_L)
from koszulkit.suites import phi_zero_regression

E1 = KoszulScenario([0], [0], [[1]], name="E1")
W = DegreeWindow(-4, 4)


def exterior_dims(n):
    # oracle: N in degree 0 makes Sym(N[-1]) an exterior algebra on n classes of degree 1
    return {k: comb(n, k) for k in range(n + 1)}


def test_e1_cohomology():
    kc = build_K(E1, W)
    assert kc.lossless and kc.ok
    assert {d: v for d, v in kc.dims.items() if v} == {0: 1, 1: 1}


def test_e1_twisted_L():
    v = twisted_L(E1)
    assert v.ok and v.dims == {1: 1}


def test_e1_end_comparison():
    kc = build_K(E1, DegreeWindow(-6, 6))
    ec = end_comparison(kc, DegreeWindow(-2, 2))
    assert ec.ok
    frozen = {-1: 1, 0: 2, 1: 1}
    assert {d: v for d, v in ec.end_dims.items() if v} == frozen
    assert {d: v for d, v in ec.a_dims.items() if v} == frozen


def test_e1_embeddings():
    ev = heisenberg_embeddings(build_K(E1, W))
    assert ev.ok


def test_phi_must_have_degree_zero():
    with pytest.raises(StructuralError):
        KoszulScenario([0], [1], [[1]])
    with pytest.raises(StructuralError):
        KoszulScenario([0], [0], [[1, 0]])
    with pytest.raises(StructuralError):
        KoszulScenario([0], [0], [[{"t": 1}]], base=["t"])


def test_empty_scenario():
    kc = build_K(KoszulScenario([], [], [], name="empty"), W)
    assert kc.ok and {d: v for d, v in kc.dims.items() if v} == {0: 1}


def test_phi_zero_regression():
    w, details = phi_zero_regression(E1, W)
    assert w is None and details["K"] == "untwisted"


def test_polynomial_base():
    # phi = t over k[t]/t^2: cohomology is Sym(N[-1]) over the base, so twice the rank-one answer
    s = KoszulScenario([0], [0], [[{"t": 1}]], base=["t"], poly_trunc=1)
    kc = build_K(s, DegreeWindow(-3, 3))
    assert kc.h_ok


def test_classical_koszul():
    ck = classical_koszul([0], 4, DegreeWindow(-4, 4))
    assert ck.ok
    ck2 = classical_koszul([0, 1], 4, DegreeWindow(-4, 4))
    assert ck2.ok


@settings(max_examples=6)
@given(st.integers(1, 2).flatmap(
    lambda rm: st.integers(1, 2).flatmap(
        lambda rn: st.lists(st.lists(st.integers(-2, 2), min_size=rm, max_size=rm), min_size=rn, max_size=rn))))
def test_cohomology_is_sym_n_shifted(phi):
    s = KoszulScenario([0] * len(phi[0]), [0] * len(phi), phi)
    kc = build_K(s, DegreeWindow(-3, 3))
    assert kc.ok
    assert {d: v for d, v in kc.dims.items() if v} == exterior_dims(len(phi))
