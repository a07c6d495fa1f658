from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from koszulkit.algebra import check_dg_algebra, diff, koszul, mul
from koszulkit.graded import DegreeWindow, StructuralError
from koszulkit.pbw import Generator, PBWAlgebra, exterior_algebra, heisenberg_algebra, sym_algebra
from koszulkit.suites import small_monomials


def el(alg, **terms):
    return {alg.parse_monomial(k.replace("_", "*")): Fraction(c) for k, c in terms.items()}


def test_weyl_relations():
    # even x, y with [x, y] = 1; weights chosen to make the bracket homogeneous
    w = PBWAlgebra([Generator("x", 0, 1), Generator("y", 0, -1)], {("x", "y"): 1})
    x, y = w.gen("x"), w.gen("y")
    assert diff_sub(mul(w, x, y), mul(w, y, x)) == w.one()
    yy = mul(w, y, y)
    assert diff_sub(mul(w, x, yy), mul(w, yy, x)) == {w.parse_monomial("y"): 2}


def diff_sub(a, b):
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, 0) - c
        if not out[k]:
            del out[k]
    return out


def test_odd_generators_anticommute():
    e = exterior_algebra(["a", "b"])
    a, b = e.gen("a"), e.gen("b")
    assert mul(e, a, a) == {}
    ab, ba = mul(e, a, b), mul(e, b, a)
    assert ab == {k: -c for k, c in ba.items()}


def test_basis_counts():
    e = exterior_algebra(["a", "b", "c"])
    assert len(e.basis()) == 8
    assert len(e.basis(DegreeWindow(2, 2))) == 3
    s = sym_algebra([Generator("t", 2)])
    assert len(s.basis(wcap=5)) == 6
    with pytest.raises(StructuralError):
        sym_algebra([Generator("t", 0, 0)]).basis()


def test_rejects_bad_structure():
    with pytest.raises(StructuralError):
        PBWAlgebra([Generator("x", 0)], {("x", "x"): 1})
    with pytest.raises(StructuralError):
        PBWAlgebra([Generator("x", 1), Generator("y", 1)], {("x", "y"): 1})  # bracket not of weight 2
    with pytest.raises(StructuralError):
        sym_algebra([Generator("u", 1)], {"u": {"1": 1}})


def test_leibniz_on_a_shriek():
    a = sym_algebra([Generator("u", 1), Generator("th", 2)], {"u": {"th": 1}})
    u, th = a.gen("u"), a.gen("th")
    assert diff(a, mul(a, u, th)) == mul(a, th, th)
    assert check_dg_algebra(a, a.basis(wcap=3)) is None


def test_koszul_sign():
    assert koszul(1, 1) == -1 and koszul(2, 1) == 1 and koszul(-1, 3) == -1


coeff = st.integers(-3, 3)


@st.composite
def heisenberg(draw):
    rm, rn = draw(st.integers(1, 2)), draw(st.integers(0, 2))
    phi = [[draw(coeff) for _ in range(rm)] for _ in range(rn)]
    m = [Generator(f"x{i}", -1, -1) for i in range(rm)]
    n = [Generator(f"y{j}", 1, 1) for j in range(rn)]
    return heisenberg_algebra(m, n, phi)


@given(heisenberg())
def test_heisenberg_is_associative(h):
    assert check_dg_algebra(h, small_monomials(h)) is None


@given(heisenberg())
def test_bracket_is_phi(h):
    for (i, j), val in h.omega.items():
        gi, gj = h.gen(i), h.gen(j)
        ab, ba = mul(h, gi, gj), mul(h, gj, gi)
        sign = -1 if h.gens[i].odd and h.gens[j].odd else 1
        comm = dict(ab)
        for k, c in ba.items():
            comm[k] = comm.get(k, 0) - sign * c
        assert {k: c for k, c in comm.items() if c} == val
