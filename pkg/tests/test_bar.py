import pytest

from koszulkit.bar import (AInftyModule, AInftyMorphism, BarCoalgebra, DgComodule, TwistingCochain,
                           ainfty_homotopy_inverse, bar_resolution, canonical_tau, check_coalgebra,
                           check_comodule, check_twisting_cochain, homotopy_unitality, strict_unitality,
                           twisted_adjunction, unit_resolution, verify_homotopy_inverse)
from koszulkit.graded import DegreeWindow
from koszulkit.modules import DgModule
from koszulkit.pbw import Generator, exterior_algebra, sym_algebra
from koszulkit.suites import ac3_module, rank_two_comodule, rank_two_module

LAM = exterior_algebra(["u"])
ASH = sym_algebra([Generator("u", 1), Generator("th", 2)], {"u": {"th": 1}}, name="E1 A!")


def words_of_weight(n):
    # oracle: the augmentation ideal has two monomials of each weight k >= 1,
    # so words of total weight n number sum over compositions of 2^parts = 2*3^(n-1)
    return 1 if n == 0 else 2 * 3 ** (n - 1)


@pytest.mark.parametrize("cap", [1, 2, 3, 4])
def test_bar_word_counts(cap):
    assert len(BarCoalgebra(ASH, True, cap, cap).words) == sum(words_of_weight(n) for n in range(cap + 1))
    assert len(BarCoalgebra(LAM, True, cap, cap).words) == cap + 1


def test_frozen_counts():
    assert len(BarCoalgebra(ASH, True, 4, 4).words) == 81
    assert len(BarCoalgebra(LAM, True, 6, window=DegreeWindow(-8, 8)).words) == 7


@pytest.mark.parametrize("alg", [LAM, ASH])
def test_bar_is_a_dg_coalgebra(alg):
    c = BarCoalgebra(alg, True, 3, 3)
    assert check_coalgebra(c, c.basis()) is None
    cx = c.complex()
    assert cx is not None


def test_bar_of_exterior_is_polynomial():
    # Bar(Lambda(u)) has one class [u|...|u] in each length, all of degree 0
    c = BarCoalgebra(LAM, True, 4, 4)
    assert all(c.degree(w) == 0 for w in c.words)
    assert all(not c.d_key(w) for w in c.words)


def test_canonical_tau_and_perturbation():
    c = BarCoalgebra(ASH, True, 4, 4)
    tau = canonical_tau(c)
    assert check_twisting_cochain(tau).ok
    u = ASH.parse_monomial("u")
    bad = TwistingCochain(c, ASH, lambda w: {u: 1} if w == (u, u) else tau(w))
    v = check_twisting_cochain(bad)
    assert not v.ok and v.witness == "[u|u]: 1*th"


@pytest.mark.parametrize("alg", [LAM, ASH])
def test_adjunction_triple(alg):
    c = BarCoalgebra(alg, True, 4, 4)
    tau = canonical_tau(c)
    coms = [DgComodule.trivial(c), rank_two_comodule(c, alg)]
    mods = [DgModule.trivial(alg), DgModule.free(alg, [("g", 0, 0)], 4), rank_two_module(alg)]
    for com in coms:
        assert check_comodule(com) is None
        for mod in mods:
            if mod is None:
                continue
            assert twisted_adjunction(com, mod, tau).ok, (com.name, mod.name)


@pytest.mark.parametrize("alg", [LAM, ASH])
def test_bar_resolution_of_trivial_module(alg):
    _, _, v = bar_resolution(alg, DgModule.trivial(alg), 4, DegreeWindow(-4, 4))
    assert v.status == "pass"


def test_unitality_and_rescaled_unit():
    mod = AInftyModule.from_dg_module(DgModule.trivial(LAM), 3)
    assert strict_unitality(mod).ok and homotopy_unitality(mod).ok
    base = DgModule.trivial(LAM)
    scaled = AInftyModule(LAM, base.module, lambda w, m: base.d.image(m) if not w else {}, 3,
                          unit_rule=lambda w, m: {m: 2} if len(w) == 1 else {})
    assert not strict_unitality(scaled).ok
    assert not homotopy_unitality(scaled).ok


def test_unit_resolution_contractions():
    for mod in (AInftyModule.from_dg_module(DgModule.trivial(LAM), 3), ac3_module(LAM, 3)):
        ur = unit_resolution(mod)
        assert ur.ok
        assert ur.homotopy_ok and all(ur.homotopy_ok.values())


def test_homotopy_inverse_and_zero_map():
    mod = AInftyModule.from_dg_module(DgModule.trivial(LAM), 3)
    ur = unit_resolution(mod)
    tgt = AInftyModule.from_dg_module(ur.target, 3)
    one = LAM.one_key
    f = AInftyMorphism(mod, tgt, lambda w, m: {(one, (w, m)): 1})
    hi = ainfty_homotopy_inverse(f)
    assert hi.ok and verify_homotopy_inverse(f, hi.inverse)
    zero = AInftyMorphism(tgt, mod, lambda w, n: {})
    assert not verify_homotopy_inverse(f, zero)


def test_ac3_is_not_strict():
    mod = ac3_module(LAM, 3)
    u = LAM.parse_monomial("u")
    assert mod.ac((u, u), "m0") == {"m1": 1}
