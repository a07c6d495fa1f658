import pytest
from hypothesis import given, strategies as st

from koszulkit.graded import Complex, GradedModule, cohomology
from koszulkit.modules import DgModule, check_module, hom_complex, is_free_on, restriction_adjunction
from koszulkit.pbw import exterior_algebra
from koszulkit.suites import rank_two_module

LAM = exterior_algebra(["u"])


def test_trivial_and_free_modules_are_modules():
    keys = LAM.basis()
    assert check_module(DgModule.trivial(LAM), keys) is None
    free = DgModule.free(LAM, [("g", 0, 0)], 3)
    assert check_module(free, keys) is None
    assert is_free_on(free, [(LAM.one_key, "g")])


def test_rank_two_module():
    mod = rank_two_module(LAM)
    assert mod is not None
    assert check_module(mod, LAM.basis()) is None
    # n0 -> n1 under u is Lambda(u) itself; with u acting by zero it is not free
    assert is_free_on(mod, ["n0"])
    split = DgModule.from_generators(LAM, mod.module, {}, {"u": {}})
    assert not is_free_on(split, ["n0"])


def test_broken_action_is_caught():
    # u^2 = 0 but u swaps the two basis vectors
    gm = GradedModule([("a", 0, 0), ("b", 1, 1), ("c", 2, 2)])
    bad = DgModule.from_generators(LAM, gm, {}, {"u": {"a": {"b": 1}, "b": {"c": 1}}})
    assert check_module(bad, LAM.basis()) is not None


def test_hom_from_free_is_the_target():
    # Hom_A(A, k) = k
    free = DgModule.free(LAM, [("g", 0, 0)], 3)
    h = hom_complex(free, DgModule.trivial(LAM))
    assert {n: d for n, d in h.dims().items() if d} == {0: 1}


def test_hom_k_k_over_exterior():
    # the strict Hom (no resolution): only the identity
    h = hom_complex(DgModule.trivial(LAM), DgModule.trivial(LAM))
    assert {n: d for n, d in h.dims().items() if d} == {0: 1}


@given(st.lists(st.integers(-2, 2), min_size=1, max_size=3))
def test_restriction_adjunction(degs):
    target = Complex(GradedModule([(f"x{i}", d) for i, d in enumerate(degs)]), {})
    for mod in (DgModule.trivial(LAM), rank_two_module(LAM)):
        assert restriction_adjunction(mod, target, LAM.basis()).ok


def test_free_module_cohomology_with_differential():
    # A (x) g with d g = 0 over Lambda(u) with d = 0: cohomology is the module itself
    free = DgModule.free(LAM, [("g", 0, 0)], 3)
    assert cohomology(free.complex).nonzero() == {0: 1, 1: 1}
