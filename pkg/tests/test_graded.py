import pytest
from hypothesis import given, strategies as st

from koszulkit.graded import (Complex, DegreeWindow, GradedMap, GradedModule, StructuralError, cohomology,
                              compose, cone, is_quasi_iso)


def interval():
    """0 -> k{a} -> k{b} -> 0 with d a = b, plus a cycle z in degree 0."""
    m = GradedModule([("a", 0), ("b", 1), ("z", 0)])
    return Complex(m, {"a": {"b": 1}})


def test_cohomology_of_interval():
    h = cohomology(interval())
    assert h.nonzero() == {0: 1}
    assert list(h.representatives[0][0]) == ["z"]


def test_square_zero_is_enforced():
    m = GradedModule([("a", 0), ("b", 1), ("c", 2)])
    with pytest.raises(StructuralError):
        Complex(m, {"a": {"b": 1}, "b": {"c": 1}})


def test_degree_must_be_one():
    m = GradedModule([("a", 0), ("b", 0)])
    with pytest.raises(StructuralError):
        Complex(m, {"a": {"b": 1}})


def test_window_operations():
    w = DegreeWindow(-2, 3)
    assert list(w.degrees()) == [-2, -1, 0, 1, 2, 3]
    assert w.shrink(1) == DegreeWindow(-1, 2)
    assert w.intersect(DegreeWindow(1, 9)) == DegreeWindow(1, 3)
    assert w.intersect(DegreeWindow(5, 9)) is None
    assert w.shift(1) == DegreeWindow(-1, 4)


def test_quasi_iso_inclusion_of_cycle():
    big = interval()
    small = Complex(GradedModule([("z", 0)]), {})
    f = GradedMap(small.module, big.module, 0, {"z": {"z": 1}})
    assert is_quasi_iso(f, small, big).ok
    g = GradedMap(small.module, big.module, 0, {})
    assert not is_quasi_iso(g, small, big).ok


def test_cone_of_identity_is_acyclic():
    c = interval()
    ident = GradedMap.identity(c.module)
    assert cohomology(cone(ident, c, c)).nonzero() == {}


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 2)), min_size=1, max_size=6))
def test_shift_moves_cohomology(parts):
    # a direct sum of acyclic pairs and cycles, shifted by one
    basis, d = [], {}
    for i, (deg, kind) in enumerate(parts):
        if kind == 0:
            basis.append((("c", i), deg))
        else:
            basis += [(("s", i), deg), (("t", i), deg + 1)]
            d[("s", i)] = {("t", i): kind}
    c = Complex(GradedModule(basis), d)
    h, hs = cohomology(c).nonzero(), cohomology(c.shift(1)).nonzero()
    assert hs == {k - 1: v for k, v in h.items()}


def test_compose_and_subtract():
    m = GradedModule([("a", 0), ("b", 0)])
    swap = GradedMap(m, m, 0, {"a": {"b": 1}, "b": {"a": 1}})
    assert compose(swap, swap) == GradedMap.identity(m)
    assert (compose(swap, swap) - GradedMap.identity(m)).is_zero()
