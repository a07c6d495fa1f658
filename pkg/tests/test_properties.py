from fractions import Fraction

from hypothesis import given, settings, strategies as st

from koszulkit.bar import BarCoalgebra, canonical_tau, check_coalgebra, check_twisting_cochain
from koszulkit.graded import DegreeWindow
from koszulkit.koszul import KoszulScenario, build_K
from koszulkit.pbw import Generator, sym_algebra
from koszulkit.scenario import ScenarioError, parse


@st.composite
def small_algebras(draw):
    # free graded-commutative algebra on 1-2 generators of degree 1 or 2,
    # optionally with d(odd) = even generator of the next degree
    n = draw(st.integers(1, 2))
    degs = [draw(st.integers(1, 2)) for _ in range(n)]
    gens = [Generator(f"g{i}", d) for i, d in enumerate(degs)]
    diff = {}
    if n == 2 and degs == [1, 2] and draw(st.booleans()):
        diff["g0"] = {"g1": draw(st.integers(1, 3))}
    return sym_algebra(gens, diff)


@settings(max_examples=15)
@given(small_algebras())
def test_bar_coalgebra_and_canonical_tau(alg):
    c = BarCoalgebra(alg, True, 3, 3)
    assert check_coalgebra(c, c.basis()) is None
    for w in c.words:
        dd = {}
        for v, k in c.d_key(w).items():
            for u, k2 in c.d_key(v).items():
                dd[u] = dd.get(u, 0) + k * k2
        assert not any(dd.values())
    assert check_twisting_cochain(canonical_tau(c)).ok


@settings(max_examples=15)
@given(small_algebras(), st.integers(1, 3))
def test_word_degree_is_shifted_sum(alg, cap):
    c = BarCoalgebra(alg, True, cap, cap)
    for w in c.words:
        assert c.degree(w) == sum(alg.degree(a) - 1 for a in w)


@settings(max_examples=8)
@given(st.sampled_from([-2, 0, 2]), st.integers(-3, 3).filter(bool))
def test_twisted_koszul_with_shifted_m(deg, scale):
    # M in even degree deg, N in degree -deg, any nonzero pairing: H(K) is Sym(N[-1]) on one generator
    s = KoszulScenario([deg], [-deg], [[scale]])
    kc = build_K(s, DegreeWindow(-4, 4))
    if kc.lossless:
        assert kc.h_ok
        assert {d: v for d, v in kc.dims.items() if v} == {0: 1, 1 - deg: 1}


@given(st.fractions(max_denominator=50))
def test_scalars_round_trip_as_strings(q):
    sc = parse({"kind": "koszul-twisted", "M": [0], "N": [0], "phi": [[str(q)]]})
    assert sc.koszul.phi[0][0] == Fraction(q)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_float_scalars_rejected(x):
    try:
        parse({"kind": "koszul-twisted", "M": [0], "N": [0], "phi": [[x]]})
    except ScenarioError as exc:
        assert exc.where == "phi[0][0]"
    else:
        raise AssertionError("float accepted")
