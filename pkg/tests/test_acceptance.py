"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""

import json
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction
from math import comb
from pathlib import Path

import pytest

from koszulkit.bar import (AInftyModule, BarCoalgebra, DgComodule, bar_resolution, canonical_tau,
                           check_twisting_cochain, twisted_adjunction, unit_resolution)
from koszulkit.equivariant import dual_algebra_A, heisenberg_identity, koszul_scenario
from koszulkit.graded import DegreeWindow
from koszulkit.koszul import build_K, end_comparison, heisenberg_embeddings
from koszulkit.linalg import axpy
from koszulkit.modules import DgModule
from koszulkit.pbw import Generator, exterior_algebra, sym_algebra
from koszulkit.scenario import load, shipped
from koszulkit.suites import (BarSuite, ac3_module, phi_zero_regression, rank_two_comodule, rank_two_module,
                              rho_zero_regression)

LAM = exterior_algebra(["u"])
ASH = sym_algebra([Generator("u", 1), Generator("th", 2)], {"u": {"th": 1}}, name="E1 A!")
ALGEBRAS = [("Lambda(u)", LAM), ("E1 A!", ASH)]
SCENARIOS = Path(shipped("e1.json")).parent


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(n, title):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({time.perf_counter() - start:.1f}s)")
    return run


def nonzero(d):
    return {k: v for k, v in d.items() if v}


def test_criterion_1_twisting_cochain(criterion):
    with criterion(1, "canonical tau on Bar+(A), length <= 6, window [-8,8]"):
        start = time.perf_counter()
        for _, alg in ALGEBRAS:
            c = BarCoalgebra(alg, True, 6, window=DegreeWindow(-8, 8))
            assert max(len(w) for w in c.words) == 6
            v = check_twisting_cochain(canonical_tau(c))
            assert v.ok, v.witness
            assert v.checked == len(c.words)
        assert time.perf_counter() - start < 10


def test_criterion_2_adjunction_triple(criterion):
    with criterion(2, "three Hom complexes isomorphic"):
        start = time.perf_counter()
        pairs = 0
        for _, alg in ALGEBRAS:
            c = BarCoalgebra(alg, True, 4, 4)
            tau = canonical_tau(c)
            coms = [DgComodule.trivial(c), rank_two_comodule(c, alg)]
            mods = [DgModule.trivial(alg), DgModule.free(alg, [("g", 0, 0)], 4), rank_two_module(alg)]
            for com in coms:
                for mod in mods:
                    assert len(com.module) <= 2
                    v = twisted_adjunction(com, mod, tau)
                    assert v.ok, [i.witness for i in v.isos]
                    assert all(i.ok for i in v.isos) and len(v.isos) == 2
                    pairs += 1
        assert pairs >= 5
        assert time.perf_counter() - start < 30


def test_criterion_3_bar_resolution(criterion):
    with criterion(3, "counit A (x)t Bar(A) (x)t M -> M quasi-iso on [-6,6]"):
        window = DegreeWindow(-6, 6)
        pairs = 0
        for _, alg in ALGEBRAS:
            for mod in (DgModule.trivial(alg), DgModule.free(alg, [("g", 0, 0)], 4), rank_two_module(alg)):
                _, _, v = bar_resolution(alg, mod, 4, window)
                assert v.status == "pass", v.detail
                assert v.window == window
                q = v.quasi_iso
                for d in window.degrees():
                    assert q.induced_ranks[d] == q.source_dims[d] == q.target_dims[d]
                pairs += 1
        assert pairs >= 3


def test_criterion_4_unit_resolution(criterion):
    with criterion(4, "id = ds + sd on every gr^i"):
        cap = 4
        mods = []
        for _, alg in ALGEBRAS:
            mods += [AInftyModule.from_dg_module(DgModule.trivial(alg), cap),
                     AInftyModule.from_dg_module(rank_two_module(alg), cap), ac3_module(alg, cap)]
        assert any(m.name.startswith("ac3") and m.ac((m.algebra.parse_monomial("u"),) * 2, "m0") for m in mods)
        for mod in mods:
            ur = unit_resolution(mod)
            assert set(range(1, cap + 1)) <= set(ur.homotopy_ok), mod.name
            assert all(ur.homotopy_ok.values()), (mod.name, ur.homotopy_ok)
            assert ur.quasi_iso.ok and ur.witness is None


def test_criterion_5_twisted_koszul(criterion):
    with criterion(5, "H(K) = Sym(N[-1]), augmentations, two constructions of K"):
        for name in ("e1.json", "rank2.json"):
            s = load(SCENARIOS / name).koszul
            kc = build_K(s, DegreeWindow(-6, 6))
            assert kc.lossless
            # N sits in degree 0, so Sym(N[-1]) is exterior on rank_n classes of degree 1
            expected = {k: comb(s.rank_n, k) for k in range(s.rank_n + 1)}
            assert nonzero(kc.dims) == expected
            assert kc.h_ok
            assert len(kc.augmentations) == 2 and all(v.ok for v in kc.augmentations.values())
            assert kc.twist_match.ok and kc.twist_match.tau_ok and kc.twist_match.size > 0


def koszul_corpus():
    out = []
    for p in sorted(SCENARIOS.glob("*.json")):
        sc = load(p)
        if sc.kind == "koszul-twisted":
            out.append((sc.name, sc.koszul, sc.window))
        elif sc.kind == "equivariant":
            out.append((sc.name, koszul_scenario(sc.action), sc.window))
    return out


def test_criterion_6_heisenberg_embeddings(criterion):
    with criterion(6, "A and A! graded-commute in End(K) for every corpus scenario"):
        corpus = koszul_corpus()
        assert len(corpus) >= 5
        for name, s, window in corpus:
            ev = heisenberg_embeddings(build_K(s, window))
            assert all(v is True for v in ev.relations.values()), name
            assert all(v is True for v in ev.differentials.values()), name
            assert ev.commutation_generators and ev.operator_ok, (name, ev.witness)
            assert ev.ok, name


def test_criterion_7_end_comparison(criterion):
    with criterion(7, "A -> End_{A!}(K) on [-2,2] for E1"):
        start = time.perf_counter()
        kc = build_K(load(SCENARIOS / "e1.json").koszul, DegreeWindow(-6, 6))
        ec = end_comparison(kc, DegreeWindow(-2, 2))
        assert ec.algebra_map_ok and ec.chain_map_ok and ec.linear_ok
        assert set(nonzero(ec.a_dims)) <= set(ec.round_trip)
        for n, mat in ec.round_trip.items():
            mat = [[Fraction(x) for x in row] for row in mat]
            assert mat == [[1 if i == j else 0 for j in range(len(mat))] for i in range(len(mat))], n
        assert ec.round_trip_ok
        assert ec.quasi_iso.ok and ec.quasi_iso.valid == DegreeWindow(-2, 2)
        assert ec.ok
        assert time.perf_counter() - start < 60


def test_criterion_8_equivariant_heisenberg(criterion):
    with criterion(8, "dual algebra = Heisenberg algebra; e.dx + dx.e = x"):
        for name in ("e4.json", "diagonal2.json"):
            s = load(SCENARIOS / name).action
            v = heisenberg_identity(s)
            assert v.table_ok and v.pairs_ok and v.ok, v.witness
        s = load(SCENARIOS / "e4.json").action
        assert heisenberg_identity(s).pairs[("e", "dx")] == ("1*x", "1*x")
        # second route: multiply the basis maps <psi|1> and <1|dx> directly
        A = dual_algebra_A(s)
        by_name = {A.key_name(k): k for k in A.basis()}
        e, dx, x = by_name["<psi|1>"], by_name["<1|dx>"], by_name["<1|x>"]
        total = A.mul({e: 1}, {dx: 1})
        axpy(total, 1, A.mul({dx: 1}, {e: 1}))
        assert total == {x: 1}


def test_criterion_9_degenerations(criterion):
    with criterion(9, "phi = 0 and rho = 0 reduce to the untwisted constructions"):
        for name in ("e1.json", "rank2.json", "empty.json"):
            sc = load(SCENARIOS / name)
            w, _ = phi_zero_regression(sc.koszul, sc.window)
            assert w is None, (name, w)
        for name in ("e4.json", "diagonal2.json"):
            w, _ = rho_zero_regression(load(SCENARIOS / name).action)
            assert w is None, (name, w)
        suite = BarSuite(load(SCENARIOS / "bar_suite.json"))
        assert suite.degeneration_tau_zero()[0] == "pass"


def test_criterion_10_cli_determinism(criterion, tmp_path):
    with criterion(10, "byte-identical reports, exit 0"):
        for name in ("e1.json", "e4.json"):
            outs = []
            for run in range(2):
                out = tmp_path / f"{name}.{run}"
                proc = subprocess.run([sys.executable, "-m", "koszulkit.cli", "verify", str(SCENARIOS / name),
                                       "--out", str(out)], capture_output=True, text=True)
                assert proc.returncode == 0, proc.stderr
                outs.append(out.read_bytes())
            assert outs[0] == outs[1]
            assert json.loads(outs[0])["summary"]["fail"] == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
