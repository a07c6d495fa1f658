"""Verification suites run by the CLI, one per scenario kind.

Each check has a stable id and an anchor: the identity it verifies, written
as a formula.  A check returns ``pass``, ``fail`` (with a witness) or
``inconclusive`` (a precondition of the exact computation does not hold).
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from itertools import product

from .algebra import koszul
from .bar import (AInftyModule, AInftyMorphism, BarCoalgebra, DgComodule, TwistingCochain, bar_resolution,
                  ainfty_homotopy_inverse, canonical_tau, check_coalgebra, check_comodule,
                  check_twisting_cochain, homotopy_unitality, strict_unitality, twist_comodule, twist_hom,
                  twist_module, twisted_adjunction, unit_resolution, verify_homotopy_inverse)
from .equivariant import (a_shriek, build_C, coaction, dual_algebra_A, heisenberg_identity,
                          koszul_scenario, omega_algebra)
from .graded import Complex, DegreeWindow, GradedModule, StructuralError, cohomology
from .koszul import (build_K, classical_koszul, end_comparison, fock_is_dg, heis_is_dg, heisenberg_A,
                     heisenberg_embeddings, koszul_algebra, koszul_dual, twisted_L)
from .linalg import ONE, axpy
from .modules import DgModule, check_module, hom_differential
from .pbw import sym_algebra
from .scenario import Scenario

log = logging.getLogger("koszulkit")


@dataclass(frozen=True)
class CheckSpec:
    id: str
    anchor: str


@dataclass
class CheckResult:
    id: str
    anchor: str
    verdict: str                      # "pass", "fail" or "inconclusive"
    window: list | None
    witness: str | None
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def record(self) -> dict:
        """The deterministic part (no timing)."""
        return {"id": self.id, "anchor": self.anchor, "verdict": self.verdict, "window": self.window,
                "witness": self.witness, "details": self.details}


class Inconclusive(Exception):
    pass


REGISTRY: dict[str, tuple[CheckSpec, ...]] = {
    "bar-suite": (
        CheckSpec("bar-coalgebra", "(Delta (x) 1) Delta = (1 (x) Delta) Delta, d coderivation, d^2 = 0 on Bar+(A)"),
        CheckSpec("twisting-cochain-condition", "d_A tau + tau d_C + m (tau (x) tau) Delta = 0"),
        CheckSpec("adjunction-triple", "Hom_C(M, C (x)^t N) = Hom^t(M, N) = Hom_A(A (x)^t M, N)"),
        CheckSpec("bar-resolution", "A (x)^t Bar+(A) (x)^t M -> M is a quasi-isomorphism"),
        CheckSpec("unitality", "ac(1, m) = m and higher unit actions vanish; H(1) = id"),
        CheckSpec("unit-resolution", "id = d s + s d on every gr^i of A (x)^t Bar+(M)"),
        CheckSpec("homotopy-inverse", "G F ~ id and F G ~ id for the unit map F"),
        CheckSpec("degeneration-tau-zero", "tau = 0 gives d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy"),
    ),
    "koszul-twisted": (
        CheckSpec("twisted-L", "H(L) = N[-1]"),
        CheckSpec("koszul-cohomology", "H(Sym L) = Sym(N[-1])"),
        CheckSpec("augmentations", "K -> Sym(N[-1]) and Sym(N[-1]) -> K are quasi-isomorphisms"),
        CheckSpec("semifree", "K is filtered by free A!-modules"),
        CheckSpec("twisted-construction-match", "Sym L = A! (x)^tau A* basiswise"),
        CheckSpec("heisenberg-embeddings", "A -> Heis(L + L*) <- A! are injective dg-algebra maps"),
        CheckSpec("centralizer-commutation", "[iota(a), iota(b)] = 0 on K for a in A, b in A!"),
        CheckSpec("fock-module", "[d, h] = dh on Sym L for h in Heis(L + L*)"),
        CheckSpec("end-comparison", "A -> Hom_A!(K, K) is a quasi-isomorphism of dg-algebras, R L = id"),
        CheckSpec("degeneration-phi-zero", "phi = 0 gives Sym tables, d_A! = 0, untwisted K"),
    ),
    "koszul-classical": (
        CheckSpec("koszul-cohomology", "H(Sym(M (+) M[1]), d xi = x) = k"),
        CheckSpec("actions-commute", "[x, d/dxi] = 0 and both commute with d on K"),
        CheckSpec("heisenberg-relations", "[l*, l'] = <l*, l'> on Sym(M (+) M[1])"),
    ),
    "equivariant": (
        CheckSpec("omega-algebra", "Omega_X = Sym(V*, V*[1]) truncated, d^2 = 0"),
        CheckSpec("coaction", "ca: Omega_X -> C is a counital coassociative algebra map"),
        CheckSpec("coalgebra-C", "C is a coalgebra and an Omega_X-bimodule"),
        CheckSpec("left-right-difference", "r c - (-1)^{|r||c|} c r = phi(r) c"),
        CheckSpec("heisenberg-identity", "a r - (-1)^{|a||r|} r a = <phi(r), a>"),
        CheckSpec("a-shriek-differential", "d u_a = sum_i phi_ia th_i, d^2 = 0"),
        CheckSpec("koszul-comparison", "H(K) = Sym(N[-1]) and A, A! commute on K for the moment map"),
        CheckSpec("degeneration-rho-zero", "rho = 0 gives trivial ca, Sym dual algebra, d_A! = 0"),
    ),
}


def list_checks(kind: str) -> tuple[CheckSpec, ...]:
    return REGISTRY[kind]


def _dims(d: dict) -> list:
    return [[k, v] for k, v in sorted(d.items()) if v]


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def run_suite(sc: Scenario) -> list[CheckResult]:
    runner = _RUNNERS[sc.kind](sc)
    out = []
    for spec in REGISTRY[sc.kind]:
        log.info("running %s", spec.id)
        t0 = time.perf_counter()
        fn = getattr(runner, spec.id.replace("-", "_"))
        try:
            verdict, window, witness, details = fn()
        except Inconclusive as exc:
            verdict, window, witness, details = "inconclusive", None, str(exc), {}
        except StructuralError as exc:
            verdict, window, witness, details = "fail", None, str(exc), {}
        res = CheckResult(spec.id, spec.anchor, verdict, window, witness if verdict != "pass" else None,
                          details, time.perf_counter() - t0)
        log.info("%s: %s (%.2fs)", spec.id, verdict, res.seconds)
        out.append(res)
    return out


# -- table comparison -----------------------------------------------------------

def small_monomials(alg, length: int = 2) -> list:
    """Monomials of total exponent at most ``length`` (nil bounds respected)."""
    out = []
    for e in product(range(length + 1), repeat=alg.n):
        if sum(e) > length or any(e[i] > 1 for i in range(alg.n) if alg.gens[i].odd):
            continue
        if any(sum(e[i] for i in idx) > cap for idx, cap in alg.nil):
            continue
        out.append(tuple(e))
    return out


def table_difference(a, b, keys) -> str | None:
    """First product or differential on ``keys`` where ``a`` and ``b`` differ."""
    for k in keys:
        if a.d_key(k) != b.d_key(k):
            return f"d({a.key_name(k)})"
        for k2 in keys:
            if a.mul_keys(k, k2) != b.mul_keys(k, k2):
                return f"{a.key_name(k)} * {a.key_name(k2)}"
    return None


# -- bar-suite --------------------------------------------------------------------

def rank_two_module(alg) -> DgModule | None:
    """``n0 -> n1`` under an odd generator, every other generator acting by 0."""
    for i, g in enumerate(alg.gens):
        if not g.odd:
            continue
        gm = GradedModule([("n0", 0, 0), ("n1", g.degree, g.weight)])
        table = {h.name: {} for h in alg.gens}
        table[g.name] = {"n0": {"n1": 1}}
        mod = DgModule.from_generators(alg, gm, {}, table, name=f"k{{n0,n1}}/{g.name}")
        if check_module(mod, alg.basis(None, 2 * max(1, g.weight))) is None:
            return mod
    return None


def rank_two_comodule(coalg, alg) -> DgComodule | None:
    """``m1 -> [s g] (x) m0`` for a cycle generator ``g``."""
    for i, g in enumerate(alg.gens):
        key = alg.generator_keys()[i]
        if alg.d_key(key):
            continue
        gm = GradedModule([("m0", 0, 0), ("m1", g.degree - 1, g.weight)])
        com = DgComodule.from_table(coalg, gm, {}, {"m1": {((key,), "m0"): 1}}, name=f"k[s{g.name}]")
        if check_comodule(com) is None:
            return com
    return None


def ac3_module(alg, wcap: int) -> AInftyModule | None:
    """``ac([s g|s g], m0) = m1`` for an odd generator ``g``; kept only if the
    A-infinity relations hold."""
    for i, g in enumerate(alg.gens):
        if not g.odd:
            continue
        key = alg.generator_keys()[i]
        gm = GradedModule([("m0", 0, 0), ("m1", 2 * g.degree - 1, 2 * g.weight)])

        def ac(word, m, key=key):
            return {"m1": 1} if word == (key, key) and m == "m0" else {}

        mod = AInftyModule(alg, gm, ac, wcap, name=f"ac3[{g.name}]")
        try:
            mod.bar_module()
        except StructuralError:
            continue
        return mod
    return None


class BarSuite:
    def __init__(self, sc: Scenario):
        self.sc = sc
        self.rc = int(sc.data.get("resolution_cap", 4))
        self.algs = sc.algebras
        self._ctx: dict = {}

    def ctx(self, label, alg):
        hit = self._ctx.get(label)
        if hit is None:
            rc = self.rc
            coalg = BarCoalgebra(alg, True, rc, rc)
            mods = [DgModule.trivial(alg), DgModule.free(alg, [("g", 0, 0)], rc)]
            r2 = rank_two_module(alg)
            if r2 is not None:
                mods.append(r2)
            coms = [DgComodule.trivial(coalg)]
            c2 = rank_two_comodule(coalg, alg)
            if c2 is not None:
                coms.append(c2)
            ainf = [AInftyModule.from_dg_module(m, rc) for m in mods if m is not mods[1]]
            a3 = ac3_module(alg, rc)
            if a3 is not None:
                ainf.append(a3)
            hit = self._ctx[label] = {"coalg": coalg, "tau": canonical_tau(coalg), "modules": mods,
                                      "comodules": coms, "ainfty": ainf}
        return hit

    def bar_coalgebra(self):
        details, witness = {}, None
        for label, alg in self.algs:
            c = BarCoalgebra(alg, True, self.sc.cap, window=self.sc.window)
            keys = c.basis()
            w = check_coalgebra(c, keys)
            if w is None:
                for k in keys:
                    dd = {}
                    for k2, v in c.d_key(k).items():
                        axpy(dd, v, c.d_key(k2))
                    if dd:
                        w = f"d^2 != 0 on {c.key_name(k)}"
                        break
            details[label] = {"words": len(keys), "length_cap": self.sc.cap}
            if w is not None:
                witness = witness or f"{label}: {w}"
        return _verdict(witness is None), self.sc.window.as_list(), witness, details

    def twisting_cochain_condition(self):
        details, witness = {}, None
        for label, alg in self.algs:
            c = BarCoalgebra(alg, True, self.sc.cap, window=self.sc.window)
            v = check_twisting_cochain(canonical_tau(c))
            details[label] = {"words": v.checked}
            if not v.ok:
                witness = witness or f"{label}: {v.witness}"
        return _verdict(witness is None), self.sc.window.as_list(), witness, details

    def adjunction_triple(self):
        pairs, witness = [], None
        for label, alg in self.algs:
            cx = self.ctx(label, alg)
            for com in cx["comodules"]:
                for mod in cx["modules"]:
                    v = twisted_adjunction(com, mod, cx["tau"])
                    pairs.append([label, com.name, mod.name, v.ok])
                    if not v.ok:
                        witness = witness or f"{label}: ({com.name}, {mod.name})"
        return _verdict(witness is None), None, witness, {"pairs": pairs}

    def bar_resolution(self):
        rows, status, witness, windows = [], "pass", None, []
        for label, alg in self.algs:
            for mod in self.ctx(label, alg)["modules"]:
                _, total, v = bar_resolution(alg, mod, self.rc, self.sc.window)
                rows.append([label, mod.name, v.status, v.window.as_list() if v.window else None])
                if v.window:
                    windows.append(v.window)
                if v.status == "fail":
                    status = "fail"
                    witness = witness or f"{label}, {mod.name}: {v.detail}"
                elif v.status == "inconclusive" and status == "pass":
                    status = "inconclusive"
                    witness = witness or f"{label}, {mod.name}: {v.detail}"
        win = None
        if windows:
            win = [max(w.lo for w in windows), min(w.hi for w in windows)]
        return status, win, witness, {"pairs": rows}

    def unitality(self):
        rows, witness = [], None
        for label, alg in self.algs:
            for mod in self.ctx(label, alg)["ainfty"]:
                s, h = strict_unitality(mod), homotopy_unitality(mod)
                rows.append([label, mod.name, s.ok, h.ok])
                if not (s.ok and h.ok):
                    witness = witness or f"{label}, {mod.name}: {s.witness or h.witness}"
        return _verdict(witness is None), None, witness, {"modules": rows}

    def unit_resolution(self):
        rows, witness = [], None
        for label, alg in self.algs:
            for mod in self.ctx(label, alg)["ainfty"]:
                ur = unit_resolution(mod, self.sc.window)
                pieces = sorted(ur.homotopy_ok)
                rows.append([label, mod.name, ur.ok, pieces])
                if not ur.ok:
                    bad = [i for i in pieces if not ur.homotopy_ok[i]]
                    witness = witness or f"{label}, {mod.name}: {ur.witness or f'gr pieces {bad}'}"
        return _verdict(witness is None), None, witness, {"modules": rows}

    def homotopy_inverse(self):
        rows, witness = [], None
        for label, alg in self.algs:
            for mod in self.ctx(label, alg)["ainfty"]:
                ur = unit_resolution(mod, self.sc.window)
                tgt = AInftyModule.from_dg_module(ur.target, mod.wcap)
                one = alg.one_key
                f = AInftyMorphism(mod, tgt, lambda w, m, one=one: {(one, (w, m)): 1})
                hi = ainfty_homotopy_inverse(f)
                ok = hi.ok and verify_homotopy_inverse(f, hi.inverse)
                rows.append([label, mod.name, ok])
                if not ok:
                    witness = witness or f"{label}, {mod.name}: {hi.detail or 'inverse does not verify'}"
        return _verdict(witness is None), None, witness, {"modules": rows}

    def degeneration_tau_zero(self):
        checked, witness = 0, None
        for label, alg in self.algs:
            cx = self.ctx(label, alg)
            coalg = cx["coalg"]
            zero = TwistingCochain(coalg, alg, lambda c: {})
            for com in cx["comodules"]:
                tw = twist_module(alg, zero, com, self.rc)
                for (a, n) in tw.module.keys:
                    exp = {}
                    for a2, c in alg.d_key(a).items():
                        axpy(exp, c, {(a2, n): ONE})
                    s = koszul(alg.degree(a), 1)
                    for n2, c in com.d.image(n).items():
                        axpy(exp, s * c, {(a, n2): ONE})
                    checked += 1
                    if tw.d.image((a, n)) != exp:
                        witness = witness or f"{label}: A (x) {com.name} at {tw.module.names[(a, n)]}"
            for mod in cx["modules"]:
                tw = twist_comodule(coalg, zero, mod, self.rc)
                for (c, n) in tw.module.keys:
                    exp = {}
                    for c2, v in coalg.d_key(c).items():
                        axpy(exp, v, {(c2, n): ONE})
                    s = koszul(coalg.degree(c), 1)
                    for n2, v in mod.d.image(n).items():
                        axpy(exp, s * v, {(c, n2): ONE})
                    exp = {k: v for k, v in exp.items() if k in tw.d.source.index}
                    checked += 1
                    if tw.d.image((c, n)) != exp:
                        witness = witness or f"{label}: C (x) {mod.name} at {tw.module.names[(c, n)]}"
                for com in cx["comodules"]:
                    h = twist_hom(com, mod, zero)
                    for n, maps in h.basis_maps.items():
                        for f in maps:
                            checked += 1
                            if h.apply_d(f, n) != hom_differential(f, n, com.d, mod.d):
                                witness = witness or f"{label}: Hom({com.name}, {mod.name}) in degree {n}"
        return _verdict(witness is None), None, witness, {"elements": checked}


# -- koszul-twisted ----------------------------------------------------------------

def phi_zero_regression(s, window: DegreeWindow) -> tuple[str | None, dict]:
    """Twisted constructions at ``phi = 0`` against independently built
    untwisted ones."""
    s0 = s.untwisted()
    A0 = heisenberg_A(s0)
    sym_A = sym_algebra(A0.gens, None, s0.nil(), name="Sym")
    w = table_difference(A0, sym_A, small_monomials(A0))
    if w:
        return f"A: {w}", {}
    Ash0 = koszul_dual(s0)
    sym_sh = sym_algebra(Ash0.gens, None, s0.nil())
    w = table_difference(Ash0, sym_sh, small_monomials(Ash0))
    if w:
        return f"A!: {w}", {}
    K0 = koszul_algebra(s0)
    nb = len(s0.base)
    # untwisted K: d a_i = -c_i, d b_j = 0
    diff = {}
    for i in range(s0.rank_m):
        diff[K0.gens[nb + i].name] = {K0.gens[nb + s0.rank_m + s0.rank_n + i].name: -1}
    sym_K = sym_algebra(K0.gens, diff, s0.nil())
    w = table_difference(K0, sym_K, small_monomials(K0))
    if w:
        return f"K: {w}", {}
    kc = build_K(s0, window)
    if not kc.ok:
        return "K at phi = 0 does not resolve Sym(N[-1])", {}
    return None, {"A": "Sym", "A!": "Sym, d = 0", "K": "untwisted", "h_dims": _dims(kc.dims)}


class TwistedSuite:
    def __init__(self, sc: Scenario):
        self.sc = sc
        self.s = sc.koszul
        self._kc = None

    @property
    def kc(self):
        if self._kc is None:
            self._kc = build_K(self.s, self.sc.window)
        return self._kc

    def twisted_L(self):
        v = twisted_L(self.s)
        w = None if v.ok else f"H(L) dims {_dims(v.dims)} != {_dims(v.expected)}"
        return _verdict(v.ok), None, w, {"dims": _dims(v.dims), "expected": _dims(v.expected)}

    def koszul_cohomology(self):
        kc = self.kc
        details = {"dims": _dims(kc.dims), "expected": _dims(kc.expected), "weight_cap": kc.wcap,
                   "lossless": kc.lossless}
        if not kc.lossless:
            raise Inconclusive(f"weight cap {kc.wcap} does not capture the window")
        w = None if kc.h_ok else f"dims {_dims(kc.dims)} != {_dims(kc.expected)}"
        return _verdict(kc.h_ok), kc.window.as_list(), w, details

    def augmentations(self):
        kc = self.kc
        details, witness, valid = {}, None, None
        for name, v in sorted(kc.augmentations.items()):
            details[name] = v.ok
            if not v.ok:
                witness = witness or f"{name}: degrees {v.failing_degrees()}"
            if v.valid is not None:
                valid = v.valid.as_list()
        return _verdict(witness is None), valid, witness, details

    def semifree(self):
        c = self.kc.semifree
        return _verdict(c.ok), None, c.witness, {"levels": _dims(c.levels)}

    def twisted_construction_match(self):
        m = self.kc.twist_match
        w = m.witness or (None if m.tau_ok else "tau fails the twisting cochain condition")
        return _verdict(m.ok), None, w, {"basis_size": m.size, "tau_ok": m.tau_ok}

    def _embeddings(self):
        if not hasattr(self, "_ev"):
            try:
                self._ev = heisenberg_embeddings(self.kc)
            except StructuralError as exc:
                raise Inconclusive(str(exc)) from None
        return self._ev

    def heisenberg_embeddings(self):
        ev = self._embeddings()
        ok = (all(v is True for v in ev.relations.values()) and all(v is True for v in ev.differentials.values())
              and all(ev.injective.values()) and ev.heis_dg and ev.commutation_generators)
        details = {"relations": {k: v is True for k, v in sorted(ev.relations.items())},
                   "differentials": {k: v is True for k, v in sorted(ev.differentials.items())},
                   "injective": dict(sorted(ev.injective.items())), "heis_dg": ev.heis_dg}
        w = None
        if not ok:
            bad = [v for v in list(ev.relations.values()) + list(ev.differentials.values()) if v is not True]
            w = bad[0] if bad else (ev.witness or "generator images do not graded-commute")
        return _verdict(ok), self.sc.window.as_list(), w, details

    def centralizer_commutation(self):
        ev = self._embeddings()
        ok = ev.commutation_generators and ev.operator_ok
        return _verdict(ok), self.sc.window.as_list(), ev.witness, {"operator_pairs": ev.operator_pairs}

    def fock_module(self):
        w = heis_is_dg(self.kc.heis) or fock_is_dg(self.kc)
        return _verdict(w is None), None, w, {"generators": self.kc.heis.n}

    def end_comparison(self):
        win = self.sc.end_window
        try:
            ec = end_comparison(self.kc, win)
        except StructuralError as exc:
            raise Inconclusive(str(exc)) from None
        details = {"algebra_map": ec.algebra_map_ok, "chain_map": ec.chain_map_ok, "linear": ec.linear_ok,
                   "round_trip": {str(n): m for n, m in sorted(ec.round_trip.items())},
                   "end_dims": _dims(ec.end_dims), "a_dims": _dims(ec.a_dims)}
        w = ec.witness
        if ec.ok is False and w is None:
            w = f"quasi-isomorphism fails in degrees {ec.quasi_iso.failing_degrees()}"
        return _verdict(ec.ok), win.as_list(), w, details

    def degeneration_phi_zero(self):
        w, details = phi_zero_regression(self.s, self.sc.window)
        return _verdict(w is None), self.sc.window.as_list(), w, details


class ClassicalSuite:
    def __init__(self, sc: Scenario):
        self.sc = sc
        self._ck = None

    @property
    def ck(self):
        if self._ck is None:
            self._ck = classical_koszul(self.sc.m_degrees, self.sc.cap, self.sc.window)
        return self._ck

    def koszul_cohomology(self):
        ck = self.ck
        ok = ck.dims == ck.expected
        w = None if ok else f"dims {_dims(ck.dims)} != {_dims(ck.expected)}"
        return _verdict(ok), self.sc.window.as_list(), w, {"dims": _dims(ck.dims), "weight_cap": ck.wcap}

    def actions_commute(self):
        return _verdict(self.ck.actions_ok), None, self.ck.witness, {}

    def heisenberg_relations(self):
        return _verdict(self.ck.heisenberg_ok), None, self.ck.witness, {}


# -- equivariant --------------------------------------------------------------------

def rho_zero_regression(s) -> tuple[str | None, dict]:
    s0 = s.trivial()
    cc, cv = coaction(s0)
    if not cv.ok:
        return f"coaction: {cv.witness}", {}
    R = cc.R
    for rk in R.basis():
        if cc.coact_key(rk) != {cc.join((0,) * cc.ng, rk): ONE}:
            return f"ca({R.key_name(rk)}) is not 1 (x) r", {}
    _, c = build_C(s0)
    for (r, ck), v in sorted(c.difference.items(), key=repr):
        if v:
            return f"left and right structures differ on {r}", {}
    hv = heisenberg_identity(s0)
    if not hv.table_ok:
        return f"dual algebra: {hv.witness}", {}
    heis = heisenberg_A(koszul_scenario(s0))
    nil = [(tuple(heis.gens[i].name for i in idx), cap) for idx, cap in heis.nil]
    w = table_difference(heis, sym_algebra(heis.gens, None, nil), small_monomials(heis))
    if w:
        return f"Heisenberg algebra at rho = 0: {w}", {}
    av = a_shriek(s0)
    if av.algebra.diff:
        return "A! has a nonzero differential at rho = 0", {}
    return None, {"basis": len(R.basis()), "dual_table": hv.table_size}


class EquivariantSuite:
    def __init__(self, sc: Scenario):
        self.sc = sc
        self.s = sc.action
        self._c = None

    def omega_algebra(self):
        R = omega_algebra(self.s)
        keys = R.basis()
        mod = GradedModule([(k, R.degree(k), 0) for k in keys], {k: R.key_name(k) for k in keys})
        cx = Complex.build(mod, R.d_key)
        dims = {}
        for k in keys:
            dims[R.degree(k)] = dims.get(R.degree(k), 0) + 1
        h = cohomology(cx, representatives=False)
        return "pass", None, None, {"dims": _dims(dims), "cohomology": _dims(h.dims)}

    def coaction(self):
        _, v = coaction(self.s)
        return _verdict(v.ok), None, v.witness, {"algebra_map": v.algebra_map, "counit": v.counit,
                                                 "coassociative": v.coassociative}

    def _build_C(self):
        if self._c is None:
            self._c = build_C(self.s)[1]
        return self._c

    def coalgebra_C(self):
        c = self._build_C()
        ok = c.coalgebra and c.bimodule
        return _verdict(ok), None, c.witness, {"coalgebra": c.coalgebra, "bimodule": c.bimodule}

    def left_right_difference(self):
        c = self._build_C()
        nonzero = sum(1 for v in c.difference.values() if v)
        return _verdict(c.difference_is_phi), None, c.witness, {"pairs": len(c.difference),
                                                                "nonzero": nonzero}

    def heisenberg_identity(self):
        v = heisenberg_identity(self.s)
        pairs = [[f"[{a}, {r}]", lhs, exp] for (a, r), (lhs, exp) in sorted(v.pairs.items())]
        return _verdict(v.ok), None, v.witness, {"pairs": pairs, "table_size": v.table_size,
                                                 "table_ok": v.table_ok, "product_rule": v.product_rule_ok}

    def a_shriek_differential(self):
        v = a_shriek(self.s)
        w = None if v.ok else ("d u != phi" if not v.differential_is_phi else "d^2 != 0")
        return _verdict(v.ok), None, w, {"differential_is_phi": v.differential_is_phi,
                                         "d_squared_zero": v.d_squared_zero}

    def koszul_comparison(self):
        ks = koszul_scenario(self.s)
        kc = build_K(ks, self.sc.window)
        try:
            ev = heisenberg_embeddings(kc)
        except StructuralError as exc:
            raise Inconclusive(str(exc)) from None
        ok = kc.ok and ev.ok
        w = None
        if not kc.ok:
            w = f"H(K) dims {_dims(kc.dims)} != {_dims(kc.expected)}" if not kc.h_ok else "augmentation or match"
        elif not ev.ok:
            w = ev.witness or "embeddings"
        return _verdict(ok), kc.window.as_list(), w, {"h_dims": _dims(kc.dims),
                                                      "operator_pairs": ev.operator_pairs}

    def degeneration_rho_zero(self):
        w, details = rho_zero_regression(self.s)
        return _verdict(w is None), None, w, details


_RUNNERS = {"bar-suite": BarSuite, "koszul-twisted": TwistedSuite, "koszul-classical": ClassicalSuite,
            "equivariant": EquivariantSuite}
