"""Infinitesimal group actions on a linear space ``X = V``: differential
forms, the moment map, the coaction on forms, the coalgebra
``C = Sym(g*[1]) (x) Omega_X``, its dual algebra and the Koszul dual.

``O_X = Sym(V*)`` is truncated at ``poly_trunc`` (a nil group), forms
``dx_i`` sit in degree -1 and ``psi_a`` (the shifted dual basis of ``g``)
in degree -1.  All weights are 0, so every algebra here is finite.

With ``c[i][a] = sum_j rho(e_a)[i][j] x_j``:

    phi(dx_i)  = sum_a c[i][a] psi_a
    ca(dx_i)   = dx_i + phi(dx_i),   ca(x_i) = x_i        (an algebra map)
    Delta psi  = psi (x) 1 + 1 (x) psi
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import StructureTable, koszul, structure_table
from .bar import SymCoalgebra, check_coalgebra
from .graded import GradedModule, StructuralError
from .koszul import KoszulScenario, heisenberg_A, koszul_dual
from .linalg import ONE, Echelon, Vec, axpy
from .pbw import Generator, PBWAlgebra, sym_algebra


@dataclass
class ActionScenario:
    g_dim: int
    v_dim: int
    rho: list                      # rho[a][i][j]: action of e_a on V
    poly_trunc: int = 2
    bracket: dict = field(default_factory=dict)   # (a, b) -> {c: coeff}
    name: str = ""

    def __post_init__(self):
        if len(self.rho) != self.g_dim:
            raise StructuralError(f"rho needs {self.g_dim} matrices")
        for a, m in enumerate(self.rho):
            if len(m) != self.v_dim or any(len(r) != self.v_dim for r in m):
                raise StructuralError(f"rho[{a}] must be {self.v_dim}x{self.v_dim}")
        if self.poly_trunc < 0:
            raise StructuralError("poly_trunc must be non-negative")
        w = self.representation_witness()
        if w is not None:
            raise StructuralError(f"rho is not a Lie algebra map: {w}")

    def representation_witness(self) -> str | None:
        n = self.v_dim
        R = [[[Fraction(v) for v in row] for row in m] for m in self.rho]

        def mm(p, q):
            return [[sum(p[i][k] * q[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

        for a in range(self.g_dim):
            for b in range(self.g_dim):
                ab, ba = mm(R[a], R[b]), mm(R[b], R[a])
                rhs = [[Fraction(0)] * n for _ in range(n)]
                for c, coeff in self.bracket.get((a, b), {}).items():
                    for i in range(n):
                        for j in range(n):
                            rhs[i][j] += Fraction(coeff) * R[c][i][j]
                if any(ab[i][j] - ba[i][j] != rhs[i][j] for i in range(n) for j in range(n)):
                    return f"[rho(e{a + 1}), rho(e{b + 1})]"
        return None

    def xs(self) -> list[str]:
        return ["x"] if self.v_dim == 1 else [f"x{i + 1}" for i in range(self.v_dim)]

    def dxs(self) -> list[str]:
        return ["d" + x for x in self.xs()]

    def psis(self) -> list[str]:
        return ["psi"] if self.g_dim == 1 else [f"psi{a + 1}" for a in range(self.g_dim)]

    def nil(self) -> list:
        return [(tuple(self.xs()), self.poly_trunc)] if self.v_dim else []

    def trivial(self) -> ActionScenario:
        zero = [[[0] * self.v_dim for _ in range(self.v_dim)] for _ in range(self.g_dim)]
        return ActionScenario(self.g_dim, self.v_dim, zero, self.poly_trunc, {}, self.name + " (rho=0)")


# -- forms and the moment map ----------------------------------------------------

def omega_algebra(s: ActionScenario) -> PBWAlgebra:
    gens = [Generator(x, 0, 0) for x in s.xs()] + [Generator(d, -1, 0) for d in s.dxs()]
    return sym_algebra(gens, None, s.nil(), name="Omega_X")


def moment_phi(s: ActionScenario) -> dict:
    """``c[(i, a)]``: the ``O_X`` coefficient of ``psi_a`` in ``phi(dx_i)``,
    as ``{monomial string: coeff}`` (zero entries omitted)."""
    xs = s.xs()
    out = {}
    for i in range(s.v_dim):
        for a in range(s.g_dim):
            val = {xs[j]: Fraction(s.rho[a][i][j]) for j in range(s.v_dim) if Fraction(s.rho[a][i][j])}
            if val:
                out[(i, a)] = val
    return out


def koszul_scenario(s: ActionScenario) -> KoszulScenario:
    """``M = T*X``, ``N = O_X (x) g`` and the moment map as the pairing."""
    c = moment_phi(s)
    phi = [[c.get((i, a), 0) for i in range(s.v_dim)] for a in range(s.g_dim)]
    return KoszulScenario([0] * s.v_dim, [0] * s.g_dim, phi, s.xs(), s.poly_trunc if s.v_dim else None,
                          s.name, stems={"x": "dx", "y": "e"})


# -- coaction and the coalgebra C ----------------------------------------------------

class Coalgebra:
    """``C = Sym(g*[1]) (x) Omega_X`` together with the coaction, the two
    module structures over ``R = Omega_X`` and the comultiplication."""

    def __init__(self, s: ActionScenario):
        self.s = s
        self.R = omega_algebra(s)
        xs, dxs, psis = s.xs(), s.dxs(), s.psis()
        self.nx, self.ng = s.v_dim, s.g_dim
        self.C = sym_algebra([Generator(x, 0, 0) for x in xs] + [Generator(p, -1, 0) for p in psis]
                             + [Generator(d, -1, 0) for d in dxs], None, s.nil(), name="C")
        self.C2 = sym_algebra([Generator(x, 0, 0) for x in xs] + [Generator(p, -1, 0) for p in psis]
                              + [Generator(p + "'", -1, 0) for p in psis]
                              + [Generator(d, -1, 0) for d in dxs], None, s.nil(), name="C(x)_R C")
        self.S = sym_algebra([Generator(p, -1, 0) for p in psis], name="Sym(g*[1])")
        self.sym_coalg = SymCoalgebra(self.S)
        self.phi = moment_phi(s)
        self._ca_gens = self._coaction_generators()
        self._ca_cache: dict = {}

    # keys ----------------------------------------------------------------
    def split(self, ck):
        """``C`` monomial -> (psi part, Omega monomial); ``x^k psi^S dx^I = psi^S x^k dx^I``."""
        nx, ng = self.nx, self.ng
        return ck[nx:nx + ng], ck[:nx] + ck[nx + ng:]

    def join(self, sk, rk):
        nx = self.nx
        return rk[:nx] + tuple(sk) + rk[nx:]

    def _coaction_generators(self) -> list[Vec]:
        C, nx, ng = self.C, self.nx, self.ng
        out = [C.gen(i) for i in range(nx)]
        for i in range(nx):
            v = dict(C.gen(nx + ng + i))
            for a in range(ng):
                for mono, coeff in self.phi.get((i, a), {}).items():
                    axpy(v, coeff, C.mul(C.gen(C.index[mono]), C.gen(nx + a)))
            out.append(v)
        return out

    def coact_key(self, rk) -> Vec:
        """``ca`` on an ``Omega_X`` monomial, valued in ``C``."""
        hit = self._ca_cache.get(rk)
        if hit is None:
            hit = self.C.one()
            for i, e in enumerate(rk):
                for _ in range(e):
                    hit = self.C.mul(hit, self._ca_gens[i])
            self._ca_cache[rk] = hit
        return hit

    def coact(self, r: Mapping) -> Vec:
        out: Vec = {}
        for rk, c in r.items():
            axpy(out, c, self.coact_key(rk))
        return out

    def left(self, rk, ck) -> Vec:
        return self.C.mul(self.coact_key(rk), {ck: ONE})

    def right(self, ck, rk) -> Vec:
        return self.C.mul({ck: ONE}, {self.join((0,) * self.ng, rk): ONE})

    # comultiplication into C (x)_R C = Sym(psi) (x) Sym(psi') (x) Omega_X --------
    def _to_c2(self, first: Sequence[int], second: Sequence[int], rk) -> tuple:
        nx = self.nx
        return rk[:nx] + tuple(first) + tuple(second) + rk[nx:]

    def delta_key(self, ck) -> Vec:
        sk, rk = self.split(ck)
        out: Vec = {}
        for (s1, s2), c in self.sym_coalg.delta_key(sk).items():
            # psi^{S1} psi'^{S2} omega is already in normal order
            axpy(out, c, {self._to_c2(s1, s2, rk): ONE})
        return out

    def counit_key(self, ck) -> Vec:
        sk, rk = self.split(ck)
        return {rk: ONE} if not any(sk) else {}


@dataclass
class CoactionVerdict:
    ok: bool
    algebra_map: bool
    counit: bool
    coassociative: bool
    witness: str | None = None


def coaction(s: ActionScenario) -> tuple[Coalgebra, CoactionVerdict]:
    """Builds ``ca`` and checks it is an algebra map, counital and coassociative."""
    cc = Coalgebra(s)
    R, C, C2 = cc.R, cc.C, cc.C2
    nx, ng = cc.nx, cc.ng
    witness = None
    basis = R.basis()
    alg_ok = True
    for p in basis:
        for q in basis:
            lhs: Vec = {}
            for m, c in R.mul_keys(p, q).items():
                axpy(lhs, c, cc.coact_key(m))
            if lhs != C.mul(cc.coact_key(p), cc.coact_key(q)):
                alg_ok = False
                witness = witness or f"ca({R.key_name(p)} {R.key_name(q)})"
    counit_ok = True
    for p in basis:
        back: Vec = {}
        for ck, c in cc.coact_key(p).items():
            axpy(back, c, cc.counit_key(ck))
        if back != {p: ONE}:
            counit_ok = False
            witness = witness or f"counit on {R.key_name(p)}"
    # (Delta (x) id) ca  versus  (id (x) ca) ca, both in Sym(psi) (x) Sym(psi') (x) Omega
    coassoc = True
    for p in basis:
        lhs: Vec = {}
        for ck, c in cc.coact_key(p).items():
            axpy(lhs, c, cc.delta_key(ck))
        rhs: Vec = {}
        for ck, c in cc.coact_key(p).items():
            sk, rk = cc.split(ck)
            inner = cc.coact_key(rk)
            # psi^S (x) ca(omega): rename psi -> psi' inside ca(omega)
            for ck2, c2 in inner.items():
                s2, r2 = cc.split(ck2)
                axpy(rhs, c * c2, C2.mul({cc._to_c2(sk, (0,) * ng, (0,) * nx + (0,) * nx): ONE},
                                          {cc._to_c2((0,) * ng, s2, r2): ONE}))
        if lhs != rhs:
            coassoc = False
            witness = witness or f"coassociativity on {R.key_name(p)}"
    ok = alg_ok and counit_ok and coassoc
    return cc, CoactionVerdict(ok, alg_ok, counit_ok, coassoc, witness)


@dataclass
class CVerdict:
    ok: bool
    coalgebra: bool
    bimodule: bool
    difference: dict              # (Omega generator, C basis key) -> r c - (-1)^{|r||c|} c r
    difference_is_phi: bool
    witness: str | None = None


def build_C(s: ActionScenario) -> tuple[Coalgebra, CVerdict]:
    """``C`` with right structure ``c r`` and left structure ``ca(r) c``;
    checks Delta (counit laws, coassociativity), compatibility of Delta with
    both structures, and that the two structures differ (up to the Koszul
    sign) exactly by ``phi(r) c``."""
    cc, cv = coaction(s)
    C, R, C2 = cc.C, cc.R, cc.C2
    nx, ng = cc.nx, cc.ng
    w = check_coalgebra(cc.sym_coalg, cc.S.basis())
    witness = cv.witness or (f"{w.identity} at {w.where}" if w else None)
    coalg_ok = w is None and cv.ok

    bimod = True
    for ck in C.basis():
        dk = cc.delta_key(ck)
        for ri in range(R.n):
            rk = R.generator_keys()[ri]
            # right: Delta(c r) = Delta(c) r
            lhs: Vec = {}
            for m, c in cc.right(ck, rk).items():
                axpy(lhs, c, cc.delta_key(m))
            rhs = C2.mul(dk, {cc._to_c2((0,) * ng, (0,) * ng, rk): ONE})
            if lhs != rhs:
                bimod = False
                witness = witness or f"Delta(c r) on {C.key_name(ck)}"
            # left: Delta(r c) = r Delta(c), r acting through ca on the first factor
            lhs = {}
            for m, c in cc.left(rk, ck).items():
                axpy(lhs, c, cc.delta_key(m))
            ca_r: Vec = {}
            for m, c in cc.coact_key(rk).items():
                axpy(ca_r, c, cc.delta_key(m))
            rhs = C2.mul(ca_r, dk)
            if lhs != rhs:
                bimod = False
                witness = witness or f"Delta(r c) on {C.key_name(ck)}"
    difference = {}
    diff_ok = True
    for ri in range(R.n):
        rk = R.generator_keys()[ri]
        for ck in C.basis():
            d = cc.left(rk, ck)
            axpy(d, -koszul(R.degree(rk), C.degree(ck)), cc.right(ck, rk))
            # expected: phi(r) c for r = dx_i, zero for functions
            exp: Vec = {}
            if ri >= nx:
                i = ri - nx
                for a in range(ng):
                    for mono, coeff in cc.phi.get((i, a), {}).items():
                        axpy(exp, coeff, C.mul(C.mul(C.gen(C.index[mono]), C.gen(nx + a)), {ck: ONE}))
            if d != exp:
                diff_ok = False
                witness = witness or f"left - right on {R.key_name(rk)}, {C.key_name(ck)}"
            if d:
                difference[(R.key_name(rk), C.key_name(ck))] = {C.key_name(k): str(v) for k, v in d.items()}
    ok = coalg_ok and bimod and diff_ok
    return cc, CVerdict(ok, coalg_ok, bimod, difference, diff_ok, witness)


# -- the dual algebra A = Hom_{mod-R}(C, R) -------------------------------------------

class DualAlgebra:
    """Right ``R``-linear maps ``C -> R``, determined by their values on the
    free generators ``psi^S``.  Basis key ``(S, r)``: ``psi^T -> delta_{ST} r``.
    Product ``(a b)(c) = sum a(b(c_1) c_2)``."""

    def __init__(self, cc: Coalgebra):
        self.cc = cc
        self.R, self.S = cc.R, cc.S
        self.sbasis = self.S.basis()
        self.rbasis = self.R.basis()
        self.keys = [(sk, rk) for sk in self.sbasis for rk in self.rbasis]
        self.one_key = (self.S.one_key, self.R.one_key)
        self._mul_cache: dict = {}
        self.augmented = False

    def degree(self, k) -> int:
        return self.R.degree(k[1]) - self.S.degree(k[0])

    def weight(self, k) -> int:
        return 0

    def key_name(self, k) -> str:
        sk, rk = k
        return f"<{self.S.key_name(sk)}|{self.R.key_name(rk)}>"

    def basis(self, window=None, wcap=None) -> list:
        return [k for k in self.keys if window is None or self.degree(k) in window]

    def generator_keys(self) -> list:
        return self.keys

    def d_key(self, k) -> Vec:
        return {}

    def evaluate(self, a: Mapping, sk) -> Vec:
        return {rk: c for (s2, rk), c in a.items() if s2 == sk}

    def mul_keys(self, k1, k2) -> Vec:
        key = (k1, k2)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        cc, R = self.cc, self.R
        (s1, r1), (s2, r2) = k1, k2
        out: Vec = {}
        for t in self.sbasis:
            for (t1, t2), c in cc.sym_coalg.delta_key(t).items():
                if t1 != s2:
                    continue
                # b(c_1) = r2, then r2 . psi^{t2} through the left structure
                for ck, c2 in cc.left(r2, cc.join(t2, R.one_key)).items():
                    u, rr = cc.split(ck)
                    if u != s1:
                        continue
                    for rk, c3 in R.mul_keys(r1, rr).items():
                        axpy(out, c * c2 * c3, {(t, rk): ONE})
        self._mul_cache[key] = out
        return out

    def mul(self, x: Mapping, y: Mapping) -> Vec:
        out: Vec = {}
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                axpy(out, c1 * c2, self.mul_keys(k1, k2))
        return out


def dual_algebra_A(s: ActionScenario) -> DualAlgebra:
    cc, _ = coaction(s)
    return DualAlgebra(cc)


def primitive_product_rule(A: DualAlgebra) -> str | None:
    """``(a b)(psi) = a(1) b(psi) + a(psi) b(1)`` for maps with values in ``O_X``."""
    R, S = A.R, A.S
    nx = A.cc.nx
    fun_keys = [k for k in A.keys if not any(k[1][nx:])]
    one = S.one_key
    for p in range(S.n):
        psi = S.generator_keys()[p]
        for k1 in fun_keys:
            for k2 in fun_keys:
                ab = A.mul_keys(k1, k2)
                lhs = A.evaluate(ab, psi)
                rhs = R.mul(A.evaluate({k1: ONE}, one), A.evaluate({k2: ONE}, psi))
                axpy(rhs, ONE, R.mul(A.evaluate({k1: ONE}, psi), A.evaluate({k2: ONE}, one)))
                if lhs != rhs:
                    return f"{A.key_name(k1)} * {A.key_name(k2)} on {S.key_name(psi)}"
    return None


@dataclass
class HeisenbergIdentityVerdict:
    ok: bool
    pairs: dict                   # (a, r) -> (lhs, expected) as strings
    pairs_ok: bool
    table_ok: bool
    table_size: int
    product_rule_ok: bool
    witness: str | None = None


def heisenberg_generator_images(A: DualAlgebra, heis: PBWAlgebra) -> list[Vec]:
    """``x_i -> <1|x_i>``, ``dx_i -> <1|dx_i>``, ``e_a -> <psi_a|1>``."""
    cc = A.cc
    nx, ng = cc.nx, cc.ng
    one_s, one_r = A.S.one_key, A.R.one_key
    imgs = [{(one_s, A.R.generator_keys()[i]): ONE} for i in range(nx)]
    imgs += [{(one_s, A.R.generator_keys()[nx + i]): ONE} for i in range(nx)]
    imgs += [{(A.S.generator_keys()[a], one_r): ONE} for a in range(ng)]
    if len(imgs) != heis.n:
        raise StructuralError("generator count mismatch")
    return imgs


def heisenberg_identity(s: ActionScenario) -> HeisenbergIdentityVerdict:
    """``e_a dx_i - (-1)^{|e||dx|} dx_i e_a = c[i][a]`` in the dual algebra,
    then equality of structure constants with the Heisenberg algebra through
    the basis ``x^k dx^I e^J -> <1|x^k> <1|dx^I> <psi^J|1>`` (checked to be a
    basis)."""
    A = dual_algebra_A(s)
    heis = heisenberg_A(koszul_scenario(s))
    imgs = heisenberg_generator_images(A, heis)
    nx, ng = A.cc.nx, A.cc.ng
    phi = A.cc.phi
    pairs, pairs_ok, witness = {}, True, None
    for a in range(ng):
        e = imgs[2 * nx + a]
        for i in range(nx):
            dx = imgs[nx + i]
            lhs = A.mul(e, dx)
            axpy(lhs, -koszul(1, -1), A.mul(dx, e))
            exp = {(A.S.one_key, A.R.parse_monomial(m)): c for m, c in phi.get((i, a), {}).items()}
            key = (heis.gens[2 * nx + a].name, heis.gens[nx + i].name)
            pairs[key] = (_fmt(A, lhs), _fmt(A, exp))
            if lhs != exp:
                pairs_ok = False
                witness = witness or f"[{key[0]}, {key[1]}]"
    theta = {}
    for m in heis.basis():
        v: Vec = {A.one_key: ONE}
        for i, e in enumerate(m):
            for _ in range(e):
                v = A.mul(v, imgs[i])
        theta[m] = v
    ech = Echelon()
    table_ok = len(theta) == len(A.keys)
    for v in theta.values():
        if ech.add(v) is not None:
            table_ok = False
    if table_ok:
        for m1 in theta:
            for m2 in theta:
                lhs = A.mul(theta[m1], theta[m2])
                rhs: Vec = {}
                for m, c in heis.mul_keys(m1, m2).items():
                    axpy(rhs, c, theta[m])
                if lhs != rhs:
                    table_ok = False
                    witness = witness or f"{heis.key_name(m1)} * {heis.key_name(m2)}"
                    break
            if not table_ok:
                break
    rule = primitive_product_rule(A)
    witness = witness or rule
    ok = pairs_ok and table_ok and rule is None
    return HeisenbergIdentityVerdict(ok, pairs, pairs_ok, table_ok, len(theta), rule is None, witness)


def _fmt(A: DualAlgebra, v: Mapping) -> str:
    if not v:
        return "0"
    return " + ".join(f"{c}*{A.R.key_name(k[1])}" if k[0] == A.S.one_key else f"{c}*{A.key_name(k)}"
                      for k, c in sorted(v.items()))


def dual_table(s: ActionScenario, window=None) -> StructureTable:
    A = dual_algebra_A(s)
    return structure_table(A, A.basis(window))


@dataclass
class AShriekVerdict:
    algebra: PBWAlgebra
    differential_is_phi: bool
    d_squared_zero: bool

    @property
    def ok(self) -> bool:
        return self.differential_is_phi and self.d_squared_zero


def a_shriek(s: ActionScenario) -> AShriekVerdict:
    """``Sym_{O_X}(g[-1] -> T_X[-2])`` with ``d u_a = sum_i c[i][a] th_i``."""
    ks = koszul_scenario(s)
    alg = koszul_dual(ks)
    phi = moment_phi(s)
    nx, ng = s.v_dim, s.g_dim
    ok = True
    for a in range(ng):
        got = alg.d(alg.gen(nx + a))
        exp: Vec = {}
        for i in range(nx):
            for mono, c in phi.get((i, a), {}).items():
                axpy(exp, c, alg.mul(alg.gen(alg.index[mono]), alg.gen(nx + ng + i)))
        if got != exp:
            ok = False
    d2 = all(not alg.d(alg.d({m: ONE})) for m in alg.basis(None, 3))
    return AShriekVerdict(alg, ok, d2)
