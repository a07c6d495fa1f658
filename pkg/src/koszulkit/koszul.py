"""Koszul complexes: the classical one for ``Sym(M)`` and the twisted one
attached to a pairing ``phi: M -> N*``.

For the twisted case with free modules ``M = <m_i>`` (degree ``mu_i``) and
``N = <n_j>`` (degree ``nu_j``) and ``phi[j][i] = <phi(m_i), n_j>``:

    A   = Heis(M[1] + N[-1])    x_i  (mu_i - 1),  y_j (nu_j + 1),  [x_i, y_j] = phi[j][i]
    A!  = Sym(N[-1] + M*[-2])   u_j  (nu_j + 1),  th_i (2 - mu_i), d u_j = sum_i phi[j][i] th_i
    L   = M*[-1] + N[-1] + M*[-2]
        a_i (1 - mu_i), b_j (nu_j + 1), c_i (2 - mu_i),  d a_i = -c_i,  d b_j = sum_i phi[j][i] c_i
    K   = Sym(L)

``A`` acts on ``K`` through ``Heis(L + L*)`` (``x_i -> a_i*``,
``y_j -> sum_i phi[j][i] a_i + b_j``) and ``A!`` acts by multiplication
(``u_j -> b_j``, ``th_i -> c_i``).  Pairings may take values in a
commutative base algebra generated by central degree-0 generators.

Everything is graded by weight: generators of ``L``, ``u`` and ``th`` have
weight 1, dual generators weight -1, base generators weight 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import koszul
from .bar import DgComodule, SymCoalgebra, TwistingCochain, check_twisting_cochain, twist_module
from .graded import (Complex, DegreeWindow, GradedMap, GradedModule, StructuralError, NotAChainMap,
                     QuasiIsoVerdict, check_chain_map, cohomology, is_quasi_iso)
from .linalg import ONE, Echelon, Vec, axpy
from .modules import DgModule, HomComplex, hom_complex
from .pbw import Generator, PBWAlgebra, heisenberg_algebra, sym_algebra


# -- scenarios -------------------------------------------------------------------

@dataclass
class KoszulScenario:
    m_degrees: list
    n_degrees: list
    phi: list                     # phi[j][i]: scalar or {base monomial: coeff}
    base: list = field(default_factory=list)
    poly_trunc: int | None = None
    name: str = ""
    stems: dict = field(default_factory=dict)   # renames of the default generator stems

    def __post_init__(self):
        if len(self.phi) != len(self.n_degrees) or any(len(r) != len(self.m_degrees) for r in self.phi):
            raise StructuralError(f"phi must be a {len(self.n_degrees)}x{len(self.m_degrees)} matrix")
        if self.base and self.poly_trunc is None:
            raise StructuralError("a polynomial base needs poly_trunc")
        for j, row in enumerate(self.phi):
            for i, v in enumerate(row):
                if _nonzero(v) and self.m_degrees[i] != -self.n_degrees[j]:
                    raise StructuralError(
                        f"phi[{j}][{i}] pairs degree {self.m_degrees[i]} with {self.n_degrees[j]}; "
                        "phi must have degree 0")

    @property
    def rank_m(self) -> int:
        return len(self.m_degrees)

    @property
    def rank_n(self) -> int:
        return len(self.n_degrees)

    def names(self, stem: str, count: int) -> list[str]:
        stem = self.stems.get(stem, stem)
        return [stem] if count == 1 else [f"{stem}{i + 1}" for i in range(count)]

    def base_gens(self) -> list[Generator]:
        return [Generator(b, 0, 0) for b in self.base]

    def nil(self) -> list:
        return [(tuple(self.base), self.poly_trunc)] if self.base else []

    def untwisted(self) -> KoszulScenario:
        zero = [[0] * self.rank_m for _ in range(self.rank_n)]
        return KoszulScenario(list(self.m_degrees), list(self.n_degrees), zero, list(self.base),
                              self.poly_trunc, self.name + " (phi=0)", dict(self.stems))


def _nonzero(v) -> bool:
    if isinstance(v, Mapping):
        return any(Fraction(c) for c in v.values())
    return Fraction(v) != 0


def _times(coeff, gen: str) -> dict:
    """``coeff * gen`` as ``{monomial string: coefficient}``."""
    if isinstance(coeff, Mapping):
        return {(gen if m in ("1", "") else f"{m}*{gen}"): Fraction(c) for m, c in coeff.items() if Fraction(c)}
    c = Fraction(coeff)
    return {gen: c} if c else {}


def _combine(*parts: dict) -> dict:
    out: dict = {}
    for p in parts:
        for k, c in p.items():
            out[k] = out.get(k, 0) + c
    return {k: c for k, c in out.items() if c}


# -- the algebras ----------------------------------------------------------------

def heisenberg_A(s: KoszulScenario) -> PBWAlgebra:
    xs, ys = s.names("x", s.rank_m), s.names("y", s.rank_n)
    return heisenberg_algebra([Generator(x, d - 1, -1) for x, d in zip(xs, s.m_degrees)],
                              [Generator(y, d + 1, 1) for y, d in zip(ys, s.n_degrees)],
                              s.phi, base=s.base_gens(), nil=s.nil(), name="A")


def koszul_dual(s: KoszulScenario) -> PBWAlgebra:
    us, ths = s.names("u", s.rank_n), s.names("th", s.rank_m)
    gens = (s.base_gens() + [Generator(u, d + 1, 1) for u, d in zip(us, s.n_degrees)]
            + [Generator(t, 2 - d, 1) for t, d in zip(ths, s.m_degrees)])
    diff = {u: _combine(*(_times(s.phi[j][i], ths[i]) for i in range(s.rank_m))) for j, u in enumerate(us)}
    return sym_algebra(gens, diff, s.nil(), name="A!")


def sym_N(s: KoszulScenario) -> PBWAlgebra:
    """``S = Sym(N[-1])`` over the base."""
    us = s.names("v", s.rank_n)
    return sym_algebra(s.base_gens() + [Generator(u, d + 1, 1) for u, d in zip(us, s.n_degrees)],
                       None, s.nil(), name="S")


def _l_generators(s: KoszulScenario):
    a_s, b_s, c_s = s.names("a", s.rank_m), s.names("b", s.rank_n), s.names("c", s.rank_m)
    gens = ([Generator(a, 1 - d, 1) for a, d in zip(a_s, s.m_degrees)]
            + [Generator(b, d + 1, 1) for b, d in zip(b_s, s.n_degrees)]
            + [Generator(c, 2 - d, 1) for c, d in zip(c_s, s.m_degrees)])
    diff = {a: {c: -1} for a, c in zip(a_s, c_s)}
    for j, b in enumerate(b_s):
        diff[b] = _combine(*(_times(s.phi[j][i], c_s[i]) for i in range(s.rank_m)))
    return gens, diff


def koszul_algebra(s: KoszulScenario) -> PBWAlgebra:
    gens, diff = _l_generators(s)
    return sym_algebra(s.base_gens() + gens, diff, s.nil(), name="K")


def heis_LL(s: KoszulScenario) -> PBWAlgebra:
    """``Heis(L + L*)`` with ``[l*_i, l_i] = 1`` and the dual differential."""
    gens, diff = _l_generators(s)
    duals = [Generator(g.name + "'", -g.degree, -1) for g in gens]
    omega = {(dg.name, g.name): 1 for g, dg in zip(gens, duals)}
    full = dict(diff)
    for i, dg in enumerate(duals):
        # d(l*_i) = sum_k c_k l*_k, c_k = -(-1)^{|l*_i|} [l_i] d(l_k)
        sign = -1 if dg.degree % 2 == 0 else 1
        parts = []
        for k, g in enumerate(gens):
            coeff = _coefficient_of(diff.get(g.name, {}), gens[i].name)
            if coeff:
                parts.append(_times({m: sign * c for m, c in coeff.items()}, duals[k].name))
        val = _combine(*parts)
        if val:
            full[dg.name] = val
    return PBWAlgebra(s.base_gens() + gens + duals, omega, full, s.nil(), name="Heis(L+L*)")


def _coefficient_of(elem: Mapping, gen: str) -> dict:
    """Base coefficient of ``gen`` in a linear element given as
    ``{monomial string: coeff}``."""
    out = {}
    for mono, c in elem.items():
        parts = mono.split("*")
        if gen in parts:
            rest = [p for p in parts if p != gen]
            out["*".join(rest) or "1"] = Fraction(c)
    return out


# -- Fock action of Heis(L + L*) on K = Sym(L) -------------------------------------

class FockAction:
    """``l`` acts by multiplication and ``l*`` by the graded derivation
    ``d/dl`` on ``K``; a Heisenberg monomial acts right to left."""

    def __init__(self, heis: PBWAlgebra, k: PBWAlgebra, n_base: int = 0):
        self.heis, self.k = heis, k
        self.nk = k.n
        self.nb = n_base
        self._cache: dict = {}

    def derivation(self, i: int, mono) -> Vec:
        e = mono[i]
        if not e:
            return {}
        g = self.k.gens[i]
        prefix = sum(mono[t] * self.k.gens[t].degree for t in range(i))
        sign = -1 if (g.degree * prefix) % 2 else 1
        new = list(mono)
        new[i] -= 1
        return {tuple(new): Fraction(sign * (1 if g.odd else e))}

    def gen_op(self, j: int, v: Mapping) -> Vec:
        """Heisenberg generator ``j`` applied to a vector of ``K``."""
        out: Vec = {}
        if j < self.nk:
            g = self.k.gen(j)
            for m, c in v.items():
                axpy(out, c, self.k.mul_keys(next(iter(g)), m))
        else:
            i = j - self.nk + self.nb
            for m, c in v.items():
                axpy(out, c, self.derivation(i, m))
        return out

    def apply_key(self, hm, km) -> Vec:
        key = (hm, km)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        cur: Vec = {km: ONE}
        for j in range(len(hm) - 1, -1, -1):
            for _ in range(hm[j]):
                cur = self.gen_op(j, cur)
                if not cur:
                    break
            if not cur:
                break
        self._cache[key] = cur
        return cur

    def apply(self, h: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        for hm, ch in h.items():
            for km, ck in v.items():
                axpy(out, ch * ck, self.apply_key(hm, km))
        return out


# -- L and K --------------------------------------------------------------------

@dataclass
class LVerdict:
    complex: Complex
    dims: dict
    expected: dict
    ok: bool


def twisted_L(s: KoszulScenario) -> LVerdict:
    """``L`` over the base (the weight-one part of ``K``) with ``H(L) = N[-1]``
    (tensored with the base)."""
    k = koszul_algebra(s)
    keys = [m for m in k.basis(None, 1) if k.weight(m) == 1]
    mod = GradedModule([(m, k.degree(m), 1) for m in keys], {m: k.key_name(m) for m in keys})
    cx = Complex.build(mod, k.d_key)
    h = cohomology(cx)
    dims = {d: v for d, v in h.dims.items() if v}
    bdim = len(sym_N(s).basis(None, 0))
    expected: dict = {}
    for d in s.n_degrees:
        expected[d + 1] = expected.get(d + 1, 0) + bdim
    return LVerdict(cx, dims, expected, dims == expected)


def _lossless_wcap(degrees: Sequence[int], window: DegreeWindow) -> int | None:
    """A weight cap capturing every basis element with degree in ``window``
    (widened by one) when all weight-one generators have degrees of one sign."""
    if not degrees:
        return 0
    if degrees and all(d >= 1 for d in degrees):
        return max(window.hi + 1, 0)
    if degrees and all(d <= -1 for d in degrees):
        return max(-(window.lo - 1), 0)
    return None


@dataclass
class SemifreeCertificate:
    ok: bool
    levels: dict                  # alpha-length -> number of free generators
    witness: str | None = None


@dataclass
class TwistMatch:
    ok: bool
    tau_ok: bool
    size: int
    witness: str | None = None


@dataclass
class KoszulComplex:
    scenario: KoszulScenario
    A: PBWAlgebra
    A_shriek: PBWAlgebra
    K: PBWAlgebra
    S: PBWAlgebra
    heis: PBWAlgebra
    fock: FockAction
    wcap: int
    lossless: bool
    window: DegreeWindow
    complex: Complex
    module: DgModule              # K (weight <= wcap) as a dg-module over A!
    dims: dict
    expected: dict
    augmentations: dict = field(default_factory=dict)   # name -> QuasiIsoVerdict
    semifree: SemifreeCertificate | None = None
    twist_match: TwistMatch | None = None

    @property
    def h_ok(self) -> bool:
        return all(self.dims.get(d, 0) == self.expected.get(d, 0) for d in self.window.degrees())

    @property
    def ok(self) -> bool:
        return (self.h_ok and all(v.ok for v in self.augmentations.values())
                and (self.semifree is None or self.semifree.ok)
                and (self.twist_match is None or self.twist_match.ok))

    def a_shriek_key_to_k(self, m):
        """``u -> b``, ``th -> c``, base to base."""
        s = self.scenario
        nb = len(s.base)
        base, us, ths = m[:nb], m[nb:nb + s.rank_n], m[nb + s.rank_n:]
        return tuple(base) + (0,) * s.rank_m + tuple(us) + tuple(ths)


def _truncated(alg: PBWAlgebra, keys: Sequence, name: str) -> tuple[GradedModule, set]:
    mod = GradedModule([(m, alg.degree(m), alg.weight(m)) for m in keys], {m: alg.key_name(m) for m in keys})
    return mod, set(keys)


def build_K(s: KoszulScenario, window: DegreeWindow = DegreeWindow(-6, 6), wcap: int | None = None,
            alternate: bool = True) -> KoszulComplex:
    A, Ash, K, S = heisenberg_A(s), koszul_dual(s), koszul_algebra(s), sym_N(s)
    heis = heis_LL(s)
    nb = len(s.base)
    lin_degrees = [g.degree for g in K.gens[nb:]]
    auto = _lossless_wcap(lin_degrees, window)
    lossless = auto is not None and (wcap is None or wcap >= auto)
    if wcap is None:
        wcap = auto if auto is not None else 6
    keys = K.basis(None, wcap)
    kmod, keyset = _truncated(K, keys, "K")
    cx = Complex.build(kmod, K.d_key)

    def act(a, m):
        km = kc.a_shriek_key_to_k(a)
        return {t: c for t, c in K.mul_keys(km, m).items() if t in keyset}

    module = DgModule(Ash, cx, act, "K")
    h = cohomology(cx, window, representatives=False)
    skeys = S.basis(None, wcap)
    expected: dict = {}
    for m in skeys:
        d = S.degree(m)
        if d in window:
            expected[d] = expected.get(d, 0) + 1
    dims = {d: h.dims.get(d, 0) for d in window.degrees()}
    kc = KoszulComplex(s, A, Ash, K, S, heis, FockAction(heis, K, nb), wcap, lossless, window, cx, module,
                       dims, expected)
    kc.augmentations = _augmentations(kc, skeys, window)
    kc.semifree = semifree_certificate(kc)
    if alternate:
        kc.twist_match = twisted_construction_match(kc)
    return kc


def _augmentations(kc: KoszulComplex, skeys, window) -> dict:
    s, K, S = kc.scenario, kc.K, kc.S
    nb = len(s.base)
    smod, sset = _truncated(S, skeys, "S")
    scx = Complex(smod, {})
    # A!-side: a, c -> 0, b -> v
    images = {}
    for m in kc.complex.module.keys:
        a_part = m[nb:nb + s.rank_m]
        c_part = m[nb + s.rank_m + s.rank_n:]
        if any(a_part) or any(c_part):
            continue
        t = tuple(m[:nb]) + tuple(m[nb + s.rank_m:nb + s.rank_m + s.rank_n])
        if t in sset:
            images[m] = {t: ONE}
    eps = GradedMap(kc.complex.module, smod, 0, images)
    # A-side: v_j -> sum_i phi[j][i] a_i + b_j, extended multiplicatively
    gen_img = []
    for j in range(s.rank_n):
        e: Vec = {}
        axpy(e, ONE, K.gen(nb + s.rank_m + j))
        for i in range(s.rank_m):
            for mono, c in _times(s.phi[j][i], K.gens[nb + i].name).items():
                axpy(e, c, {K.parse_monomial(mono): ONE})
        gen_img.append(e)
    incl_images = {}
    kset = set(kc.complex.module.keys)
    for t in skeys:
        v: Vec = {tuple(t[:nb]) + (0,) * (K.n - nb): ONE}
        for j in range(s.rank_n):
            for _ in range(t[nb + j]):
                v = K.mul(v, gen_img[j])
        incl_images[t] = {k: c for k, c in v.items() if k in kset}
    incl = GradedMap(smod, kc.complex.module, 0, incl_images)
    out = {}
    for name, f, src, tgt in (("A!-side K -> S", eps, kc.complex, scx), ("A-side S -> K", incl, scx, kc.complex)):
        try:
            check_chain_map(f, src, tgt)
            out[name] = is_quasi_iso(f, src, tgt, window)
        except NotAChainMap as exc:
            out[name] = QuasiIsoVerdict(False, None, {}, {}, {})
    return out


def semifree_certificate(kc: KoszulComplex) -> SemifreeCertificate:
    """``K`` is free over ``A!`` on the monomials in the ``a`` generators, and
    ``d`` lowers the number of ``a`` factors: the filtration by that number is
    a finite filtration with free graded pieces."""
    s, K = kc.scenario, kc.K
    nb = len(s.base)
    gens = [m for m in kc.complex.module.keys
            if not any(m[:nb]) and not any(m[nb + s.rank_m:])]
    levels: dict = {}
    for g in gens:
        p = sum(g[nb:nb + s.rank_m])
        levels[p] = levels.get(p, 0) + 1
        for t in K.d_key(g):
            if sum(t[nb:nb + s.rank_m]) >= p:
                return SemifreeCertificate(False, levels, f"d({K.key_name(g)}) stays in filtration level {p}")
    from .modules import is_free_on

    if not is_free_on(kc.module, gens):
        return SemifreeCertificate(False, levels, "K is not free on the a-monomials")
    return SemifreeCertificate(True, levels)


def dual_coalgebra(s: KoszulScenario) -> SymCoalgebra:
    """``A*`` restricted to the span of the ``x`` monomials: the symmetric
    coalgebra on ``M*[-1]`` with primitive generators."""
    gens, _ = _l_generators(s)
    return SymCoalgebra(sym_algebra(gens[:s.rank_m], name="A*"), name="A*")


def koszul_tau(s: KoszulScenario, coalg: SymCoalgebra, Ash: PBWAlgebra) -> TwistingCochain:
    """``a_i -> th_i`` and zero elsewhere."""
    nb = len(s.base)

    def fn(m):
        if sum(m) == 1:
            i = m.index(1)
            return Ash.gen(nb + s.rank_n + i)
        return {}

    return TwistingCochain(coalg, Ash, fn)


def twisted_construction_match(kc: KoszulComplex) -> TwistMatch:
    """Build ``A! (x)^tau A*`` and compare with ``K`` through
    ``b (x) c -> b c`` (a basis bijection up to sign)."""
    s, K, Ash = kc.scenario, kc.K, kc.A_shriek
    nb = len(s.base)
    coalg = dual_coalgebra(s)
    tau = koszul_tau(s, coalg, Ash)
    tv = check_twisting_cochain(tau, coalg.basis(None, kc.wcap))
    ckeys = coalg.basis(None, kc.wcap)
    cmod = GradedModule([(c, coalg.degree(c), coalg.weight(c)) for c in ckeys], {c: coalg.key_name(c) for c in ckeys})
    cset = set(ckeys)
    com = DgComodule(coalg, Complex(cmod, {}),
                     lambda c: {k: v for k, v in coalg.delta_key(c).items() if k[1] in cset}, "A*")
    try:
        tw = twist_module(Ash, tau, com, kc.wcap)
    except StructuralError as exc:
        return TwistMatch(False, tv.ok, 0, str(exc))

    def theta(key) -> Vec:
        b, c = key
        kb = kc.a_shriek_key_to_k(b)
        kcm = tuple([0] * nb) + tuple(c) + (0,) * (K.n - nb - s.rank_m)
        return K.mul_keys(kb, kcm)

    kset = set(kc.complex.module.keys)
    images = {}
    seen = set()
    for key in tw.module.keys:
        v = theta(key)
        if len(v) != 1:
            return TwistMatch(False, tv.ok, len(images), f"{tw.module.names[key]} is not sent to a monomial")
        t = next(iter(v))
        if t not in kset or t in seen:
            return TwistMatch(False, tv.ok, len(images), f"{tw.module.names[key]} has no partner")
        seen.add(t)
        images[key] = v
    if seen != kset:
        return TwistMatch(False, tv.ok, len(images), "bijection misses basis elements of K")
    f = GradedMap(tw.module, kc.complex.module, 0, images)
    try:
        check_chain_map(f, tw.complex, kc.complex)
    except NotAChainMap as exc:
        return TwistMatch(False, tv.ok, len(images), str(exc))
    return TwistMatch(tv.ok, tv.ok, len(images))


# -- Heisenberg embeddings -------------------------------------------------------

def iota_A(kc: KoszulComplex):
    """Generator images of ``A`` in ``Heis(L + L*)`` and the extension to monomials."""
    s, H = kc.scenario, kc.heis
    nb, nl = len(s.base), 2 * s.rank_m + s.rank_n
    gens: list = [H.gen(i) for i in range(nb)]
    for i in range(s.rank_m):
        gens.append(H.gen(nb + nl + i))
    for j in range(s.rank_n):
        e: Vec = dict(H.gen(nb + s.rank_m + j))
        for i in range(s.rank_m):
            for mono, c in _times(s.phi[j][i], H.gens[nb + i].name).items():
                axpy(e, c, {H.parse_monomial(mono): ONE})
        gens.append(e)
    return gens


def iota_shriek(kc: KoszulComplex):
    s, H = kc.scenario, kc.heis
    nb = len(s.base)
    gens: list = [H.gen(i) for i in range(nb)]
    for j in range(s.rank_n):
        gens.append(H.gen(nb + s.rank_m + j))
    for i in range(s.rank_m):
        gens.append(H.gen(nb + s.rank_m + s.rank_n + i))
    return gens


def _extend(H: PBWAlgebra, gen_images: Sequence, mono) -> Vec:
    v = H.one()
    for i, e in enumerate(mono):
        for _ in range(e):
            v = H.mul(v, gen_images[i])
    return v


def _image_of(H: PBWAlgebra, src: PBWAlgebra, gen_images: Sequence, x: Mapping) -> Vec:
    out: Vec = {}
    for m, c in x.items():
        axpy(out, c, _extend(H, gen_images, m))
    return out


@dataclass
class EmbeddingVerdict:
    ok: bool
    relations: dict               # "A" / "A!" -> True or a witness string
    differentials: dict
    injective: dict
    heis_dg: bool
    commutation_generators: bool
    operator_pairs: int
    operator_ok: bool
    witness: str | None = None


def _relation_check(H, src, imgs) -> str | None:
    for h in range(src.n):
        for j in range(h, src.n):
            gh, gj = src.gens[h], src.gens[j]
            lhs = H.mul(imgs[h], imgs[j])
            axpy(lhs, -koszul(gh.degree, gj.degree), H.mul(imgs[j], imgs[h]))
            rel = src.omega.get((h, j), {})
            rhs = _image_of(H, src, imgs, rel)
            if lhs != rhs:
                return f"[{gh.name}, {gj.name}]"
    return None


def _diff_check(H, src, imgs) -> str | None:
    for i in range(src.n):
        if H.d(imgs[i]) != _image_of(H, src, imgs, src.d_key(src.generator_keys()[i])):
            return f"d({src.gens[i].name})"
    return None


def heis_is_dg(H: PBWAlgebra) -> str | None:
    """``d`` is compatible with the commutation relations and squares to zero
    on generators."""
    for h in range(H.n):
        if H.d(H.d(H.gen(h))):
            return f"d^2({H.gens[h].name})"
        for j in range(h, H.n):
            gh, gj = H.gen(h), H.gen(j)
            lhs = H.mul(H.d(gh), gj)
            axpy(lhs, koszul(1, H.gens[h].degree), H.mul(gh, H.d(gj)))
            s = koszul(H.gens[h].degree, H.gens[j].degree)
            rhs = H.mul(H.d(gj), gh)
            axpy(rhs, koszul(1, H.gens[j].degree), H.mul(gj, H.d(gh)))
            axpy(lhs, -s, rhs)
            if lhs != H.d(H.omega.get((h, j), {})):
                return f"d[{H.gens[h].name}, {H.gens[j].name}]"
    return None


def heisenberg_embeddings(kc: KoszulComplex, window: DegreeWindow | None = None,
                          operator_wcap: int | None = None) -> EmbeddingVerdict:
    """Checks that ``A`` and ``A!`` map to ``Heis(L + L*)`` as dg-algebras,
    injectively, with graded-commuting images; then checks commutation as
    operators on ``K`` for all in-window basis pairs."""
    window = window or kc.window
    H, A, Ash = kc.heis, kc.A, kc.A_shriek
    ia, ish = iota_A(kc), iota_shriek(kc)
    relations, diffs, inj = {}, {}, {}
    for name, src, imgs in (("A", A, ia), ("A!", Ash, ish)):
        w = _relation_check(H, src, imgs)
        relations[name] = w or True
        w = _diff_check(H, src, imgs)
        diffs[name] = w or True
    heis_w = heis_is_dg(H)
    comm_ok = True
    for a in ia:
        for b in ish:
            da = _deg(H, a)
            db = _deg(H, b)
            c = H.mul(a, b)
            axpy(c, -koszul(da, db), H.mul(b, a))
            if c:
                comm_ok = False
    a_basis = _finite_basis(A, window)
    sh_cap = operator_wcap if operator_wcap is not None else max(1, kc.wcap // 2)
    sh_basis = [m for m in Ash.basis(window, sh_cap) if not any(m[:len(kc.scenario.base)])]
    for name, src, imgs, basis in (("A", A, ia, a_basis), ("A!", Ash, ish, sh_basis)):
        ech = Echelon()
        ok = True
        for m in basis:
            if ech.add(_extend(H, imgs, m)) is not None:
                ok = False
                break
        inj[name] = ok
    # operator check on K: iota_A(a) iota_A!(b) = (-1)^{|a||b|} iota_A!(b) iota_A(a)
    fock = kc.fock
    kcap = max(0, kc.wcap - sh_cap - 1)
    kkeys = [m for m in kc.K.basis(None, kcap)]
    pairs = 0
    op_ok = True
    witness = None
    a_imgs = {m: _extend(H, ia, m) for m in a_basis}
    b_imgs = {m: _extend(H, ish, m) for m in sh_basis}
    memo: dict = {}

    def act(tag, h, v):
        # operators are applied to basis keys once and then reused
        out: Vec = {}
        for k, c in v.items():
            img = memo.get((tag, k))
            if img is None:
                img = memo[(tag, k)] = fock.apply(h, {k: ONE})
            axpy(out, c, img)
        return out

    for a, ha in a_imgs.items():
        for b, hb in b_imgs.items():
            pairs += 1
            s = koszul(A.degree(a), Ash.degree(b))
            for k in kkeys:
                v = {k: ONE}
                lhs = act(("A", a), ha, act(("A!", b), hb, v))
                axpy(lhs, -s, act(("A!", b), hb, act(("A", a), ha, v)))
                if lhs:
                    op_ok = False
                    witness = witness or f"{A.key_name(a)} vs {Ash.key_name(b)} on {kc.K.key_name(k)}"
                    break
    ok = (all(v is True for v in relations.values()) and all(v is True for v in diffs.values())
          and all(inj.values()) and heis_w is None and comm_ok and op_ok)
    return EmbeddingVerdict(ok, relations, diffs, inj, heis_w is None, comm_ok, pairs, op_ok,
                            witness or heis_w)


def _deg(H: PBWAlgebra, v: Mapping) -> int:
    return H.degree(next(iter(v))) if v else 0


def _finite_basis(A: PBWAlgebra, window: DegreeWindow | None = None) -> list:
    if any(not g.odd for g in A.gens if g.weight != 0):
        raise StructuralError("A has even generators; it is degreewise infinite and is handled through operators")
    return A.basis(window, None)


def fock_is_dg(kc: KoszulComplex, kcap: int | None = None) -> str | None:
    """``[d_K, h] = dh`` on ``K`` for every generator ``h`` of ``Heis(L + L*)``."""
    H, K, fock = kc.heis, kc.K, kc.fock
    kcap = kc.wcap - 1 if kcap is None else kcap
    for k in K.basis(None, kcap):
        v = {k: ONE}
        for j in range(H.n):
            g = H.gen(j)
            lhs = K.d(fock.apply(g, v))
            axpy(lhs, -koszul(H.gens[j].degree, 1), fock.apply(g, K.d(v)))
            if lhs != fock.apply(H.d(g), v):
                return f"{H.gens[j].name} on {K.key_name(k)}"
    return None


# -- End(K) versus A ---------------------------------------------------------------

@dataclass
class EndComparison:
    algebra_map_ok: bool
    chain_map_ok: bool
    linear_ok: bool
    round_trip: dict               # degree -> matrix (list of rows) of R o L
    round_trip_ok: bool
    quasi_iso: QuasiIsoVerdict
    end_dims: dict
    a_dims: dict
    window: DegreeWindow
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return (self.algebra_map_ok and self.chain_map_ok and self.linear_ok and self.round_trip_ok
                and self.quasi_iso.ok)


def end_comparison(kc: KoszulComplex, window: DegreeWindow = DegreeWindow(-2, 2)) -> EndComparison:
    """``a -> (left action of a on K)`` into ``Hom_{A!}(K, K)``.

    ``Hom`` is computed honestly in degrees ``[lo-1, hi+1]``: a map of degree
    ``n`` is determined by its values on the free generators ``a^I``, so it
    suffices to truncate the target above degree ``D = hi + 1 + max |a^I|``
    and the source above ``D - (lo - 1)``."""
    s, K, A, Ash, H = kc.scenario, kc.K, kc.A, kc.A_shriek, kc.heis
    nb = len(s.base)
    if any(g.degree < 1 for g in K.gens[nb:]) or any(g.degree < 0 for g in Ash.gens):
        raise StructuralError("End comparison needs K generated in positive degrees")
    a_basis = _finite_basis(A)
    alpha_keys = [m for m in K.basis(None, s.rank_m)
                  if not any(m[:nb]) and not any(m[nb + s.rank_m:])]
    amax = max((K.degree(m) for m in alpha_keys), default=0)
    lo_n, hi_n = window.lo - 1, window.hi + 1
    D = hi_n + amax
    Ds = D - lo_n
    tgt = _degree_truncation(kc, D)
    src = _degree_truncation(kc, Ds)
    alg_keys = Ash.generator_keys()
    end = hom_complex(src, tgt, DegreeWindow(lo_n, hi_n), alg_keys, label="End")
    ia = iota_A(kc)
    fock = kc.fock
    tset = set(tgt.module.keys)

    def left(a) -> dict:
        ha = _extend(H, ia, a)
        out = {}
        for k in src.module.keys:
            img = {t: c for t, c in fock.apply(ha, {k: ONE}).items() if t in tset}
            if img:
                out[k] = img
        return out

    witness = None
    # algebra map: L_a L_b = L_{ab} on K
    alg_ok = True
    kcheck = K.basis(None, max(1, kc.wcap - 2))
    images = {a: _extend(H, ia, a) for a in a_basis}
    for a in a_basis:
        for b in a_basis:
            ab = A.mul_keys(a, b)
            hab: Vec = {}
            for m, c in ab.items():
                axpy(hab, c, images[m])
            for k in kcheck:
                v = {k: ONE}
                if fock.apply(images[a], fock.apply(images[b], v)) != fock.apply(hab, v):
                    alg_ok = False
                    witness = witness or f"L({A.key_name(a)}) L({A.key_name(b)}) != L(product)"
                    break
    # linearity and the map A -> End
    amod = GradedModule([(a, A.degree(a), 0) for a in a_basis], {a: A.key_name(a) for a in a_basis})
    acx = Complex(amod, {a: A.d_key(a) for a in a_basis})
    lin_ok = True
    coords = {}
    for a in a_basis:
        n = A.degree(a)
        if not lo_n <= n <= hi_n:
            continue
        f = left(a)
        v = end.element(f, n)
        if v is None:
            lin_ok = False
            witness = witness or f"L({A.key_name(a)}) is not A!-linear"
            continue
        coords[a] = v
    chain_ok = True
    for a in coords:
        n = A.degree(a)
        if n + 1 > hi_n:
            continue
        df = end.apply_d(left(a), n)
        da: dict = {}
        for m, c in A.d_key(a).items():
            for k, w in left(m).items():
                axpy(da.setdefault(k, {}), c, w)
        da = {k: w for k, w in da.items() if w}
        if _flat(df) != _flat(da):
            chain_ok = False
            witness = witness or f"D(L({A.key_name(a)})) != L(d {A.key_name(a)})"
    fmap = GradedMap(amod, end.module, 0, {a: coords.get(a, {}) for a in a_basis}, check=False)
    qi = is_quasi_iso(fmap, acx, end.complex, window)
    # round trip R: End -> A, f -> sum_I Y(eps f(a^I)) x^I (-1)^{k(k-1)/2}
    rt: dict = {}
    rt_ok = True
    for a in a_basis:
        if a not in coords:
            continue
        back = round_trip_value(kc, left(a))
        n = A.degree(a)
        rt.setdefault(n, {})[a] = back
        if back != {a: ONE}:
            rt_ok = False
            witness = witness or f"round trip sends {A.key_name(a)} to {back}"
    matrices = {}
    for n, rows in rt.items():
        keys = [a for a in a_basis if A.degree(a) == n]
        matrices[n] = [[str(rows.get(a, {}).get(b, 0)) for b in keys] for a in keys]
    a_dims: dict = {}
    for a in a_basis:
        a_dims[A.degree(a)] = a_dims.get(A.degree(a), 0) + 1
    hd = cohomology(end.complex, window, representatives=False).dims
    return EndComparison(alg_ok, chain_ok, lin_ok, matrices, rt_ok, qi,
                         {d: hd.get(d, 0) for d in window.degrees()},
                         {d: a_dims.get(d, 0) for d in window.degrees()}, window, witness)


def _flat(f: Mapping) -> dict:
    return {(k, t): c for k, v in f.items() for t, c in v.items() if c}


def round_trip_value(kc: KoszulComplex, f: Mapping) -> Vec:
    """Image in ``A`` of an ``A!``-linear endomorphism (given on basis keys of
    ``K``) under ``End(K) -> Hom(K, S) = A``."""
    s, K, A, S = kc.scenario, kc.K, kc.A, kc.S
    nb = len(s.base)
    out: Vec = {}
    for m in K.basis(None, s.rank_m):
        if any(m[:nb]) or any(m[nb + s.rank_m:]):
            continue
        val = f.get(m, {})
        k = sum(m[nb:nb + s.rank_m])
        sign = -1 if (k * (k - 1) // 2) % 2 else 1
        xm = tuple([0] * nb) + tuple(m[nb:nb + s.rank_m]) + (0,) * s.rank_n
        for t, c in val.items():
            if any(t[nb:nb + s.rank_m]) or any(t[nb + s.rank_m + s.rank_n:]):
                continue
            ym = tuple(t[:nb]) + (0,) * s.rank_m + tuple(t[nb + s.rank_m:nb + s.rank_m + s.rank_n])
            axpy(out, sign * c, A.mul_keys(ym, xm))
    return out


def _degree_truncation(kc: KoszulComplex, D: int) -> DgModule:
    """``K / K^{>D}`` as a dg-module over ``A!`` (a quotient since ``A!`` and
    ``d`` do not lower degrees)."""
    K = kc.K
    nb = len(kc.scenario.base)
    mind = min((g.degree for g in K.gens[nb:]), default=1)
    keys = [m for m in K.basis(None, D // mind) if K.degree(m) <= D]
    mod, keyset = _truncated(K, keys, "K")
    images = {m: {t: c for t, c in K.d_key(m).items() if t in keyset} for m in keys}

    def act(a, m):
        km = kc.a_shriek_key_to_k(a)
        return {t: c for t, c in K.mul_keys(km, m).items() if t in keyset}

    return DgModule(kc.A_shriek, Complex(mod, images), act, f"K/K>{D}")


# -- the classical Koszul complex ----------------------------------------------------

@dataclass
class ClassicalKoszul:
    A: PBWAlgebra
    A_shriek: PBWAlgebra
    K: PBWAlgebra
    wcap: int
    dims: dict
    expected: dict
    actions_ok: bool
    heisenberg_ok: bool
    witness: str | None = None

    @property
    def ok(self) -> bool:
        return self.dims == self.expected and self.actions_ok and self.heisenberg_ok


def classical_koszul(m_degrees: Sequence[int], wcap: int = 6,
                     window: DegreeWindow = DegreeWindow(-6, 6)) -> ClassicalKoszul:
    """``K = Sym(C)`` for ``C`` the cone of ``id_M`` shifted so that
    ``xi_i`` (degree ``mu_i - 1``) has ``d xi_i = x_i``.  ``A = Sym(M)`` acts
    by multiplication and ``A! = Sym(M*[-1])`` by ``d/dxi``."""
    xs = [f"x{i + 1}" if len(m_degrees) > 1 else "x" for i in range(len(m_degrees))]
    xis = [f"xi{i + 1}" if len(m_degrees) > 1 else "xi" for i in range(len(m_degrees))]
    A = sym_algebra([Generator(x, d, 1) for x, d in zip(xs, m_degrees)], name="Sym(M)")
    Ash = sym_algebra([Generator(f"e{i + 1}", 1 - d, 1) for i, d in enumerate(m_degrees)], name="Sym(M*[-1])")
    gens = [Generator(x, d, 1) for x, d in zip(xs, m_degrees)] + [Generator(z, d - 1, 1) for z, d in zip(xis, m_degrees)]
    K = sym_algebra(gens, {z: {x: 1} for x, z in zip(xs, xis)}, name="K")
    keys = K.basis(None, wcap)
    mod, _ = _truncated(K, keys, "K")
    cx = Complex.build(mod, K.d_key)
    h = cohomology(cx, window, representatives=False)
    dims = {d: v for d, v in h.dims.items() if v}
    expected = {0: 1} if 0 in window else {}
    r = len(m_degrees)
    # Heis(M + M*) (x) Heis(M[1] + M*[-1]) acting on K = Sym(x, xi)
    duals = [Generator(g.name + "'", -g.degree, -1) for g in gens]
    heis = PBWAlgebra(gens + duals, {(dg.name, g.name): 1 for g, dg in zip(gens, duals)}, name="Heis")
    fock = FockAction(heis, K)
    mult = [heis.gen(i) for i in range(r)]                  # A: multiplication by x_i
    der = [heis.gen(2 * r + r + i) for i in range(r)]       # A!: d/dxi_i
    witness = None
    actions_ok = True
    for k in K.basis(None, max(0, wcap - 1)):
        v = {k: ONE}
        for op in mult + der:
            deg = _deg(heis, op)
            lhs = K.d(fock.apply(op, v))
            axpy(lhs, -koszul(deg, 1), fock.apply(op, K.d(v)))
            if lhs:
                actions_ok = False
                witness = witness or f"action does not commute with d on {K.key_name(k)}"
        for a in mult:
            for b in der:
                s = koszul(_deg(heis, a), _deg(heis, b))
                lhs = fock.apply(a, fock.apply(b, v))
                axpy(lhs, -s, fock.apply(b, fock.apply(a, v)))
                if lhs:
                    actions_ok = False
                    witness = witness or f"A and A! actions do not commute on {K.key_name(k)}"
    heis_ok = True
    for k in K.basis(None, max(0, wcap - 1)):
        v = {k: ONE}
        for i in range(2 * r):
            for j in range(2 * r):
                a, b = heis.gen(2 * r + i), heis.gen(j)
                lhs = fock.apply(a, fock.apply(b, v))
                axpy(lhs, -koszul(heis.gens[2 * r + i].degree, heis.gens[j].degree), fock.apply(b, fock.apply(a, v)))
                if lhs != ({k: ONE} if i == j else {}):
                    heis_ok = False
                    witness = witness or f"Heisenberg relation fails on {K.key_name(k)}"
    return ClassicalKoszul(A, Ash, K, wcap, dims, expected, actions_ok, heis_ok, witness)
