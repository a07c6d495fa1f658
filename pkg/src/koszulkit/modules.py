"""Left dg-modules, Hom complexes, quotients, adjunction checks and
filtered extensions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .algebra import Witness, diff, koszul, mul
from .graded import (Complex, DegreeWindow, GradedMap, GradedModule, StructuralError,
                     check_chain_map, NotAChainMap)
from .linalg import ONE, Echelon, Vec, axpy, nullspace, vscale


class DgModule:
    """A finite graded module over an algebra object with a degree +1
    differential and an action ``act_key(a, m)``."""

    def __init__(self, algebra, complex_: Complex, action: Callable[[Hashable, Hashable], Mapping],
                 name: str = ""):
        self.algebra = algebra
        self.complex = complex_
        self.module = complex_.module
        self.d = complex_.d
        self._action = action
        self._cache: dict = {}
        self.name = name

    def act_key(self, a, m) -> Vec:
        key = (a, m)
        hit = self._cache.get(key)
        if hit is None:
            hit = {t: c for t, c in self._action(a, m).items() if c}
            self._cache[key] = hit
        return hit

    def act(self, x: Mapping, v: Mapping) -> Vec:
        out: Vec = {}
        for a, ca in x.items():
            for m, cm in v.items():
                axpy(out, ca * cm, self.act_key(a, m))
        return out

    def degree(self, m) -> int:
        return self.module.degree[m]

    def __repr__(self) -> str:
        return f"DgModule({self.name or ''} dims={self.module.dims()})"

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_generators(cls, algebra, module: GradedModule, d_images: Mapping,
                        ops: Mapping[str, Mapping], name: str = "") -> DgModule:
        """Action of a PBW algebra given by one operator per generator name;
        a monomial acts by composing generator operators right to left."""
        n = algebra.n
        gen_ops = [None] * n
        for gname, op in ops.items():
            gen_ops[algebra.index[gname]] = {k: dict(v) for k, v in op.items()}

        def action(mono, m):
            word = [i for i, e in enumerate(mono) for _ in range(e)]
            cur = {m: ONE}
            for i in reversed(word):
                op = gen_ops[i]
                if op is None:
                    return {}
                nxt: Vec = {}
                for k, c in cur.items():
                    axpy(nxt, c, op.get(k, {}))
                cur = nxt
                if not cur:
                    break
            return cur

        return cls(algebra, Complex(module, d_images), action, name)

    @classmethod
    def from_table(cls, algebra, module: GradedModule, d_images: Mapping, table: Mapping,
                   name: str = "") -> DgModule:
        one = algebra.one_key

        def action(a, m):
            if a == one:
                return {m: ONE}
            return table.get((a, m), {})

        return cls(algebra, Complex(module, d_images), action, name)

    @classmethod
    def trivial(cls, algebra, degree: int = 0, name: str = "k") -> DgModule:
        """The base field through the augmentation."""
        m = GradedModule([("1", degree, 0)], {"1": name})

        def action(a, k):
            c = algebra.epsilon_key(a)
            return {k: c} if c else {}

        return cls(algebra, Complex(m, {}), action, name)

    @classmethod
    def free(cls, algebra, gens: Sequence[tuple], wcap: int, d_gens: Mapping | None = None,
             name: str = "") -> DgModule:
        """``A (x) V`` modulo weights above ``wcap``.  ``gens`` are
        ``(name, degree, weight)``; ``d_gens[v]`` is a vector in keys
        ``(a_key, gen_name)``."""
        d_gens = d_gens or {}
        gdeg = {g[0]: g[1] for g in gens}
        gwt = {g[0]: (g[2] if len(g) > 2 else 0) for g in gens}
        keys = []
        for a in algebra.basis(None, wcap):
            for g in gens:
                if algebra.weight(a) + gwt[g[0]] <= wcap:
                    keys.append((a, g[0]))
        m = GradedModule([(k, algebra.degree(k[0]) + gdeg[k[1]], algebra.weight(k[0]) + gwt[k[1]])
                          for k in keys],
                         {k: _free_name(algebra.key_name(k[0]), k[1]) for k in keys})
        keyset = set(keys)

        def action(b, k):
            out = {}
            for p, c in algebra.mul_keys(b, k[0]).items():
                if (p, k[1]) in keyset:
                    out[(p, k[1])] = c
            return out

        def dfun(k):
            a, g = k
            out: Vec = {}
            for p, c in algebra.d_key(a).items():
                axpy(out, c, {(p, g): ONE})
            s = -1 if algebra.degree(a) % 2 else 1
            for (b, h), c in d_gens.get(g, {}).items():
                for p, cp in algebra.mul_keys(a, b).items():
                    axpy(out, s * c * cp, {(p, h): ONE})
            return {t: c for t, c in out.items() if t in keyset}

        images = {k: dfun(k) for k in keys}
        return cls(algebra, Complex(m, images), action, name or "free")


def _free_name(a: str, g: str) -> str:
    return g if a == "1" else f"{a}.{g}"


def check_module(mod: DgModule, alg_keys: Sequence, pairs: bool = True) -> Witness | None:
    """Unit, Leibniz and associativity of the action on the given algebra keys."""
    alg = mod.algebra
    name = mod.module.names
    for m in mod.module.keys:
        if mod.act_key(alg.one_key, m) != {m: ONE}:
            return Witness("unit acts as identity", (name[m],))
    for a in alg_keys:
        s = -1 if alg.degree(a) % 2 else 1
        for m in mod.module.keys:
            lhs = mod.d(mod.act_key(a, m))
            rhs = mod.act(alg.d_key(a), {m: ONE})
            axpy(rhs, s, mod.act({a: ONE}, mod.d.image(m)))
            if lhs != rhs:
                return Witness("Leibniz rule for the action", (alg.key_name(a), name[m]))
    if pairs:
        for a in alg_keys:
            for b in alg_keys:
                ab = alg.mul_keys(a, b)
                for m in mod.module.keys:
                    if mod.act(ab, {m: ONE}) != mod.act({a: ONE}, mod.act_key(b, m)):
                        return Witness("associativity of the action",
                                       (alg.key_name(a), alg.key_name(b), name[m]))
    return None


# -- Hom complexes -------------------------------------------------------------

class HomComplex:
    """Graded Hom between finite modules (over an algebra or over the base),
    with differential ``f -> d f - (-1)^{|f|} f d``.

    Elements are stored as maps ``{source_key: {target_key: c}}``; the complex
    uses a basis of such maps per degree.
    """

    def __init__(self, source: GradedModule, target: GradedModule, d_source: GradedMap,
                 d_target: GradedMap, degrees: DegreeWindow | None = None,
                 constraints: Callable[[int], list[Callable[[Hashable, Hashable], Vec]]] | None = None,
                 differential: Callable[[dict, int], dict] | None = None, label: str = ""):
        self.source, self.target = source, target
        self.d_source, self.d_target = d_source, d_target
        if degrees is None:
            sd, td = source.degrees(), target.degrees()
            if not sd or not td:
                degrees = DegreeWindow(0, 0)
                complete = True
            else:
                degrees = DegreeWindow(min(td) - max(sd), max(td) - min(sd))
                complete = True
        else:
            complete = False
        self.degrees = degrees
        self._constraints = constraints
        self._custom_d = differential
        self.label = label
        self.basis_maps: dict[int, list[dict]] = {}
        self._echelons: dict[int, Echelon] = {}
        for n in degrees.degrees():
            maps = self._degree_basis(n)
            self.basis_maps[n] = maps
            ech = Echelon(track=True)
            for i, f in enumerate(maps):
                ech.add(_flatten(f), i)
            self._echelons[n] = ech
        basis, names = [], {}
        for n, maps in self.basis_maps.items():
            for i in range(len(maps)):
                basis.append(((n, i), n, 0))
                names[(n, i)] = f"{label or 'hom'}[{n}]#{i}"
        self.module = GradedModule(basis, names)
        images = {}
        for n, maps in self.basis_maps.items():
            if n + 1 not in degrees:
                continue
            for i, f in enumerate(maps):
                df = self.apply_d(f, n)
                coords = self.coordinates(df, n + 1)
                if coords is None:
                    raise StructuralError(f"differential of a degree-{n} map is not in the Hom space")
                images[(n, i)] = {(n + 1, j): c for j, c in coords.items()}
        self.complex = Complex(self.module, images, None if complete else degrees, label=label)

    def _degree_basis(self, n: int) -> list[dict]:
        unknowns = [(k, t) for k in self.source.keys for t in self.target.in_degree(self.source.degree[k] + n)]
        if not unknowns:
            return []
        if self._constraints is None:
            return [{k: {t: ONE}} for k, t in unknowns]
        cons = self._constraints(n)
        columns = {}
        for (k, t) in unknowns:
            col: Vec = {}
            for ci, c in enumerate(cons):
                for row, v in c(k, t).items():
                    axpy(col, v, {(ci, row): ONE})
            columns[(k, t)] = col
        out = []
        for vec in nullspace(columns):
            f: dict = {}
            for (k, t), c in vec.items():
                f.setdefault(k, {})[t] = c
            out.append(f)
        return out

    def apply_d(self, f: Mapping, n: int) -> dict:
        if self._custom_d is not None:
            return self._custom_d(f, n)
        return hom_differential(f, n, self.d_source, self.d_target)

    def coordinates(self, f: Mapping, n: int) -> Vec | None:
        if n not in self._echelons:
            return None if _flatten(f) else {}
        return self._echelons[n].express(_flatten(f))

    def element(self, f: Mapping, n: int) -> Vec | None:
        coords = self.coordinates(f, n)
        if coords is None:
            return None
        return {(n, i): c for i, c in coords.items()}

    def as_map(self, v: Mapping) -> dict:
        out: dict = {}
        for (n, i), c in v.items():
            for k, img in self.basis_maps[n][i].items():
                axpy(out.setdefault(k, {}), c, img)
        return {k: img for k, img in out.items() if img}

    def dims(self) -> dict:
        return {n: len(v) for n, v in self.basis_maps.items()}


def _flatten(f: Mapping) -> Vec:
    out = {}
    for k, img in f.items():
        for t, c in img.items():
            if c:
                out[(k, t)] = c
    return out


def apply_map(f: Mapping, v: Mapping) -> Vec:
    out: Vec = {}
    for k, c in v.items():
        img = f.get(k)
        if img:
            axpy(out, c, img)
    return out


def hom_differential(f: Mapping, n: int, d_source: GradedMap, d_target: GradedMap) -> dict:
    sign = -1 if n % 2 else 1
    out: dict = {}
    for k in d_source.source.keys:
        img = d_target(f.get(k, {}))
        axpy(img, -sign, apply_map(f, d_source.image(k)))
        if img:
            out[k] = img
    return out


def linearity_constraints(m: DgModule, n_mod: DgModule, alg_keys: Sequence):
    """Constraints ``f(a m) - (-1)^{|f||a|} a f(m) = 0`` for generator keys ``a``."""
    alg = m.algebra

    def make(n):
        cons = []
        for a in alg_keys:
            s = koszul(n, alg.degree(a))
            # coefficient of unknown (k -> t) in the (a, j) equation
            pre: dict = {}
            for j in m.module.keys:
                for k, c in m.act_key(a, j).items():
                    pre.setdefault(k, []).append((j, c))

            def con(k, t, a=a, s=s, pre=pre):
                out: Vec = {}
                for j, c in pre.get(k, ()):
                    out[(j, t)] = out.get((j, t), 0) + c
                for t2, c in n_mod.act_key(a, t).items():
                    axpy(out, -s * c, {(k, t2): ONE})
                return {r: v for r, v in out.items() if v}

            cons.append(con)
        return cons

    return make


def hom_complex(m: DgModule, n_mod: DgModule, degrees: DegreeWindow | None = None,
                alg_keys: Sequence | None = None, label: str = "Hom_A") -> HomComplex:
    """``Hom_A(M, N)``; linearity is imposed on ``alg_keys`` (default: the
    algebra generators)."""
    if m.algebra is not n_mod.algebra:
        raise StructuralError("modules are over different algebras")
    keys = list(alg_keys) if alg_keys is not None else m.algebra.generator_keys()
    return HomComplex(m.module, n_mod.module, m.d, n_mod.d, degrees,
                      linearity_constraints(m, n_mod, keys), label=label)


def hom_base(src: Complex, tgt: Complex, degrees: DegreeWindow | None = None, label: str = "Hom_R") -> HomComplex:
    return HomComplex(src.module, tgt.module, src.d, tgt.d, degrees, None, label=label)


# -- quotients -----------------------------------------------------------------

class Quotient:
    """``V / W`` for a finite based ``V``; the non-pivot keys of a reduced
    echelon basis of ``W`` form a basis of the quotient."""

    def __init__(self, module: GradedModule, relations: Iterable[Mapping]):
        self.ambient = module
        self.ech = Echelon(order=module.index.__getitem__)
        for r in relations:
            self.ech.add(r)
        keys = [k for k in module.keys if k not in self.ech.rows]
        self.module = GradedModule([(k, module.degree[k], module.weight[k]) for k in keys],
                                   {k: module.names[k] for k in keys})

    def reduce(self, v: Mapping) -> Vec:
        rem, _ = self.ech.reduce(v)
        return rem


def quotient_module(mod: DgModule, relations: Iterable[Mapping], name: str = "") -> tuple[DgModule, Quotient]:
    """Quotient by the submodule generated (as a subcomplex and submodule) by
    ``relations``; the caller supplies relations closed under d and the action."""
    q = Quotient(mod.module, relations)
    images = {k: q.reduce(mod.d.image(k)) for k in q.module.keys}

    def action(a, k):
        return q.reduce(mod.act_key(a, k))

    return DgModule(mod.algebra, Complex(q.module, images), action, name), q


# -- adjunctions ---------------------------------------------------------------

@dataclass
class IsoVerdict:
    name: str
    ok: bool
    dims: dict = field(default_factory=dict)
    witness: str | None = None


def check_complex_iso(phi: Callable[[dict, int], dict], src: HomComplex, tgt: HomComplex,
                      name: str) -> IsoVerdict:
    """``phi`` maps Hom-maps of ``src`` (degree n) to Hom-maps of ``tgt``;
    checks bijectivity per degree and commutation with d."""
    dims = {}
    for n, maps in src.basis_maps.items():
        tgt_maps = tgt.basis_maps.get(n, [])
        if len(maps) != len(tgt_maps):
            return IsoVerdict(name, False, dims, f"degree {n}: dimensions {len(maps)} vs {len(tgt_maps)}")
        ech = Echelon()
        for i, f in enumerate(maps):
            g = phi(f, n)
            coords = tgt.coordinates(g, n)
            if coords is None:
                return IsoVerdict(name, False, dims, f"degree {n}: image of basis map {i} leaves the target")
            if ech.add(coords) is not None:
                return IsoVerdict(name, False, dims, f"degree {n}: not injective at basis map {i}")
            if n + 1 in src.degrees and n + 1 in tgt.degrees:
                lhs = tgt.apply_d(g, n)
                rhs = phi(src.apply_d(f, n), n + 1)
                if _flatten(lhs) != _flatten(rhs):
                    return IsoVerdict(name, False, dims, f"degree {n}: does not commute with d on basis map {i}")
        dims[n] = len(maps)
    return IsoVerdict(name, True, dims)


def restriction_adjunction(mod: DgModule, target: Complex, alg_keys: Sequence) -> IsoVerdict:
    """``Hom_R(M|_R, X) = Hom_A(M, Hom_R(A, X))`` for a finite algebra given
    on the basis ``alg_keys``."""
    alg = mod.algebra
    akeys = list(alg_keys)
    a_mod = GradedModule([(a, alg.degree(a)) for a in akeys], {a: alg.key_name(a) for a in akeys})
    a_cx = Complex.build(a_mod, alg.d_key)
    coind = hom_base(a_cx, target, label="Hom_R(A,X)")
    keyset = set(akeys)

    def coind_action(a, h):
        n, i = h
        f = coind.basis_maps[n][i]
        # (a f)(b) = (-1)^{|a|(|f|+|b|)} f(b a)
        g = {}
        for b in akeys:
            ba = alg.mul_keys(b, a)
            if any(t not in keyset for t in ba):
                raise StructuralError("algebra basis is not closed under products")
            img = apply_map(f, ba)
            if img:
                g[b] = vscale(koszul(alg.degree(a), n + alg.degree(b)), img)
        return coind.element(g, n + alg.degree(a)) or {}

    coind_mod = DgModule(alg, coind.complex, coind_action, "Hom_R(A,X)")
    lhs = hom_base(mod.complex, target, label="Hom_R(M,X)")
    rhs = hom_complex(mod, coind_mod, alg_keys=[a for a in alg.generator_keys() if a in keyset], label="Hom_A(M,Hom_R(A,X))")

    def phi(g, n):
        # Phi(g)(m)(b) = (-1)^{|b||m|} g(b m)
        out = {}
        for m in mod.module.keys:
            h = {}
            for b in akeys:
                img = apply_map(g, mod.act_key(b, m))
                if img:
                    h[b] = vscale(koszul(alg.degree(b), mod.module.degree[m]), img)
            vec = coind.element(h, n + mod.module.degree[m])
            if vec:
                out[m] = vec
        return out

    return check_complex_iso(phi, lhs, rhs, "restriction")


def extension_adjunction(mod: DgModule, target: DgModule, f_map: Callable[[Hashable], Mapping],
                         wcap: int) -> IsoVerdict:
    """``Hom_A(A (x)_B M, N) = Hom_B(M, N|_B)`` for an algebra map ``f: B -> A``.

    ``mod`` is over ``B``, ``target`` over ``A``.  ``A (x)_B M`` is computed
    as a genuine quotient of ``A (x) M`` truncated at weight ``wcap``.
    """
    b_alg, a_alg = mod.algebra, target.algebra
    akeys = a_alg.basis(None, wcap)
    pairs = [(a, m) for a in akeys for m in mod.module.keys
             if a_alg.weight(a) + mod.module.weight[m] <= wcap]
    keyset = set(pairs)
    amb = GradedModule([((a, m), a_alg.degree(a) + mod.module.degree[m],
                         a_alg.weight(a) + mod.module.weight[m]) for a, m in pairs],
                       {(a, m): f"{a_alg.key_name(a)}(x){mod.module.names[m]}" for a, m in pairs})

    def trunc(v):
        return {k: c for k, c in v.items() if k in keyset}

    relations = []
    for a in akeys:
        for b in b_alg.generator_keys():
            fb = f_map(b)
            for m in mod.module.keys:
                if (a, m) not in keyset:
                    continue
                # a f(b) (x) m - a (x) b m
                rel: Vec = {}
                for p, c in mul(a_alg, {a: ONE}, fb).items():
                    axpy(rel, c, {(p, m): ONE})
                for m2, c in mod.act_key(b, m).items():
                    axpy(rel, -c, {(a, m2): ONE})
                rel = trunc(rel)
                if rel:
                    relations.append(rel)

    def dfun(k):
        a, m = k
        out: Vec = {}
        for p, c in a_alg.d_key(a).items():
            axpy(out, c, {(p, m): ONE})
        s = -1 if a_alg.degree(a) % 2 else 1
        for m2, c in mod.d.image(m).items():
            axpy(out, s * c, {(a, m2): ONE})
        return trunc(out)

    def act(a2, k):
        a, m = k
        return trunc({(p, m): c for p, c in a_alg.mul_keys(a2, a).items()})

    ambient = DgModule(a_alg, Complex(amb, {k: dfun(k) for k in pairs}, check=False), act)
    ext, q = quotient_module(ambient, relations, "A(x)_B M")
    restricted = DgModule(b_alg, target.complex,
                          lambda b, n: target.act(f_map(b), {n: ONE}), "N|_B")
    lhs = hom_complex(ext, target, label="Hom_A(A(x)_B M,N)")
    rhs = hom_complex(mod, restricted, label="Hom_B(M,N|_B)")
    one = a_alg.one_key

    def phi(g, n):
        # g in Hom_A(A (x)_B M, N)  ->  m -> g(1 (x) m)
        return {m: apply_map(g, q.reduce({(one, m): ONE})) for m in mod.module.keys
                if apply_map(g, q.reduce({(one, m): ONE}))}

    return check_complex_iso(phi, lhs, rhs, "extension")


def tensor_adjunction(m1: DgModule, m2: DgModule, target: DgModule) -> IsoVerdict:
    """``Hom_A(M (x)_A N, X) = Hom_A(M, Hom_A(N, X))`` over a graded-commutative
    algebra, left modules regarded as bimodules via ``m a = (-1)^{|a||m|} a m``."""
    alg = m1.algebra
    gens = alg.generator_keys()
    pairs = [(x, y) for x in m1.module.keys for y in m2.module.keys]
    amb = GradedModule([((x, y), m1.module.degree[x] + m2.module.degree[y],
                         m1.module.weight[x] + m2.module.weight[y]) for x, y in pairs],
                       {(x, y): f"{m1.module.names[x]}(x){m2.module.names[y]}" for x, y in pairs})
    relations = []
    for x in m1.module.keys:
        for a in gens:
            s = koszul(alg.degree(a), m1.module.degree[x])
            for y in m2.module.keys:
                rel: Vec = {}
                for x2, c in m1.act_key(a, x).items():
                    axpy(rel, s * c, {(x2, y): ONE})
                for y2, c in m2.act_key(a, y).items():
                    axpy(rel, -c, {(x, y2): ONE})
                if rel:
                    relations.append(rel)

    def dfun(k):
        x, y = k
        out: Vec = {}
        for x2, c in m1.d.image(x).items():
            axpy(out, c, {(x2, y): ONE})
        s = -1 if m1.module.degree[x] % 2 else 1
        for y2, c in m2.d.image(y).items():
            axpy(out, s * c, {(x, y2): ONE})
        return out

    def act(a, k):
        x, y = k
        return {(x2, y): c for x2, c in m1.act_key(a, x).items()}

    ambient = DgModule(alg, Complex(amb, {k: dfun(k) for k in pairs}), act)
    tens, q = quotient_module(ambient, relations, "M(x)_A N")
    inner = hom_complex(m2, target, label="Hom_A(N,X)")

    def inner_action(a, h):
        n, i = h
        f = inner.basis_maps[n][i]
        # (a f)(y) = a f(y), A-linear because A is graded-commutative
        g = {y: target.act({a: ONE}, img) for y, img in f.items()}
        g = {y: v for y, v in g.items() if v}
        return inner.element(g, n + alg.degree(a)) or {}

    inner_mod = DgModule(alg, inner.complex, inner_action, "Hom_A(N,X)")
    lhs = hom_complex(tens, target, label="Hom_A(M(x)N,X)")
    rhs = hom_complex(m1, inner_mod, label="Hom_A(M,Hom_A(N,X))")

    def phi(g, n):
        out = {}
        for x in m1.module.keys:
            h = {}
            for y in m2.module.keys:
                img = apply_map(g, q.reduce({(x, y): ONE}))
                if img:
                    h[y] = img
            vec = inner.element(h, n + m1.module.degree[x])
            if vec:
                out[x] = vec
        return out

    return check_complex_iso(phi, lhs, rhs, "tensor")


# -- filtered extensions -------------------------------------------------------

@dataclass
class FilteredModule:
    module: DgModule
    pieces: list          # list of key lists, F^0 part first
    free_pieces: bool     # every graded piece is a free module with zero internal d-twist

    @property
    def semifree(self) -> bool:
        return self.free_pieces


def filtered_extension(pieces: Sequence[DgModule], glue: Mapping | None = None,
                       free: Sequence[Sequence[Hashable]] | None = None) -> FilteredModule:
    """Total module ``P_0 + P_1 + ...`` with differential ``d_i`` on each piece
    plus glue maps ``glue[(j, i)]: P_j -> P_i`` (``i < j``) of degree +1,
    given as ``{key: vector}``.  Glue maps must be linear over the algebra.

    ``free`` optionally lists, for each piece, module generators; the piece is
    then checked to be free on them (basis of ``A (x) span(gens)``).
    """
    glue = glue or {}
    if not pieces:
        raise StructuralError("no pieces")
    alg = pieces[0].algebra
    basis, names = [], {}
    for i, p in enumerate(pieces):
        if p.algebra is not alg:
            raise StructuralError("pieces over different algebras")
        for k in p.module.keys:
            basis.append(((i, k), p.module.degree[k], p.module.weight[k]))
            names[(i, k)] = p.module.names[k] if len(pieces) == 1 else f"{p.module.names[k]}@{i}"
    m = GradedModule(basis, names)
    images = {}
    for i, p in enumerate(pieces):
        for k in p.module.keys:
            img = {(i, t): c for t, c in p.d.image(k).items()}
            for (j, i2), gmap in glue.items():
                if j != i:
                    continue
                if i2 >= j:
                    raise StructuralError("glue maps must point to earlier pieces")
                for t, c in gmap.get(k, {}).items():
                    axpy(img, c, {(i2, t): ONE})
            images[(i, k)] = img
    try:
        cx = Complex(m, images)
    except StructuralError as exc:
        raise StructuralError(f"total differential does not square to zero ({exc})") from None

    def action(a, key):
        i, k = key
        return {(i, t): c for t, c in pieces[i].act_key(a, k).items()}

    total = DgModule(alg, cx, action, "filtered")
    w = check_module(total, alg.generator_keys(), pairs=False)
    if w is not None:
        raise StructuralError(f"glue data is not compatible with the action: {w}")
    free_ok = free is not None and all(
        is_free_on(p, gens) for p, gens in zip(pieces, free))
    return FilteredModule(total, [[(i, k) for k in p.module.keys] for i, p in enumerate(pieces)], free_ok)


def is_free_on(mod: DgModule, gens: Sequence[Hashable], wcap: int | None = None) -> bool:
    """``mod`` has basis ``{a g}`` for ``a`` running over algebra basis keys
    of bounded weight (up to truncation)."""
    alg = mod.algebra
    ech = Echelon()
    count = 0
    maxw = max(mod.module.weight.values(), default=0)
    for g in gens:
        for a in alg.basis(None, maxw if wcap is None else wcap):
            v = mod.act_key(a, g)
            if not v:
                if alg.weight(a) + mod.module.weight[g] <= maxw:
                    return False
                continue
            if ech.add(v) is not None:
                return False
            count += 1
    return count == len(mod.module)
