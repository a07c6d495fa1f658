"""Dg-algebras through a small duck-typed protocol, plus finite tables.

An algebra object provides

* ``degree(k)``, ``weight(k)``, ``key_name(k)`` on basis keys,
* ``one_key``, ``mul_keys(a, b) -> Vec``, ``d_key(k) -> Vec``,
* ``basis(window, wcap)`` and ``generator_keys()``,
* ``augmented`` and ``epsilon_key(k)`` when it has an augmentation.

:class:`~koszulkit.pbw.PBWAlgebra` implements it for infinite algebras;
:class:`TableAlgebra` for finite ones given by structure constants;
:class:`TensorAlgebra` builds graded tensor products with the Koszul sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .graded import DegreeWindow, GradedMap, GradedModule, StructuralError
from .linalg import ONE, ZERO, Vec, axpy, vscale

UNKNOWN = object()


def mul(alg, x: Mapping, y: Mapping) -> Vec:
    out: Vec = {}
    for a, ca in x.items():
        for b, cb in y.items():
            axpy(out, ca * cb, alg.mul_keys(a, b))
    return out


def diff(alg, x: Mapping) -> Vec:
    out: Vec = {}
    for a, c in x.items():
        axpy(out, c, alg.d_key(a))
    return out


def koszul(p: int, q: int) -> int:
    return -1 if (p % 2) and (q % 2) else 1


class TableAlgebra:
    """Finite-dimensional dg-algebra from structure constants.

    ``products[(a, b)]`` lists ``a*b``; missing pairs are zero, except that
    products with the unit are filled in.  ``augmentation`` maps keys to
    scalars; only ``{unit: 1}`` style augmentations (all other basis keys
    in the kernel) are supported.
    """

    def __init__(self, module: GradedModule, unit, products: Mapping, diff: Mapping | None = None,
                 augmentation: Mapping | None = None, generators: Sequence | None = None, name: str = ""):
        self.module = module
        self.one_key = unit
        self.name = name
        self.products = {}
        for (a, b), v in products.items():
            self.products[(a, b)] = {k: Fraction(c) for k, c in v.items() if c}
        for k in module.keys:
            self.products.setdefault((unit, k), {k: ONE})
            self.products.setdefault((k, unit), {k: ONE})
        self.diff = {k: {t: Fraction(c) for t, c in v.items() if c} for k, v in (diff or {}).items()}
        for (a, b), v in self.products.items():
            for t in v:
                if module.degree[t] != module.degree[a] + module.degree[b]:
                    raise StructuralError(f"product {a!r}*{b!r} has the wrong degree")
        self._aug = None
        if augmentation is not None:
            aug = {k: Fraction(c) for k, c in augmentation.items() if c}
            if aug != {unit: ONE}:
                raise StructuralError("augmentation must send the unit to 1 and other basis keys to 0")
            self._aug = aug
        self._gens = list(generators) if generators is not None else [k for k in module.keys if k != unit]

    def degree(self, k) -> int:
        return self.module.degree[k]

    def weight(self, k) -> int:
        return self.module.weight[k]

    def key_name(self, k) -> str:
        return self.module.names[k]

    def mul_keys(self, a, b) -> Vec:
        return self.products.get((a, b), {})

    def d_key(self, k) -> Vec:
        return self.diff.get(k, {})

    def basis(self, window: DegreeWindow | None = None, wcap: int | None = None) -> list:
        return [k for k in self.module.keys
                if (window is None or self.degree(k) in window) and (wcap is None or self.weight(k) <= wcap)]

    def generator_keys(self) -> list:
        return list(self._gens)

    @property
    def augmented(self) -> bool:
        return self._aug is not None

    def epsilon_key(self, k) -> Fraction:
        if self._aug is None:
            raise StructuralError("algebra has no augmentation")
        return self._aug.get(k, ZERO)

    def __repr__(self) -> str:
        return f"TableAlgebra({self.name or len(self.module)})"


class TensorAlgebra:
    """``A (x) B`` with ``(a x b)(a' x b') = (-1)^{|b||a'|} aa' x bb'``."""

    def __init__(self, a, b, name: str = ""):
        self.a, self.b = a, b
        self.one_key = (a.one_key, b.one_key)
        self.name = name or f"({getattr(a, 'name', 'A')})x({getattr(b, 'name', 'B')})"

    def degree(self, k) -> int:
        return self.a.degree(k[0]) + self.b.degree(k[1])

    def weight(self, k) -> int:
        return self.a.weight(k[0]) + self.b.weight(k[1])

    def key_name(self, k) -> str:
        x, y = self.a.key_name(k[0]), self.b.key_name(k[1])
        if y == "1":
            return x
        if x == "1":
            return y
        return f"{x}(x){y}"

    def mul_keys(self, x, y) -> Vec:
        s = koszul(self.b.degree(x[1]), self.a.degree(y[0]))
        left = self.a.mul_keys(x[0], y[0])
        right = self.b.mul_keys(x[1], y[1])
        out: Vec = {}
        for p, cp in left.items():
            for q, cq in right.items():
                out[(p, q)] = s * cp * cq
        return out

    def d_key(self, k) -> Vec:
        out: Vec = {}
        for p, c in self.a.d_key(k[0]).items():
            out[(p, k[1])] = c
        s = -1 if self.a.degree(k[0]) % 2 else 1
        for q, c in self.b.d_key(k[1]).items():
            axpy(out, s * c, {(k[0], q): ONE})
        return out

    def basis(self, window: DegreeWindow | None = None, wcap: int | None = None) -> list:
        out = []
        for x in self.a.basis(None, wcap):
            for y in self.b.basis(None, wcap):
                k = (x, y)
                if wcap is not None and self.weight(k) > wcap:
                    continue
                if window is not None and self.degree(k) not in window:
                    continue
                out.append(k)
        out.sort(key=lambda k: (self.degree(k), self.weight(k)))
        return out

    def generator_keys(self) -> list:
        return ([(g, self.b.one_key) for g in self.a.generator_keys()]
                + [(self.a.one_key, g) for g in self.b.generator_keys()])

    @property
    def augmented(self) -> bool:
        return self.a.augmented and self.b.augmented

    def epsilon_key(self, k) -> Fraction:
        return self.a.epsilon_key(k[0]) * self.b.epsilon_key(k[1])

    def __repr__(self) -> str:
        return f"TensorAlgebra({self.name})"


def tensor(a, b, name: str = "") -> TensorAlgebra:
    return TensorAlgebra(a, b, name)


def adjoin_unit(alg: TableAlgebra, new_unit: str = "1+") -> TableAlgebra:
    """``A + R`` with a fresh unit; the old unit becomes an idempotent and the
    augmentation sends ``(a, r)`` to ``r``."""
    basis = [(new_unit, 0, 0)] + [(k, alg.degree(k), max(alg.weight(k), 1)) for k in alg.module.keys]
    names = {new_unit: new_unit}
    names.update({k: alg.key_name(k) if alg.key_name(k) != "1" else "e" for k in alg.module.keys})
    m = GradedModule(basis, names)
    products = {(a, b): alg.mul_keys(a, b) for a in alg.module.keys for b in alg.module.keys}
    return TableAlgebra(m, new_unit, products, alg.diff, augmentation={new_unit: 1},
                        name=f"{alg.name or 'A'}+R")


def finite_table(alg, window: DegreeWindow | None = None, wcap: int | None = None,
                 name: str = "") -> TableAlgebra:
    """Restrict a finite-dimensional algebra (all products inside the chosen
    basis) to a :class:`TableAlgebra`."""
    keys = alg.basis(window, wcap)
    keyset = set(keys)
    products = {}
    for a in keys:
        for b in keys:
            p = alg.mul_keys(a, b)
            if any(t not in keyset for t in p):
                raise StructuralError(f"product {alg.key_name(a)}*{alg.key_name(b)} leaves the basis")
            if p:
                products[(a, b)] = p
    m = GradedModule([(k, alg.degree(k), alg.weight(k)) for k in keys], {k: alg.key_name(k) for k in keys})
    aug = {alg.one_key: 1} if getattr(alg, "augmented", False) else None
    return TableAlgebra(m, alg.one_key, products, {k: alg.d_key(k) for k in keys}, aug,
                        generators=[g for g in alg.generator_keys() if g in keyset], name=name)


# -- structure-constant tables -------------------------------------------------

@dataclass
class StructureTable:
    """Products ``m(b_i, b_j)`` on a chosen basis; entries leaving the basis
    are :data:`UNKNOWN`."""

    keys: list
    names: dict
    degrees: dict
    mult: dict
    d: dict
    unit: Hashable

    def known_pairs(self) -> int:
        return sum(1 for v in self.mult.values() if v is not UNKNOWN)


def structure_table(alg, keys: Sequence) -> StructureTable:
    keyset = set(keys)
    mult = {}
    for a in keys:
        for b in keys:
            p = alg.mul_keys(a, b)
            mult[(a, b)] = UNKNOWN if any(t not in keyset for t in p) else dict(p)
    d = {}
    for a in keys:
        v = alg.d_key(a)
        d[a] = UNKNOWN if any(t not in keyset for t in v) else dict(v)
    return StructureTable(list(keys), {k: alg.key_name(k) for k in keys},
                          {k: alg.degree(k) for k in keys}, mult, d, alg.one_key)


@dataclass
class Witness:
    """First failing instance of an identity."""

    identity: str
    where: tuple
    detail: str = ""

    def __str__(self) -> str:
        return f"{self.identity} fails at {self.where}" + (f": {self.detail}" if self.detail else "")


def check_dg_algebra(alg, keys: Sequence) -> Witness | None:
    """Associativity, unit laws, d^2 = 0 and the Leibniz rule on ``keys``."""
    one = {alg.one_key: ONE}
    name = alg.key_name
    for a in keys:
        x = {a: ONE}
        if mul(alg, one, x) != x or mul(alg, x, one) != x:
            return Witness("unit law", (name(a),))
        if diff(alg, diff(alg, x)):
            return Witness("d^2 = 0", (name(a),))
    for a in keys:
        for b in keys:
            ab = alg.mul_keys(a, b)
            lhs = diff(alg, ab)
            rhs = mul(alg, alg.d_key(a), {b: ONE})
            axpy(rhs, -1 if alg.degree(a) % 2 else 1, mul(alg, {a: ONE}, alg.d_key(b)))
            if lhs != rhs:
                return Witness("Leibniz rule", (name(a), name(b)))
            for c in keys:
                if mul(alg, ab, {c: ONE}) != mul(alg, {a: ONE}, alg.mul_keys(b, c)):
                    return Witness("associativity", (name(a), name(b), name(c)))
    return None


def check_algebra_map(src, tgt, phi: Callable[[Hashable], Mapping], keys: Sequence,
                      pairs: Iterable[tuple] | None = None) -> Witness | None:
    """``phi`` (on basis keys of ``src``) is multiplicative, unital and
    commutes with the differentials."""
    def image(v: Mapping) -> Vec:
        out: Vec = {}
        for k, c in v.items():
            axpy(out, c, phi(k))
        return out

    if image({src.one_key: ONE}) != {tgt.one_key: ONE}:
        return Witness("unit preserved", (src.key_name(src.one_key),))
    for a in keys:
        if image(src.d_key(a)) != diff(tgt, phi(a)):
            return Witness("differential preserved", (src.key_name(a),))
    if pairs is None:
        pairs = ((a, b) for a in keys for b in keys)
    for a, b in pairs:
        if image(src.mul_keys(a, b)) != mul(tgt, phi(a), phi(b)):
            return Witness("multiplicativity", (src.key_name(a), src.key_name(b)))
    return None


def graded_commutator(alg, x: Mapping, y: Mapping, dx: int, dy: int) -> Vec:
    out = mul(alg, x, y)
    axpy(out, -koszul(dx, dy), mul(alg, y, x))
    return out


@dataclass
class BilinearForm:
    """Pairing on a graded basis; ``values[(a, b)] = <a, b>``."""

    degrees: dict
    values: dict = field(default_factory=dict)

    def __call__(self, a, b) -> Fraction:
        return self.values.get((a, b), ZERO)

    def check(self) -> Witness | None:
        for (a, b), v in self.values.items():
            if not v:
                continue
            if self.degrees[a] + self.degrees[b] != 0:
                return Witness("form vanishes off total degree 0", (a, b))
            if self(b, a) != -koszul(self.degrees[a], self.degrees[b]) * v:
                return Witness("graded skew-symmetry", (a, b))
        return None


def algebra_module(alg, keys: Sequence) -> GradedModule:
    return GradedModule([(k, alg.degree(k), alg.weight(k)) for k in keys], {k: alg.key_name(k) for k in keys})


def algebra_complex(alg, keys: Sequence, window: DegreeWindow | None = None):
    """The underlying complex of ``alg`` on the basis ``keys``."""
    from .graded import Complex

    m = algebra_module(alg, keys)
    return Complex.build(m, alg.d_key, window)
