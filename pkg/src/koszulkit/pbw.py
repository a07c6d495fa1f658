"""Algebras with a Poincare-Birkhoff-Witt basis.

A :class:`PBWAlgebra` is generated by finitely many homogeneous generators
``g_1 < ... < g_k`` subject to

    g_h g_j - (-1)^{|g_h||g_j|} g_j g_h = omega(h, j)

with ``omega`` taking values in the centre.  Normal-ordered monomials
``g_1^{e_1} ... g_k^{e_k}`` (odd exponents at most 1) form a basis.  This
covers graded-symmetric algebras (``omega = 0``), Heisenberg algebras
(scalar ``omega``), and Heisenberg algebras over a commutative base such as
truncated polynomial rings (``omega`` valued in central degree-0 generators).

Optional *nil groups* ``(indices, cap)`` kill every monomial whose total
exponent on ``indices`` exceeds ``cap``; used for ``O_X`` truncated at a
polynomial degree.  These generators must be central.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from .graded import DegreeWindow, StructuralError
from .linalg import ONE, Vec, axpy, vscale

Mono = tuple


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    weight: int = 1

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


class PBWAlgebra:
    def __init__(self, generators: Sequence[Generator | tuple], omega: Mapping | None = None,
                 diff: Mapping | None = None, nil: Iterable[tuple[Iterable[str], int]] = (),
                 name: str = ""):
        gens = [g if isinstance(g, Generator) else Generator(*g) for g in generators]
        self.gens = tuple(gens)
        self.name = name
        self.n = len(gens)
        self.index = {g.name: i for i, g in enumerate(gens)}
        if len(self.index) != self.n:
            raise StructuralError("duplicate generator names")
        self.nil = tuple((tuple(self.index[x] for x in idx), int(cap)) for idx, cap in nil)
        self._nil_member = {i for idx, _ in self.nil for i in idx}
        self._rmul_cache: dict = {}
        self._mul_cache: dict = {}
        self._d_cache: dict = {}
        # omega over indices, completed by super skew-symmetry
        self.omega: dict = {}
        for (a, b), val in (omega or {}).items():
            h, j = self._gi(a), self._gi(b)
            val = self._element(val)
            if not val:
                continue
            s = self._sign(h, j)
            self._set_omega(h, j, val)
            if h != j:
                self._set_omega(j, h, vscale(-s, val))
        for (h, j), val in self.omega.items():
            if h == j and not self.gens[h].odd:
                raise StructuralError(f"even generator {self.gens[h].name} cannot have a self-commutator")
            self._check_homogeneous(val, self.gens[h].degree + self.gens[j].degree,
                                    self.gens[h].weight + self.gens[j].weight,
                                    f"commutator [{self.gens[h].name}, {self.gens[j].name}]")
            for i in self._nil_member:
                if (i, h) in self.omega:
                    raise StructuralError("nil generators must be central")
        self.diff: dict = {}
        for a, val in (diff or {}).items():
            i = self._gi(a)
            val = self._element(val)
            if val:
                self._check_homogeneous(val, self.gens[i].degree + 1, self.gens[i].weight,
                                        f"d({self.gens[i].name})")
                self.diff[i] = val

    # -- construction helpers ------------------------------------------------

    def _gi(self, a) -> int:
        return a if isinstance(a, int) else self.index[a]

    def _set_omega(self, h, j, val):
        old = self.omega.get((h, j))
        if old is not None and old != val:
            raise StructuralError(
                f"inconsistent commutator for ({self.gens[h].name}, {self.gens[j].name})")
        self.omega[(h, j)] = val

    def _element(self, val) -> Vec:
        if isinstance(val, Mapping):
            out = {}
            for k, c in val.items():
                m = self.parse_monomial(k) if isinstance(k, str) else tuple(k)
                axpy(out, ONE, {m: Fraction(c)})
            return out
        c = Fraction(val)
        return {self.one_key: c} if c else {}

    def _check_homogeneous(self, v: Vec, deg: int, wt: int, what: str) -> None:
        for m in v:
            if self.degree(m) != deg or self.weight(m) != wt:
                raise StructuralError(f"{what} is not homogeneous of degree {deg}, weight {wt}")

    def _sign(self, h: int, j: int) -> int:
        return -1 if self.gens[h].odd and self.gens[j].odd else 1

    # -- basis ---------------------------------------------------------------

    @property
    def one_key(self) -> Mono:
        return (0,) * self.n

    def one(self) -> Vec:
        return {self.one_key: ONE}

    def gen(self, name) -> Vec:
        m = [0] * self.n
        m[self._gi(name)] = 1
        return {tuple(m): ONE}

    def generator_keys(self) -> list[Mono]:
        return [next(iter(self.gen(i))) for i in range(self.n)]

    def degree(self, m: Mono) -> int:
        return sum(e * g.degree for e, g in zip(m, self.gens))

    def weight(self, m: Mono) -> int:
        return sum(e * g.weight for e, g in zip(m, self.gens))

    def key_name(self, m: Mono) -> str:
        parts = []
        for e, g in zip(m, self.gens):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_monomial(self, s: str) -> Mono:
        m = [0] * self.n
        s = s.strip()
        if s in ("1", ""):
            return tuple(m)
        for part in s.split("*"):
            name, _, e = part.partition("^")
            m[self.index[name.strip()]] += int(e) if e else 1
        return tuple(m)

    def _killed(self, m: Mono) -> bool:
        for idx, cap in self.nil:
            if sum(m[i] for i in idx) > cap:
                return True
        return False

    def _exponent_bound(self, i: int, wcap: int | None) -> int:
        g = self.gens[i]
        if g.odd:
            return 1
        caps = [cap for idx, cap in self.nil if i in idx]
        if caps:
            return min(caps)
        if g.weight > 0 and wcap is not None:
            return wcap // g.weight
        raise StructuralError(
            f"generator {g.name} is even with non-positive weight; the algebra is degreewise infinite")

    def basis(self, window: DegreeWindow | None = None, wcap: int | None = None) -> list[Mono]:
        """Normal-ordered monomials with degree in ``window`` and weight <= ``wcap``."""
        bounds = [range(self._exponent_bound(i, wcap) + 1) for i in range(self.n)]
        out = []
        for m in iproduct(*bounds):
            if self._killed(m):
                continue
            if wcap is not None and self.weight(m) > wcap:
                continue
            if window is not None and self.degree(m) not in window:
                continue
            out.append(tuple(m))
        out.sort(key=lambda m: (self.degree(m), self.weight(m), tuple(-e for e in m)))
        return out

    # -- multiplication ------------------------------------------------------

    def _rmul_gen(self, m: Mono, j: int) -> Vec:
        """``m * g_j`` in normal form."""
        key = (m, j)
        hit = self._rmul_cache.get(key)
        if hit is not None:
            return hit
        last = max((i for i, e in enumerate(m) if e), default=-1)
        if last <= j:
            out: Vec = {}
            if last == j and self.gens[j].odd:
                # g_j^2 = omega(j, j) / 2
                w = self.omega.get((j, j))
                if w:
                    rest = list(m)
                    rest[j] -= 1
                    out = self._mul(dict({tuple(rest): ONE}), vscale(Fraction(1, 2), w))
            else:
                n = list(m)
                n[j] += 1
                n = tuple(n)
                if not self._killed(n):
                    out = {n: ONE}
        else:
            rest = list(m)
            rest[last] -= 1
            rest = tuple(rest)
            out = {}
            # m' g_last g_j = s (m' g_j) g_last + m' omega(last, j)
            s = self._sign(last, j)
            for mm, c in self._rmul_gen(rest, j).items():
                axpy(out, s * c, self._rmul_gen(mm, last))
            w = self.omega.get((last, j))
            if w:
                axpy(out, ONE, self._mul({rest: ONE}, w))
        self._rmul_cache[key] = out
        return out

    def _mul_mono(self, a: Mono, b: Mono) -> Vec:
        key = (a, b)
        hit = self._mul_cache.get(key)
        if hit is not None:
            return hit
        cur: Vec = {a: ONE}
        for j, e in enumerate(b):
            for _ in range(e):
                nxt: Vec = {}
                for m, c in cur.items():
                    axpy(nxt, c, self._rmul_gen(m, j))
                cur = nxt
                if not cur:
                    break
        self._mul_cache[key] = cur
        return cur

    def _mul(self, x: Mapping, y: Mapping) -> Vec:
        out: Vec = {}
        for a, ca in x.items():
            for b, cb in y.items():
                axpy(out, ca * cb, self._mul_mono(a, b))
        return out

    def mul(self, x: Mapping, y: Mapping) -> Vec:
        return self._mul(x, y)

    def mul_keys(self, a: Mono, b: Mono) -> Vec:
        return self._mul_mono(a, b)

    # -- differential --------------------------------------------------------

    def d_key(self, m: Mono) -> Vec:
        hit = self._d_cache.get(m)
        if hit is not None:
            return hit
        out: Vec = {}
        if self.diff:
            word = [i for i, e in enumerate(m) for _ in range(e)]
            deg = 0
            for pos, i in enumerate(word):
                dg = self.diff.get(i)
                if dg:
                    prefix = _word_mono(word[:pos], self.n)
                    suffix = _word_mono(word[pos + 1:], self.n)
                    term = self._mul(self._mul({prefix: ONE}, dg), {suffix: ONE})
                    axpy(out, -1 if deg % 2 else 1, term)
                deg += self.gens[i].degree
        self._d_cache[m] = out
        return out

    def d(self, x: Mapping) -> Vec:
        out: Vec = {}
        for m, c in x.items():
            axpy(out, c, self.d_key(m))
        return out

    # -- augmentation --------------------------------------------------------

    @property
    def augmented(self) -> bool:
        """Whether sending every generator to 0 is a dg-algebra map."""
        z = self.one_key
        return all(z not in v for v in self.omega.values()) and all(z not in v for v in self.diff.values())

    def epsilon_key(self, m: Mono) -> Fraction:
        return ONE if m == self.one_key else Fraction(0)

    def __repr__(self) -> str:
        return f"PBWAlgebra({self.name or ', '.join(g.name for g in self.gens)})"


def _word_mono(word: Sequence[int], n: int) -> Mono:
    m = [0] * n
    for i in word:
        m[i] += 1
    return tuple(m)


def sym_algebra(generators: Sequence[Generator | tuple], diff: Mapping | None = None,
                nil=(), name: str = "") -> PBWAlgebra:
    """Free graded-commutative algebra; ``diff`` gives d on generators."""
    return PBWAlgebra(generators, None, diff, nil, name=name)


def exterior_algebra(names: Sequence[str], degree: int = 1, weight: int = 1) -> PBWAlgebra:
    return PBWAlgebra([Generator(n, degree, weight) for n in names], name="Lambda(" + ",".join(names) + ")")


def heisenberg_algebra(m_gens: Sequence[Generator | tuple], n_gens: Sequence[Generator | tuple],
                       phi: Sequence[Sequence], base: Sequence[Generator | tuple] = (),
                       nil=(), diff: Mapping | None = None, name: str = "") -> PBWAlgebra:
    """``Heis(M[1] + N[-1])`` with ``[m_i, n_j] = phi[j][i]``.

    ``m_gens`` and ``n_gens`` are the already shifted generators.  Entries of
    ``phi`` may be scalars or elements over ``base`` generators (central).
    ``phi[j][i]`` is the pairing of ``phi(m_i)`` with ``n_j``.
    """
    m_gens = [g if isinstance(g, Generator) else Generator(*g) for g in m_gens]
    n_gens = [g if isinstance(g, Generator) else Generator(*g) for g in n_gens]
    if len(phi) != len(n_gens) or any(len(row) != len(m_gens) for row in phi):
        raise StructuralError(f"phi must be a {len(n_gens)}x{len(m_gens)} matrix")
    omega = {}
    for j, ng in enumerate(n_gens):
        for i, mg in enumerate(m_gens):
            val = phi[j][i]
            if val:
                omega[(mg.name, ng.name)] = val
    return PBWAlgebra(list(base) + m_gens + n_gens, omega, diff, nil, name=name or "Heis")
