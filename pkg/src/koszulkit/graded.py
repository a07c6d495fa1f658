"""Graded vector spaces over Q, graded maps, cochain complexes.

Differentials raise degree by one.  Every complex carries the degree window
on which it agrees with the (possibly infinite) object it truncates; the
cohomology in degree ``n`` is only reported when ``n-1``, ``n`` and ``n+1``
all lie in that window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping

from .linalg import ONE, Echelon, Vec, axpy, nullspace, rank, solve, vscale


class StructuralError(ValueError):
    """Shapes, degrees or keys of graded objects do not fit together."""


class NotAChainMap(ValueError):
    def __init__(self, degree: int, key):
        super().__init__(f"map does not commute with differentials in degree {degree} (basis {key!r})")
        self.degree = degree
        self.key = key


@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise StructuralError(f"empty window [{self.lo}, {self.hi}]")

    def __contains__(self, d: int) -> bool:
        return self.lo <= d <= self.hi

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def intersect(self, other: DegreeWindow | None) -> DegreeWindow | None:
        if other is None:
            return self
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return DegreeWindow(lo, hi) if lo <= hi else None

    def shrink(self, by: int = 1) -> DegreeWindow | None:
        lo, hi = self.lo + by, self.hi - by
        return DegreeWindow(lo, hi) if lo <= hi else None

    def shift(self, n: int) -> DegreeWindow:
        return DegreeWindow(self.lo + n, self.hi + n)

    def as_list(self) -> list[int]:
        return [self.lo, self.hi]

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def intersect_windows(*ws: DegreeWindow | None) -> DegreeWindow | None:
    out = None
    first = True
    for w in ws:
        if w is None:
            continue
        if first:
            out, first = w, False
            continue
        if out is None:
            return None
        out = out.intersect(w)
    return out


class GradedModule:
    """Finitely many named basis elements, each with a degree and a weight.

    Weight is an auxiliary non-negative grading (polynomial weight) used to
    truncate degreewise-infinite objects exactly; it defaults to 0.
    """

    def __init__(self, basis: Iterable[tuple], names: Mapping | None = None):
        self.keys: tuple = ()
        self.degree: dict = {}
        self.weight: dict = {}
        keys = []
        for item in basis:
            key, deg = item[0], item[1]
            w = item[2] if len(item) > 2 else 0
            if key in self.degree:
                raise StructuralError(f"duplicate basis key {key!r}")
            keys.append(key)
            self.degree[key] = int(deg)
            self.weight[key] = int(w)
        self.keys = tuple(keys)
        self.names = {k: (names[k] if names and k in names else _default_name(k)) for k in self.keys}
        if len(set(self.names.values())) != len(self.keys):
            raise StructuralError("basis names are not unique")
        self._by_degree: dict[int, list] = {}
        for k in self.keys:
            self._by_degree.setdefault(self.degree[k], []).append(k)
        self.index = {k: i for i, k in enumerate(self.keys)}

    def __len__(self) -> int:
        return len(self.keys)

    def __contains__(self, key) -> bool:
        return key in self.degree

    def __repr__(self) -> str:
        return f"GradedModule(dims={self.dims()})"

    def in_degree(self, d: int) -> list:
        return self._by_degree.get(d, [])

    def degrees(self) -> list[int]:
        return sorted(self._by_degree)

    def dims(self) -> dict[int, int]:
        return {d: len(self._by_degree[d]) for d in self.degrees()}

    def dim(self, d: int) -> int:
        return len(self._by_degree.get(d, ()))

    def vec_degree(self, v: Mapping) -> int | None:
        degs = {self.degree[k] for k in v}
        if len(degs) > 1:
            raise StructuralError(f"inhomogeneous vector with degrees {sorted(degs)}")
        return degs.pop() if degs else None

    def shifted(self, n: int, tag=None) -> GradedModule:
        """``M[n]``: the element of degree ``d`` sits in degree ``d - n``."""
        tag = ("[", n) if tag is None else tag
        return GradedModule(
            [((tag, k), self.degree[k] - n, self.weight[k]) for k in self.keys],
            names={(tag, k): f"{self.names[k]}[{n}]" for k in self.keys},
        )

    def format(self, v: Mapping) -> str:
        if not v:
            return "0"
        parts = []
        for k in sorted(v, key=lambda k: self.index.get(k, 0)):
            c = v[k]
            name = self.names.get(k, str(k))
            parts.append(f"{c}*{name}" if c != 1 else name)
        return " + ".join(parts)


def _default_name(key) -> str:
    if isinstance(key, str):
        return key
    return repr(key)


def direct_sum(parts: Mapping[Hashable, GradedModule]) -> GradedModule:
    basis, names = [], {}
    for tag, m in parts.items():
        for k in m.keys:
            basis.append(((tag, k), m.degree[k], m.weight[k]))
            names[(tag, k)] = f"{tag}:{m.names[k]}"
    return GradedModule(basis, names)


class GradedMap:
    """A homogeneous linear map, stored as images of source basis elements."""

    def __init__(self, source: GradedModule, target: GradedModule, degree: int,
                 images: Mapping[Hashable, Mapping], check: bool = True):
        self.source = source
        self.target = target
        self.degree = int(degree)
        self.images: dict = {k: dict(v) for k, v in images.items() if v}
        if check:
            for k, v in self.images.items():
                if k not in source:
                    raise StructuralError(f"{k!r} is not a source basis element")
                for t in v:
                    if t not in target:
                        raise StructuralError(f"{t!r} is not a target basis element")
                    if target.degree[t] != source.degree[k] + self.degree:
                        raise StructuralError(
                            f"image of {source.names[k]} has degree {target.degree[t]}, "
                            f"expected {source.degree[k] + self.degree}")

    @classmethod
    def from_function(cls, source, target, degree, fn: Callable[[Hashable], Mapping], check=True):
        return cls(source, target, degree, {k: fn(k) for k in source.keys}, check=check)

    @classmethod
    def identity(cls, m: GradedModule) -> GradedMap:
        return cls(m, m, 0, {k: {k: ONE} for k in m.keys}, check=False)

    @classmethod
    def zero(cls, source, target, degree=0) -> GradedMap:
        return cls(source, target, degree, {}, check=False)

    def __call__(self, v: Mapping) -> Vec:
        out: Vec = {}
        for k, c in v.items():
            img = self.images.get(k)
            if img:
                axpy(out, c, img)
        return out

    def image(self, key) -> Vec:
        return self.images.get(key, {})

    def block(self, d: int) -> list[list[Fraction]]:
        """Matrix of the component from source degree ``d``."""
        cols = self.source.in_degree(d)
        rows = self.target.in_degree(d + self.degree)
        return [[self.images.get(c, {}).get(r, Fraction(0)) for c in cols] for r in rows]

    def __add__(self, other: GradedMap) -> GradedMap:
        _check_parallel(self, other)
        out = {k: dict(v) for k, v in self.images.items()}
        for k, v in other.images.items():
            axpy(out.setdefault(k, {}), ONE, v)
        return GradedMap(self.source, self.target, self.degree, out, check=False)

    def __sub__(self, other: GradedMap) -> GradedMap:
        return self + other.scaled(-1)

    def scaled(self, c) -> GradedMap:
        return GradedMap(self.source, self.target, self.degree,
                         {k: vscale(c, v) for k, v in self.images.items()}, check=False)

    def is_zero(self) -> bool:
        return not any(self.images.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMap):
            return NotImplemented
        return (self.degree == other.degree and self.source.keys == other.source.keys
                and self.target.keys == other.target.keys and (self - other).is_zero())

    __hash__ = None

    def __repr__(self) -> str:
        return f"GradedMap(degree={self.degree}, nonzero={len(self.images)})"


def _check_parallel(f: GradedMap, g: GradedMap) -> None:
    if f.degree != g.degree or f.source.keys != g.source.keys or f.target.keys != g.target.keys:
        raise StructuralError("maps are not parallel")


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """``f o g``."""
    if g.target.keys != f.source.keys:
        raise StructuralError("target of g is not the source of f")
    return GradedMap(g.source, f.target, f.degree + g.degree,
                     {k: f(v) for k, v in g.images.items()}, check=False)


class Complex:
    """A finite graded module with a degree +1 differential.

    ``window`` lists the degrees on which the module agrees with the object
    it truncates; ``None`` means the complex is complete (nothing truncated).
    """

    def __init__(self, module: GradedModule, d: GradedMap | Mapping, window: DegreeWindow | None = None,
                 check: bool = True, label: str = ""):
        if not isinstance(d, GradedMap):
            d = GradedMap(module, module, 1, d, check=check)
        if d.degree != 1 or d.source is not module or d.target is not module:
            if d.degree != 1 or d.source.keys != module.keys or d.target.keys != module.keys:
                raise StructuralError("differential must be an endomorphism of degree +1")
        self.module = module
        self.d = d
        self.window = window
        self.label = label
        if check:
            for k, v in d.images.items():
                dd = d(v)
                if dd:
                    raise StructuralError(
                        f"d^2 != 0 on {module.names[k]}: {module.format(dd)}")

    @classmethod
    def build(cls, module: GradedModule, fn: Callable[[Hashable], Mapping],
              window: DegreeWindow | None = None, check: bool = True, label: str = "") -> Complex:
        """Differential from a function that may return terms outside the
        truncated basis; such terms must sit outside ``window``."""
        images = {}
        for k in module.keys:
            img = {}
            for t, c in fn(k).items():
                if t in module:
                    img[t] = c
                elif window is None or (module.degree[k] + 1) in window:
                    raise StructuralError(
                        f"differential of {module.names[k]} leaves the truncated basis ({t!r})")
            if img:
                images[k] = img
        return cls(module, GradedMap(module, module, 1, images, check=check), window, check=check, label=label)

    def __repr__(self) -> str:
        return f"Complex({self.label or ''} dims={self.module.dims()}, window={self.window})"

    def valid_window(self, requested: DegreeWindow | None = None) -> DegreeWindow | None:
        if self.window is None:
            if requested is not None:
                return requested
            degs = self.module.degrees()
            return DegreeWindow(min(degs), max(degs)) if degs else DegreeWindow(0, 0)
        inner = self.window.shrink(1)
        if inner is None:
            return None
        return inner.intersect(requested) if requested is not None else inner

    def shift(self, n: int) -> Complex:
        """``C[n]`` with differential ``(-1)^n d``."""
        m = self.module.shifted(n)
        sign = -1 if n % 2 else 1
        tag = ("[", n)
        images = {(tag, k): {(tag, t): sign * c for t, c in v.items()} for k, v in self.d.images.items()}
        w = self.window.shift(-n) if self.window is not None else None
        return Complex(m, GradedMap(m, m, 1, images, check=False), w, check=False)


@dataclass
class Cohomology:
    dims: dict
    representatives: dict
    valid: DegreeWindow | None

    def total(self) -> int:
        return sum(self.dims.values())

    def nonzero(self) -> dict:
        return {d: n for d, n in self.dims.items() if n}


def cohomology(c: Complex, window: DegreeWindow | None = None, representatives: bool = True) -> Cohomology:
    valid = c.valid_window(window)
    if valid is None:
        return Cohomology({}, {}, None)
    dims, reps = {}, {}
    m = c.module
    for deg in valid.degrees():
        src = m.in_degree(deg)
        if not src:
            dims[deg] = 0
            reps[deg] = []
            continue
        boundaries = [c.d.image(k) for k in m.in_degree(deg - 1)]
        if not representatives:
            zdim = len(src) - rank(c.d.image(k) for k in src)
            dims[deg] = zdim - rank(boundaries)
            continue
        cycles = nullspace({k: c.d.image(k) for k in src})
        ech = Echelon(order=m.index.__getitem__)
        for b in boundaries:
            ech.add(b)
        chosen = []
        for z in cycles:
            if ech.add(z) is None:
                chosen.append(z)
        dims[deg] = len(chosen)
        reps[deg] = chosen
    return Cohomology(dims, reps, valid)


def check_chain_map(f: GradedMap, src: Complex, tgt: Complex, window: DegreeWindow | None = None) -> None:
    """Raise :class:`NotAChainMap` at the first failing degree."""
    sign = -1 if f.degree % 2 else 1
    for k in sorted(src.module.keys, key=lambda k: (src.module.degree[k], src.module.index[k])):
        deg = src.module.degree[k]
        if window is not None and deg not in window:
            continue
        lhs = tgt.d(f.image(k))
        rhs = f(src.d.image(k))
        axpy(lhs, -sign, rhs)
        if lhs:
            raise NotAChainMap(deg, src.module.names[k])


@dataclass
class QuasiIsoVerdict:
    ok: bool
    valid: DegreeWindow | None
    induced_ranks: dict
    source_dims: dict
    target_dims: dict

    def failing_degrees(self) -> list[int]:
        return [d for d in self.induced_ranks
                if not (self.induced_ranks[d] == self.source_dims.get(d, 0) == self.target_dims.get(d, 0))]


def induced_rank(f: GradedMap, hs: Cohomology, tgt: Complex, deg: int) -> int:
    m = tgt.module
    ech = Echelon(order=m.index.__getitem__)
    for k in m.in_degree(deg + f.degree - 1):
        ech.add(tgt.d.image(k))
    base = len(ech)
    for z in hs.representatives.get(deg, []):
        ech.add(f(z))
    return len(ech) - base


def is_quasi_iso(f: GradedMap, src: Complex, tgt: Complex, window: DegreeWindow | None = None) -> QuasiIsoVerdict:
    """Whether ``f`` induces isomorphisms on cohomology inside the shared
    valid window.  Precondition: ``f`` is a degree-0 chain map."""
    if f.degree != 0:
        raise StructuralError("quasi-isomorphisms have degree 0")
    valid = intersect_windows(src.valid_window(window), tgt.valid_window(window))
    check_chain_map(f, src, tgt, src.window)
    if valid is None:
        return QuasiIsoVerdict(False, None, {}, {}, {})
    hs = cohomology(src, valid)
    ht = cohomology(tgt, valid, representatives=False)
    ranks = {d: induced_rank(f, hs, tgt, d) for d in valid.degrees()}
    ok = all(ranks[d] == hs.dims[d] == ht.dims[d] for d in valid.degrees())
    return QuasiIsoVerdict(ok, valid, ranks, hs.dims, ht.dims)


def cone(f: GradedMap, src: Complex, tgt: Complex) -> Complex:
    """Mapping cone ``X[1] + Y`` with ``d(x, y) = (-dx, f x + dy)``."""
    if f.degree != 0:
        raise StructuralError("cone needs a degree-0 map")
    x, y = src.module, tgt.module
    basis = [(("x", k), x.degree[k] - 1, x.weight[k]) for k in x.keys]
    basis += [(("y", k), y.degree[k], y.weight[k]) for k in y.keys]
    names = {("x", k): f"s{x.names[k]}" for k in x.keys}
    names.update({("y", k): y.names[k] for k in y.keys})
    m = GradedModule(basis, names)
    images = {}
    for k in x.keys:
        img = {("x", t): -c for t, c in src.d.image(k).items()}
        for t, c in f.image(k).items():
            img[("y", t)] = c
        images[("x", k)] = img
    for k in y.keys:
        images[("y", k)] = {("y", t): c for t, c in tgt.d.image(k).items()}
    window = intersect_windows(src.window.shift(-1) if src.window else None, tgt.window)
    if window is None and (src.window is not None or tgt.window is not None):
        window = DegreeWindow(0, 0) if src.window is None and tgt.window is None else window
    return Complex(m, GradedMap(m, m, 1, images, check=False), window, check=True)


def solve_homotopy(lhs: GradedMap, src: Complex, tgt: Complex,
                   window: DegreeWindow | None = None) -> GradedMap | None:
    """A map ``h`` of degree ``deg(lhs) - 1`` with ``lhs = d h + (-1)^{deg h} ... ``.

    Precisely solves ``lhs = d_tgt h - (-1)^{|h|} h d_src``, which for the usual
    degree-0 case reads ``lhs = d h + h d``.  Equations are imposed on source
    degrees inside the valid window; returns ``None`` when unsolvable there.
    """
    hdeg = lhs.degree - 1
    sign = -1 if hdeg % 2 else 1  # (-1)^{|h|}
    valid = intersect_windows(src.valid_window(window), tgt.valid_window(window))
    if valid is None:
        return None
    x, y = src.module, tgt.module
    unknowns = [(k, t) for k in x.keys for t in y.in_degree(x.degree[k] + hdeg)]
    columns: dict = {u: {} for u in unknowns}
    # contribution of unknown (k -> t) to the equation row (j, s):
    #   d_tgt h: row (k, s) for s in d(t)
    #   -sign * h d_src: row (j, t) for j with k in d(j)
    preimages: dict = {}
    for j, v in src.d.images.items():
        for k, c in v.items():
            preimages.setdefault(k, []).append((j, c))
    for (k, t) in unknowns:
        col = columns[(k, t)]
        if x.degree[k] in valid:
            for s, c in tgt.d.image(t).items():
                axpy(col, c, {(k, s): ONE})
        for j, c in preimages.get(k, ()):
            if x.degree[j] in valid:
                axpy(col, -sign * c, {(j, t): ONE})
    rhs = {}
    for k in x.keys:
        if x.degree[k] in valid:
            for t, c in lhs.image(k).items():
                rhs[(k, t)] = c
    sol = solve(columns, rhs)
    if sol is None:
        return None
    images: dict = {}
    for (k, t), c in sol.items():
        images.setdefault(k, {})[t] = c
    return GradedMap(x, y, hdeg, images, check=False)
