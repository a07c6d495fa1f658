"""Exact rational linear algebra on sparse vectors.

A vector is a plain ``dict`` mapping hashable basis keys to ``Fraction``
coefficients with no zero entries.  Matrices are handled as lists of
column vectors.
"""

from __future__ import annotations

from fractions import Fraction
import heapq
from math import lcm
from typing import Hashable, Iterable, Mapping

import numpy as np

from . import _kernels

Vec = dict

ZERO = Fraction(0)
ONE = Fraction(1)


# -- sparse vector helpers ---------------------------------------------------

def vec(items: Iterable[tuple[Hashable, object]] = ()) -> Vec:
    out: Vec = {}
    for k, c in items:
        add_term(out, k, Fraction(c))
    return out


def add_term(v: Vec, key: Hashable, coeff: Fraction) -> None:
    """In-place ``v[key] += coeff`` dropping zeros."""
    if not coeff:
        return
    c = v.get(key, ZERO) + coeff
    if c:
        v[key] = c
    else:
        del v[key]


def axpy(v: Vec, coeff, w: Mapping) -> Vec:
    """In-place ``v += coeff * w``; returns ``v``."""
    if not coeff:
        return v
    coeff = Fraction(coeff)
    for k, c in w.items():
        add_term(v, k, coeff * c)
    return v


def vadd(*vs: Mapping) -> Vec:
    out: Vec = {}
    for w in vs:
        axpy(out, ONE, w)
    return out


def vscale(coeff, w: Mapping) -> Vec:
    coeff = Fraction(coeff)
    if not coeff:
        return {}
    return {k: coeff * c for k, c in w.items()}


def vsub(a: Mapping, b: Mapping) -> Vec:
    return axpy(dict(a), -ONE, b)


# -- echelon forms -------------------------------------------------------------

class Echelon:
    """Incremental reduced echelon basis of a span.

    With ``track=True`` every stored row also remembers how it was built from
    the inserted vectors (by insertion label), which turns the structure into
    a solver and a kernel finder.
    """

    def __init__(self, track: bool = False, order=None):
        self.rows: dict = {}      # pivot key -> row (pivot coeff 1)
        self.combos: dict = {}    # pivot key -> combination of labels
        self.track = track
        self._order = order

    def __len__(self) -> int:
        return len(self.rows)

    def _pick_pivot(self, v: Vec):
        if self._order is not None:
            return min(v, key=self._order)
        try:
            return min(v)
        except TypeError:
            return min(v, key=repr)

    def reduce(self, v: Mapping, combo: Vec | None = None) -> tuple[Vec, Vec | None]:
        v = dict(v)
        combo = dict(combo) if combo is not None else ({} if self.track else None)
        # rows are fully reduced against each other, so a single pass suffices
        for key in [k for k in v if k in self.rows]:
            c = v.get(key)
            if not c:
                continue
            axpy(v, -c, self.rows[key])
            if combo is not None:
                axpy(combo, -c, self.combos[key])
        return v, combo

    def add(self, v: Mapping, label: Hashable = None) -> Vec | None:
        """Insert ``v``.  Returns ``None`` when ``v`` was independent, or the
        dependency combination (``label`` terms included) when it reduced to 0."""
        start = {label: ONE} if self.track else None
        rem, combo = self.reduce(v, start)
        if not rem:
            return combo if self.track else {}
        piv = self._pick_pivot(rem)
        inv = ONE / rem[piv]
        rem = vscale(inv, rem)
        if combo is not None:
            combo = vscale(inv, combo)
        for key, row in self.rows.items():
            c = row.get(piv)
            if c:
                axpy(row, -c, rem)
                if self.track:
                    axpy(self.combos[key], -c, combo)
        self.rows[piv] = rem
        if self.track:
            self.combos[piv] = combo
        return None

    def contains(self, v: Mapping) -> bool:
        rem, _ = self.reduce(v)
        return not rem

    def express(self, v: Mapping) -> Vec | None:
        """Combination of inserted labels equal to ``v``, or ``None``."""
        if not self.track:
            raise ValueError("express needs a tracking echelon")
        rem, combo = self.reduce(v, {})
        if rem:
            return None
        return vscale(-1, combo)


def nullspace(columns: Mapping[Hashable, Mapping]) -> list[Vec]:
    """Basis of ``{x : sum_j x_j * columns[j] = 0}`` as label-keyed vectors."""
    ech = Echelon(track=True)
    out = []
    for label, col in columns.items():
        dep = ech.add(col, label)
        if dep is not None:
            out.append(dep)
    return out


def solve(columns: Mapping[Hashable, Mapping], rhs: Mapping) -> Vec | None:
    """Some ``x`` with ``sum_j x_j * columns[j] = rhs``, or ``None``.

    The system is split into blocks of columns sharing rows; blocks whose
    right-hand side vanishes are solved by zero without elimination."""
    parent: dict = {}

    def find(r):
        while parent[r] != r:
            parent[r] = parent[parent[r]]
            r = parent[r]
        return r

    for col in columns.values():
        first = None
        for r in col:
            parent.setdefault(r, r)
            if first is None:
                first = find(r)
            else:
                root = find(r)
                if root != first:
                    parent[root] = first
    rhs = {r: c for r, c in rhs.items() if c}
    if any(r not in parent for r in rhs):
        return None
    wanted = {find(r) for r in rhs}
    blocks: dict = {}
    for label, col in columns.items():
        if col:
            root = find(next(iter(col)))
            if root in wanted:
                blocks.setdefault(root, []).append((label, col))
    out: Vec = {}
    for root, cols in blocks.items():
        x = _solve_block(cols, {r: c for r, c in rhs.items() if find(r) == root})
        if x is None:
            return None
        out.update(x)
    return out


def _solve_block(cols: list, rhs: Mapping) -> Vec | None:
    # sparse Gaussian elimination with a Markowitz-style pivot choice: the
    # shortest active equation, and in it the least frequent unknown
    labels = [label for label, _ in cols]
    rows: dict = {}
    for j, (_, col) in enumerate(cols):
        for r, c in col.items():
            rows.setdefault(r, {})[j] = c
    const = {r: Fraction(rhs.get(r, 0)) for r in rows}
    occ: dict = {}
    for r, row in rows.items():
        for j in row:
            occ.setdefault(j, set()).add(r)
    heap = [(len(row), i, r) for i, (r, row) in enumerate(rows.items())]
    order = {r: i for _, i, r in heap}
    heapq.heapify(heap)
    active = set(rows)
    pivots: list = []
    while heap:
        n, _, r = heapq.heappop(heap)
        if r not in active or n != len(rows[r]):
            continue
        active.discard(r)
        row = rows.pop(r)
        c0 = const.pop(r)
        if not row:
            if c0:
                return None
            continue
        j = min(row, key=lambda k: (len(occ[k]), k))
        inv = ONE / row[j]
        row = vscale(inv, row)
        c0 *= inv
        for k in row:
            occ[k].discard(r)
        for r2 in list(occ[j]):
            row2 = rows[r2]
            c = row2[j]
            for k, v in row.items():
                nv = row2.get(k, 0) - c * v
                if nv:
                    if k not in row2:
                        occ[k].add(r2)
                    row2[k] = nv
                elif k in row2:
                    del row2[k]
                    occ[k].discard(r2)
            const[r2] -= c * c0
            heapq.heappush(heap, (len(row2), order[r2], r2))
        pivots.append((j, row, c0))
    x: dict = {}
    for j, row, c0 in reversed(pivots):
        val = c0
        for k, c in row.items():
            if k != j and k in x:
                val -= c * x[k]
        if val:
            x[j] = val
    return {labels[j]: c for j, c in x.items()}


def span_basis(vectors: Iterable[Mapping]) -> list[Vec]:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return list(ech.rows.values())


# -- rank ---------------------------------------------------------------------

def _integer_rows(columns: list[Mapping], row_keys: list) -> list[list[int]]:
    """Dense integer matrix (rows = ``row_keys``) with each column scaled by
    the lcm of its denominators; scaling columns does not change rank."""
    idx = {k: i for i, k in enumerate(row_keys)}
    mat = [[0] * len(columns) for _ in row_keys]
    for j, col in enumerate(columns):
        den = 1
        for c in col.values():
            den = lcm(den, c.denominator)
        for k, c in col.items():
            mat[idx[k]][j] = int(c * den)
    return mat


def bareiss_rank(mat: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination (Bareiss) rank of an int matrix."""
    a = [row[:] for row in mat]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][col]), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            f = a[r][col]
            row_r = a[r]
            row_p = a[rank]
            for j in range(col, ncols):
                row_r[j] = (p * row_r[j] - f * row_p[j]) // prev
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(columns: Iterable[Mapping], *, fast: bool = True) -> int:
    """Exact rank of the span of ``columns``.

    The modular kernel can only certify full rank (rank mod p never exceeds
    the rational rank); anything short of that falls through to exact
    fraction-free elimination.
    """
    cols = [c for c in columns if c]
    if not cols:
        return 0
    row_keys = sorted({k for c in cols for k in c}, key=repr)
    mat = _integer_rows(cols, row_keys)
    full = min(len(row_keys), len(cols))
    if fast and full > 4:
        arr = np.array([[x % _kernels.PRIME for x in row] for row in mat], dtype=np.int64)
        if _kernels.rank_mod_p(arr) == full:
            return full
    if len(row_keys) > len(cols):
        mat = [list(r) for r in zip(*mat)]
    return bareiss_rank(mat)
