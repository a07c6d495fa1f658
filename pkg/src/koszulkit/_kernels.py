"""Modular rank kernels.

``rank_mod_p`` is the hot inner loop behind the full-rank fast path in
:mod:`koszulkit.linalg`.  Two implementations are kept side by side: a
numba ``@njit`` loop and a pure numpy vectorized elimination.  Set
``KOSZULKIT_NO_NUMBA=1`` to force the numpy path (tests run both).
"""

from __future__ import annotations

import os

import numpy as np

PRIME = 2147483647  # 2**31 - 1; products of residues fit in int64

_DISABLED = os.environ.get("KOSZULKIT_NO_NUMBA", "").strip() not in ("", "0")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via env flag
    HAS_NUMBA = False


def _rank_mod_p_numpy(mat: np.ndarray, p: int = PRIME) -> int:
    a = np.array(mat, dtype=np.int64) % p
    nrows, ncols = a.shape
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        nz = np.nonzero(a[rank:, col])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, col]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1:, col].copy()
        mask = below != 0
        if mask.any():
            rows = np.nonzero(mask)[0] + rank + 1
            # (x - f*y) mod p, done in two steps to stay inside int64
            prod = (below[mask][:, None] * a[rank][None, :]) % p
            a[rows] = (a[rows] - prod) % p
        rank += 1
    return rank


if HAS_NUMBA:

    @njit(cache=True)
    def _rank_mod_p_numba(mat, p):  # pragma: no cover - compiled
        a = mat.copy()
        nrows, ncols = a.shape
        for i in range(nrows):
            for j in range(ncols):
                a[i, j] = a[i, j] % p
        rank = 0
        for col in range(ncols):
            if rank == nrows:
                break
            piv = -1
            for r in range(rank, nrows):
                if a[r, col] != 0:
                    piv = r
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(ncols):
                    t = a[rank, j]
                    a[rank, j] = a[piv, j]
                    a[piv, j] = t
            # modular inverse by square-and-multiply
            base = a[rank, col]
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = (inv * base) % p
                base = (base * base) % p
                e >>= 1
            for j in range(ncols):
                a[rank, j] = (a[rank, j] * inv) % p
            for r in range(rank + 1, nrows):
                f = a[r, col]
                if f != 0:
                    for j in range(col, ncols):
                        a[r, j] = (a[r, j] - f * a[rank, j]) % p
            rank += 1
        return rank


def rank_mod_p(mat: np.ndarray, p: int = PRIME, *, backend: str | None = None) -> int:
    """Rank of an integer matrix over GF(p).

    ``backend`` is ``"numba"``, ``"numpy"`` or ``None`` (numba when available).
    """
    mat = np.ascontiguousarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0
    if backend is None:
        backend = "numba" if HAS_NUMBA else "numpy"
    if backend == "numba":
        if not HAS_NUMBA:
            raise RuntimeError("numba backend requested but numba is disabled")
        return int(_rank_mod_p_numba(mat, p))
    if backend == "numpy":
        return _rank_mod_p_numpy(mat, p)
    raise ValueError(f"unknown backend {backend!r}")
