"""Hot elimination kernels over Z/p.

Every rank, kernel and solve in the package bottoms out in ``rref_mod_p``.
The numba kernel is used when numba imports and ``P1K_DISABLE_NUMBA`` is
unset (or ``0``); otherwise a vectorised numpy version runs.  Both produce
identical output, which the test-suite checks.

Entries are residues in ``[0, p)`` with ``p < 2**31`` so that every product
fits in int64.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def decorator(func):
            return func

        return decorator


def numba_enabled() -> bool:
    flag = os.environ.get("P1K_DISABLE_NUMBA", "")
    return NUMBA_AVAILABLE and flag in ("", "0")


@njit(cache=True)
def _inv_mod(a, p):
    # extended Euclid; a is a nonzero residue
    t, new_t = 0, 1
    r, new_r = p, a
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    if t < 0:
        t += p
    return t


@njit(cache=True)
def _rref_numba(a, p):
    m, n = a.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    nz = np.empty(n, dtype=np.int64)
    r = 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, n):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inv_mod(a[r, c], p)
        cnt = 0
        for j in range(c, n):
            if a[r, j] != 0:
                a[r, j] = (a[r, j] * inv) % p
                nz[cnt] = j
                cnt += 1
        for i in range(m):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            for t in range(cnt):
                j = nz[t]
                a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r].copy()


def _rref_numpy(a: np.ndarray, p: int) -> np.ndarray:
    m, n = a.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nzr = np.flatnonzero(a[r:, c])
        if nzr.size == 0:
            continue
        piv = r + int(nzr[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        rows = np.flatnonzero(a[:, c])
        rows = rows[rows != r]
        if rows.size:
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def rref_mod_p(a: np.ndarray, p: int, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``a`` over Z/p.

    Returns ``(R, pivots)``; the input is not modified.  ``backend`` forces
    ``"numba"`` or ``"numpy"``; by default the env flag decides.
    """
    work = np.array(a, dtype=np.int64, copy=True, order="C")
    if work.ndim != 2:
        raise ValueError("rref_mod_p expects a 2-d array")
    if backend is None:
        backend = "numba" if numba_enabled() else "numpy"
    if work.size == 0:
        return work, np.zeros(0, dtype=np.int64)
    if backend == "numba":
        pivots = _rref_numba(work, np.int64(p))
    elif backend == "numpy":
        pivots = _rref_numpy(work, p)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return work, pivots
