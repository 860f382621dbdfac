"""Hot inner loops, each with a jitted and a vectorized-numpy implementation.

The public functions dispatch on :data:`trichotomy._accel.USE_NUMBA`; both
paths return identical results (including tie-breaking), which the test
suite checks directly by calling the ``*_numba`` and ``*_numpy`` variants.
"""

import numpy as np

from . import _accel
from ._accel import njit

# ---------------------------------------------------------------------------
# reduced row echelon form over F_p
# ---------------------------------------------------------------------------


@njit
def _inv_mod(a, p):
    # extended Euclid; a is a nonzero residue
    t, new_t = 0, 1
    r, new_r = p, a
    while new_r != 0:
        q = r // new_r
        t, new_t = new_t, t - q * new_t
        r, new_r = new_r, r - q * new_r
    return t % p


@njit
def rref_numba(a, p, limit):
    rows, cols = a.shape
    pivots = np.empty(min(rows, limit), np.int64)
    r = 0
    for c in range(limit):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        inv = _inv_mod(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i != r:
                f = a[i, c]
                if f != 0:
                    for j in range(c, cols):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return pivots[:r]


def rref_numpy(a, p, limit):
    rows = a.shape[0]
    pivots = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), -1, p)
        if inv != 1:
            a[r] = (a[r] * inv) % p
        f = a[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            a[hit] = (a[hit] - np.outer(f[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def rref_inplace(a, p, limit=None):
    """Reduce ``a`` (int64, entries in [0, p)) in place; return pivot columns.

    Pivoting scans columns left to right and takes the first nonzero row at or
    below the current pivot row. Only the first ``limit`` columns are eligible
    as pivots, so ``[M | I]`` reduces ``M`` while recording the transform.
    """
    if limit is None:
        limit = a.shape[1]
    if a.shape[0] == 0 or limit == 0:
        return np.zeros(0, dtype=np.int64)
    if _accel.USE_NUMBA:
        return rref_numba(a, p, limit)
    return rref_numpy(a, p, limit)


# ---------------------------------------------------------------------------
# exhaustive Cheeger profile
# ---------------------------------------------------------------------------


@njit
def cut_profile_numba(n, ptr, nbr):
    half = n // 2
    big = np.int64(1) << 62
    minb = np.full(half + 1, big, np.int64)
    argm = np.zeros(half + 1, np.int64)
    deg = np.empty(n, np.int64)
    for v in range(n):
        deg[v] = ptr[v + 1] - ptr[v]
    cnt = np.zeros(n, np.int64)
    ina = np.zeros(n, np.bool_)
    mask = np.int64(0)
    size = 0
    bnd = 0
    total = np.int64(1) << n
    for step in range(1, total):
        v = 0
        s = step
        while (s & 1) == 0:
            s >>= 1
            v += 1
        if ina[v]:
            bnd += 2 * cnt[v] - deg[v]
            ina[v] = False
            size -= 1
            for k in range(ptr[v], ptr[v + 1]):
                cnt[nbr[k]] -= 1
        else:
            bnd += deg[v] - 2 * cnt[v]
            ina[v] = True
            size += 1
            for k in range(ptr[v], ptr[v + 1]):
                cnt[nbr[k]] += 1
        mask ^= np.int64(1) << v
        if size == 0 or size > half:
            continue
        cur = minb[size]
        if bnd < cur:
            minb[size] = bnd
            argm[size] = mask
        elif bnd == cur:
            x = mask ^ argm[size]
            low = x & -x
            if mask & low:
                argm[size] = mask
    return minb, argm


def cut_profile_numpy(n, ptr, nbr, chunk=1 << 18):
    half = n // 2
    big = np.int64(1) << 62
    minb = np.full(half + 1, big, np.int64)
    argm = np.zeros(half + 1, np.int64)
    us, vs = [], []
    for u in range(n):
        for k in range(ptr[u], ptr[u + 1]):
            v = int(nbr[k])
            if u < v:
                us.append(u)
                vs.append(v)
    us = np.asarray(us, dtype=np.uint64)
    vs = np.asarray(vs, dtype=np.uint64)
    shifts = np.arange(n, dtype=np.uint64)
    rev_weights = np.uint64(1) << (np.uint64(n - 1) - shifts)
    one = np.uint64(1)
    total = 1 << n
    for start in range(1, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        sizes = np.bitwise_count(masks).astype(np.int64)
        keep = sizes <= half
        masks, sizes = masks[keep], sizes[keep]
        if masks.size == 0:
            continue
        bnd = np.zeros(masks.size, dtype=np.int64)
        for u, v in zip(us, vs):
            bnd += (((masks >> u) ^ (masks >> v)) & one).astype(np.int64)
        # lexicographically smallest vertex set == largest bit-reversed mask
        bits = (masks[:, None] >> shifts[None, :]) & one
        rev = (bits * rev_weights[None, :]).sum(axis=1)
        for k in np.unique(sizes):
            sel = sizes == k
            b = bnd[sel]
            m = b.min()
            cand = np.flatnonzero(b == m)
            best = cand[np.argmax(rev[sel][cand])]
            mask = int(masks[sel][best])
            if m < minb[k]:
                minb[k] = m
                argm[k] = mask
            elif m == minb[k]:
                x = mask ^ int(argm[k])
                low = x & -x
                if mask & low:
                    argm[k] = mask
    return minb, argm


def cut_profile(n, ptr, nbr):
    """Minimum boundary size for every subset size ``1..n//2``.

    ``ptr``/``nbr`` is a CSR adjacency of the loop-free multigraph (each edge
    listed from both endpoints). Returns ``(minb, argmask)`` where
    ``minb[k]`` is the least ``|∂A|`` over ``|A| = k`` and ``argmask[k]`` the
    lexicographically smallest vertex set attaining it, as a bitmask.
    """
    if n > 62:
        raise ValueError("exhaustive cut enumeration supports at most 62 vertices")
    ptr = np.asarray(ptr, dtype=np.int64)
    nbr = np.asarray(nbr, dtype=np.int64)
    if n < 2:
        return np.zeros(1, np.int64), np.zeros(1, np.int64)
    if _accel.USE_NUMBA:
        return cut_profile_numba(n, ptr, nbr)
    return cut_profile_numpy(n, ptr, nbr)


# ---------------------------------------------------------------------------
# minimum Hamming weight over an affine span
# ---------------------------------------------------------------------------


@njit
def min_weight_numba(c, basis, p, nz_prefix):
    r, n = basis.shape
    cur = c.copy()
    digits = np.zeros(r, np.int64)
    best_digits = np.zeros(r, np.int64)
    best = n + 1
    if nz_prefix == 0:
        w = 0
        for j in range(n):
            if cur[j] != 0:
                w += 1
        best = w
    total = np.int64(1)
    for _ in range(r):
        total *= p
    nzc = 0
    for _ in range(1, total):
        i = 0
        while True:
            digits[i] += 1
            for j in range(n):
                cur[j] = (cur[j] + basis[i, j]) % p
            if digits[i] == p:
                digits[i] = 0
                if i < nz_prefix:
                    nzc -= 1
                i += 1
            else:
                if digits[i] == 1 and i < nz_prefix:
                    nzc += 1
                break
        if nz_prefix > 0 and nzc == 0:
            continue
        w = 0
        for j in range(n):
            if cur[j] != 0:
                w += 1
        if w < best:
            best = w
            for j in range(r):
                best_digits[j] = digits[j]
    return best, best_digits


def min_weight_numpy(c, basis, p, nz_prefix, chunk=1 << 16):
    r, n = basis.shape
    best = n + 1
    best_digits = np.zeros(r, np.int64)
    total = p ** r
    powers = p ** np.arange(r, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p
        vecs = (digits @ basis + c[None, :]) % p
        w = np.count_nonzero(vecs, axis=1)
        if nz_prefix > 0:
            ok = digits[:, :nz_prefix].any(axis=1)
            w = np.where(ok, w, n + 1)
        k = int(np.argmin(w))
        if w[k] < best:
            best = int(w[k])
            best_digits = digits[k].copy()
    return best, best_digits


def min_weight(c, basis, p, nz_prefix=0):
    """Least Hamming weight of ``c + x·basis`` over coefficient vectors ``x``.

    When ``nz_prefix > 0`` only ``x`` with a nonzero entry among the first
    ``nz_prefix`` coordinates count. Returns ``(weight, x)``; the first ``x``
    in base-``p`` counting order (coordinate 0 least significant) wins ties.
    A weight of ``n + 1`` means no admissible ``x`` exists.
    """
    c = np.asarray(c, dtype=np.int64) % p
    basis = np.asarray(basis, dtype=np.int64).reshape(-1, c.shape[0]) % p
    if basis.shape[0] == 0:
        if nz_prefix > 0:
            return c.shape[0] + 1, np.zeros(0, np.int64)
        return int(np.count_nonzero(c)), np.zeros(0, np.int64)
    if _accel.USE_NUMBA:
        w, d = min_weight_numba(c, basis, p, nz_prefix)
        return int(w), d
    return min_weight_numpy(c, basis, p, nz_prefix)
