"""Independent brute-force references.

Nothing here imports the package's linear algebra or search code; each
function recomputes its quantity from definitions by enumeration.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def naive_free_reduce(word):
    w = list(word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i][0] == w[i + 1][0] and w[i][1] == -w[i + 1][1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def rank_by_minors(m, p: int) -> int:
    """Largest square submatrix with nonzero determinant mod ``p``."""
    a = [[int(x) % p for x in row] for row in np.asarray(m)]
    rows = len(a)
    cols = len(a[0]) if rows else 0

    def det(sub):
        # Laplace-free exact integer determinant via fraction elimination
        n = len(sub)
        mat = [[Fraction(x) for x in r] for r in sub]
        d = Fraction(1)
        for c in range(n):
            piv = next((r for r in range(c, n) if mat[r][c] != 0), None)
            if piv is None:
                return 0
            if piv != c:
                mat[c], mat[piv] = mat[piv], mat[c]
                d = -d
            d *= mat[c][c]
            for r in range(c + 1, n):
                f = mat[r][c] / mat[c][c]
                for k in range(c, n):
                    mat[r][k] -= f * mat[c][k]
        return int(d) % p

    best = 0
    for size in range(1, min(rows, cols) + 1):
        found = False
        for rs in itertools.combinations(range(rows), size):
            for cs in itertools.combinations(range(cols), size):
                if det([[a[r][c] for c in cs] for r in rs]):
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = size
    return best


def d_p_by_homomorphism_count(pres, p: int) -> int:
    """``log_p`` of the number of homomorphisms to ``Z/p``."""
    n = pres.generator_count
    count = 0
    for imgs in itertools.product(range(p), repeat=n):
        if all(sum(imgs[g] * s for g, s in r) % p == 0 for r in pres.relators):
            count += 1
    d = 0
    while p ** d < count:
        d += 1
    assert p ** d == count
    return d


def brute_cheeger(vertex_count: int, edges) -> Fraction | None:
    """``min |∂A|/|A|`` over ``0 < |A| ≤ n/2``; loops never count."""
    if vertex_count < 2:
        return None
    best = None
    for size in range(1, vertex_count // 2 + 1):
        for subset in itertools.combinations(range(vertex_count), size):
            s = set(subset)
            boundary = sum(1 for u, v, *_ in edges if (u in s) != (v in s))
            q = Fraction(boundary, size)
            if best is None or q < best:
                best = q
    return best


def brute_min_distance(g, p: int) -> int:
    g = np.asarray(g, dtype=np.int64)
    k, n = g.shape
    best = n + 1
    for coeffs in itertools.product(range(p), repeat=k):
        if not any(coeffs):
            continue
        w = int(np.count_nonzero((np.array(coeffs) @ g) % p))
        best = min(best, w)
    return best


def brute_min_support_in_class(vertex_count, one_cells, values, p: int) -> int:
    """Least support of ``values + δx`` over every vertex potential ``x``."""
    vals = np.asarray(values, dtype=np.int64) % p
    tails = np.array([t for t, _ in one_cells], dtype=np.int64)
    heads = np.array([h for _, h in one_cells], dtype=np.int64)
    best = len(vals) + 1
    for x in itertools.product(range(p), repeat=vertex_count):
        x = np.array(x, dtype=np.int64)
        cand = (vals + x[heads] - x[tails]) % p
        best = min(best, int(np.count_nonzero(cand)))
    return best


def brute_connected(vertex_count: int, edges) -> bool:
    if vertex_count == 0:
        return True
    adj = {v: set() for v in range(vertex_count)}
    for u, v, *_ in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen, stack = {0}, [0]
    while stack:
        u = stack.pop()
        for v in adj[u] - seen:
            seen.add(v)
            stack.append(v)
    return len(seen) == vertex_count


def _perm_group_order(gens, n: int) -> int:
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[x[i]] for i in range(n))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def count_p_subnormal_by_permutations(pres, n: int, p: int) -> int:
    """Index-``n`` subgroups whose core quotient is a ``p``-group.

    Such subgroups are the stabilisers of transitive actions on ``n`` points
    with ``p``-group monodromy; each subgroup arises from ``(n−1)!`` labelled
    actions with basepoint 0.
    """
    perms = list(itertools.permutations(range(n)))
    total = 0
    for imgs in itertools.product(perms, repeat=pres.generator_count):
        ok = True
        for rel in pres.relators:
            pt = list(range(n))
            for g, s in rel:
                perm = imgs[g]
                if s == -1:
                    inv = [0] * n
                    for i, v in enumerate(perm):
                        inv[v] = i
                    perm = inv
                pt = [perm[x] for x in pt]
            if pt != list(range(n)):
                ok = False
                break
        if not ok:
            continue
        reach, stack = {0}, [0]
        while stack:
            u = stack.pop()
            for perm in imgs:
                for v in (perm[u], perm.index(u)):
                    if v not in reach:
                        reach.add(v)
                        stack.append(v)
        if len(reach) != n:
            continue
        order = _perm_group_order(imgs, n)
        while order % p == 0:
            order //= p
        if order == 1:
            total += 1
    fact = 1
    for i in range(2, n):
        fact *= i
    assert total % fact == 0
    return total // fact
