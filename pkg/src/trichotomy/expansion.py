"""Cheeger constants of Schreier graphs and expansion diagnostics along chains."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cosets import SchreierGraph, SubnormalChain, coset_map, d_p_subgroup, schreier_graph
from .kernels import cut_profile

DEFAULT_MAX_VERTICES = 24
SPECTRAL_TOL = 1e-9
BRACKET_SLACK = 1e-6


class CheegerBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CheegerResult:
    """``value`` is ``None`` for a one-vertex graph (no admissible set).

    For ``method == "bounds"``, ``lower``/``upper`` bracket the true constant
    (floats, spectral) and ``value`` is the best sweep cut found.
    """

    value: Fraction | None
    witness: frozenset
    method: str
    lower: float | None = None
    upper: float | None = None
    spectral_upper: float | None = None
    fiedler_value: float | None = None
    profile: tuple = field(default=(), repr=False)  # least boundary for sizes 1..n//2
    size_masks: tuple = field(default=(), repr=False)  # lex-least set per size, as bitmasks

    def to_dict(self) -> dict:
        out = {
            "value": None if self.value is None else [self.value.numerator, self.value.denominator],
            "witness": sorted(self.witness),
            "method": self.method,
        }
        if self.method == "bounds":
            out["spectral"] = {"lower": self.lower, "upper": self.upper,
                               "sqrt_bound": self.spectral_upper, "lambda1": self.fiedler_value}
        return out


def _mask_to_set(mask: int) -> frozenset:
    out, v = [], 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return frozenset(out)


def cheeger_exact(x: SchreierGraph, max_vertices: int = DEFAULT_MAX_VERTICES) -> CheegerResult:
    n = x.vertex_count
    if n > max_vertices:
        raise CheegerBudgetExceeded(f"{n} vertices exceeds the exact-search budget of {max_vertices}")
    if n < 2:
        return CheegerResult(None, frozenset(), "exact")
    ptr, nbr = x.csr()
    minb, argm = cut_profile(n, ptr, nbr)
    best_k = min(range(1, n // 2 + 1), key=lambda k: (Fraction(int(minb[k]), k), k))
    return CheegerResult(
        Fraction(int(minb[best_k]), best_k), _mask_to_set(int(argm[best_k])), "exact",
        profile=tuple(int(b) for b in minb[1:]), size_masks=tuple(int(a) for a in argm[1:]),
    )


def minimizers_by_size(result: CheegerResult) -> dict:
    """Sizes attaining the exact constant, mapped to the lexicographically least set."""
    if result.method != "exact" or result.value is None:
        return {}
    return {
        k: _mask_to_set(mask)
        for k, (b, mask) in enumerate(zip(result.profile, result.size_masks), start=1)
        if Fraction(b, k) == result.value
    }


def laplacian(x: SchreierGraph) -> np.ndarray:
    n = x.vertex_count
    lap = np.zeros((n, n))
    for u, v, _ in x.edges:
        if u != v:
            lap[u, u] += 1
            lap[v, v] += 1
            lap[u, v] -= 1
            lap[v, u] -= 1
    return lap


def _components(x: SchreierGraph) -> list[list[int]]:
    adj = [[] for _ in range(x.vertex_count)]
    for u, v, _ in x.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen, comps = [False] * x.vertex_count, []
    for s in range(x.vertex_count):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if not seen[v]:
                    seen[v] = True
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def cheeger_bounds(x: SchreierGraph) -> CheegerResult:
    n = x.vertex_count
    if n < 2:
        return CheegerResult(None, frozenset(), "bounds")
    comps = _components(x)
    if len(comps) > 1:
        small = min(comps, key=lambda c: (len(c), c))
        return CheegerResult(Fraction(0), frozenset(small), "bounds", 0.0, 0.0, 0.0, 0.0)
    lap = laplacian(x)
    vals, vecs = np.linalg.eigh(lap)
    lam = max(float(vals[1]), 0.0)
    if lam < SPECTRAL_TOL:
        lam = 0.0
    kmax = int(np.max(np.diag(lap)))
    fiedler = vecs[:, 1]
    order = sorted(range(n), key=lambda v: (fiedler[v], v))
    best = None
    for seq in (order, order[::-1]):
        inside = set()
        for size, v in enumerate(seq[: n // 2], start=1):
            inside.add(v)
            val = Fraction(x.boundary(inside), size)
            cand = (val, size, sorted(inside))
            if best is None or cand < best:
                best = cand
    value, _, witness = best
    sqrt_bound = math.sqrt(2 * kmax * lam) + BRACKET_SLACK
    return CheegerResult(
        value, frozenset(witness), "bounds",
        lower=max(lam / 2 - BRACKET_SLACK, 0.0), upper=float(value),
        spectral_upper=sqrt_bound, fiedler_value=lam,
    )


def cheeger(x: SchreierGraph, max_vertices: int = DEFAULT_MAX_VERTICES) -> CheegerResult:
    """Exact when small enough, otherwise spectral bounds."""
    if x.vertex_count <= max_vertices:
        return cheeger_exact(x, max_vertices)
    return cheeger_bounds(x)


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


def _lt(a: Fraction | None, b: Fraction | None) -> bool:
    """Strict comparison where ``None`` means +infinity."""
    if a is None:
        return False
    return b is None or a < b


@dataclass(frozen=True)
class MinimizerReport:
    level: int
    strict_decrease: bool
    h: Fraction | None
    h_previous: Fraction | None
    witness: frozenset | None = None
    vertex_count: int = 0

    @property
    def compliant(self) -> bool:
        """``|V|/4 < |D| ≤ |V|/2`` when a decrease occurred; vacuous otherwise."""
        if not self.strict_decrease:
            return True
        d = len(self.witness or ())
        return 4 * d > self.vertex_count and 2 * d <= self.vertex_count

    def to_dict(self) -> dict:
        def frac(q):
            return None if q is None else [q.numerator, q.denominator]

        return {
            "level": self.level, "strict_decrease": self.strict_decrease,
            "h": frac(self.h), "h_previous": frac(self.h_previous),
            "witness": None if self.witness is None else sorted(self.witness),
            "vertex_count": self.vertex_count, "compliant": self.compliant,
        }


def minimizer_structure(chain: SubnormalChain, i: int,
                        max_vertices: int = DEFAULT_MAX_VERTICES) -> MinimizerReport:
    if i < 1 or i >= len(chain):
        raise IndexError("level must satisfy 1 <= i < len(chain)")
    cur = cheeger_exact(schreier_graph(chain.tables[i]), max_vertices)
    prev = cheeger_exact(schreier_graph(chain.tables[i - 1]), max_vertices)
    n = chain.tables[i].index
    if not _lt(cur.value, prev.value):
        return MinimizerReport(i, False, cur.value, prev.value, vertex_count=n)
    sizes = minimizers_by_size(cur)
    k = max(sizes)
    return MinimizerReport(i, True, cur.value, prev.value, sizes[k], n)


def deck_group_over(chain: SubnormalChain, i: int) -> list[list[int]]:
    """Deck transformations of level ``i`` over level ``i-1``."""
    t = chain.tables[i]
    proj = chain.projection(i)
    out = []
    for c in range(t.index):
        if proj[c] == proj[0]:
            m = coset_map(t, t, c)
            if m is not None:
                out.append(m)
    return out


def descend_invariant_set(chain: SubnormalChain, i: int, d_set) -> tuple:
    """Image of a deck-invariant vertex set and the boundary/size of both.

    Returns ``(image, (|∂D|, |D|), (|∂D'|, |D'|))``.
    """
    d = set(d_set)
    for g in deck_group_over(chain, i):
        if {g[v] for v in d} != d:
            raise ValueError("vertex set is not invariant under the deck group")
    proj = chain.projection(i)
    image = {proj[v] for v in d}
    up, down = schreier_graph(chain.tables[i]), schreier_graph(chain.tables[i - 1])
    return image, (up.boundary(d), len(d)), (down.boundary(image), len(image))


@dataclass(frozen=True)
class TauDiagnostics:
    p: int
    indices: tuple
    h: tuple  # CheegerResult per level
    d_p: tuple
    gradient: tuple  # (d_p − 1)/index as Fractions
    monotone_h: bool
    gradient_non_increasing: bool
    hint: str

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "levels": [
                {"index": n, "cheeger": r.to_dict(), "d_p": d, "gradient": [g.numerator, g.denominator]}
                for n, r, d, g in zip(self.indices, self.h, self.d_p, self.gradient)
            ],
            "monotone_h": self.monotone_h,
            "gradient_non_increasing": self.gradient_non_increasing,
            "hint": self.hint,
        }


def _h_interval(r: CheegerResult):
    if r.value is None:
        return math.inf, math.inf
    if r.method == "exact":
        return float(r.value), float(r.value)
    return r.lower, r.upper


def tau_diagnostics(chain: SubnormalChain, max_vertices: int = DEFAULT_MAX_VERTICES) -> TauDiagnostics:
    results, dps, grads = [], [], []
    for t in chain.tables:
        results.append(cheeger(schreier_graph(t), max_vertices))
        d = d_p_subgroup(t, chain.p)
        dps.append(d)
        grads.append(Fraction(d - 1, t.index))
    monotone = True
    for a, b in zip(results, results[1:]):
        lo_b, _ = _h_interval(b)
        _, hi_a = _h_interval(a)
        if lo_b > hi_a + BRACKET_SLACK:
            monotone = False
    grad_ok = all(b <= a for a, b in zip(grads, grads[1:]))
    finite = [_h_interval(r)[1] for r in results if r.value is not None]
    if len(finite) >= 2 and finite[-1] < finite[0] and finite[-1] <= finite[-2]:
        hint = "h decreasing toward 0 over the computed levels"
    else:
        hint = "h bounded below so far over the computed levels"
    return TauDiagnostics(chain.p, tuple(t.index for t in chain.tables), tuple(results),
                          tuple(dps), tuple(grads), monotone, grad_ok, hint)
