"""Counting subnormal subgroups of p-power index and homology gradients."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cosets import (
    DEFAULT_MAX_COSETS,
    CosetBudgetExceeded,
    CosetTable,
    SubnormalChain,
    canonical_form,
    d_p_subgroup,
    index_p_normal_subgroups,
    trivial_table,
)
from .words import Presentation, check_prime, d_p

DEFAULT_MAX_NODES = 5000


@dataclass
class SubgroupNode:
    key: bytes
    level: int
    table: CosetTable = field(repr=False)
    d_p: int
    parents: list = field(default_factory=list)


@dataclass(frozen=True)
class LevelStats:
    level: int
    count: int
    r: int  # max d_p over the level


@dataclass(frozen=True)
class GrowthLedger:
    p: int
    d_p_group: int
    levels: tuple
    truncated: bool = False
    truncation_reason: str = ""
    nodes: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def counts(self) -> tuple:
        return tuple(s.count for s in self.levels)

    @property
    def r(self) -> tuple:
        return tuple(s.r for s in self.levels)

    def log_count_ratio(self) -> list[float]:
        """``log(a_n) / pⁿ`` per level (display only; reports keep the integers)."""
        return [math.log(s.count) / self.p ** s.level for s in self.levels]

    def r_partial_ratio(self) -> list[Fraction]:
        """``(Σ_{i<n} r_i) / pⁿ`` per level."""
        out, acc = [], 0
        for s in self.levels:
            out.append(Fraction(acc, self.p ** s.level))
            acc += s.r
        return out

    def inequality_checks(self) -> list[dict]:
        """Per level: ``a_n ≤ a_{n−1}·p^{r_{n−1}}`` and ``r_n − 1 ≤ pⁿ(d_p(G) − 1)``."""
        out = []
        for prev, cur in zip((None,) + self.levels, self.levels):
            row = {"level": cur.level}
            if prev is not None:
                row["count_bound"] = prev.count * self.p ** prev.r
                row["count_ok"] = cur.count <= row["count_bound"]
            row["r_bound"] = self.p ** cur.level * (self.d_p_group - 1) + 1
            row["r_ok"] = cur.count == 0 or cur.r <= row["r_bound"]  # empty levels hold vacuously
            out.append(row)
        return out

    def dag(self) -> dict:
        """Adjacency-list form: node key -> level, d_p, parent keys."""
        return {
            k.decode(): {"level": n.level, "d_p": n.d_p, "parents": [q.decode() for q in n.parents]}
            for k, n in self.nodes.items()
        }

    def to_dict(self, include_dag: bool = False) -> dict:
        out = {
            "schema": 1,
            "p": self.p,
            "d_p_group": self.d_p_group,
            "levels": [
                {"level": s.level, "index": self.p ** s.level, "count": s.count, "r": s.r,
                 "r_partial_ratio": [q.numerator, q.denominator]}
                for s, q in zip(self.levels, self.r_partial_ratio())
            ],
            "checks": self.inequality_checks(),
            "truncated": self.truncated,
        }
        if self.truncated:
            out["truncation_reason"] = self.truncation_reason
        if include_dag:
            out["dag"] = self.dag()
        return out

    def max_gradient_chain(self) -> SubnormalChain:
        """Chain from ``G`` to a deepest-level node of largest ``d_p``."""
        deepest = max(n.level for n in self.nodes.values())
        cands = [n for n in self.nodes.values() if n.level == deepest]
        node = max(cands, key=lambda n: (n.d_p, [-b for b in n.key]))
        path = [node]
        while node.parents:
            node = self.nodes[node.parents[0]]
            path.append(node)
        return SubnormalChain(tuple(n.table for n in reversed(path)), self.p)


def enumerate_subnormal(pres: Presentation, p: int, max_level: int,
                        max_cosets: int = DEFAULT_MAX_COSETS,
                        max_nodes: int = DEFAULT_MAX_NODES) -> GrowthLedger:
    """Level-by-level search: level ``n`` holds the distinct index-``pⁿ`` subnormal subgroups."""
    p = check_prime(p)
    if max_level < 0:
        raise ValueError("max_level must be non-negative")
    root = trivial_table(pres)
    key = canonical_form(root, p)
    nodes = {key: SubgroupNode(key, 0, root, d_p(pres, p))}
    current = [key]
    levels = [LevelStats(0, 1, nodes[key].d_p)]
    reason = ""
    for level in range(1, max_level + 1):
        if p ** level > max_cosets:
            reason = f"level {level}: index {p ** level} exceeds the coset budget {max_cosets}"
            break
        fresh: list = []
        for parent_key in current:
            for sub in index_p_normal_subgroups(nodes[parent_key].table, p):
                k = canonical_form(sub, p)
                node = nodes.get(k)
                if node is None:
                    if len(nodes) >= max_nodes:
                        reason = f"level {level}: node budget {max_nodes} exhausted"
                        break
                    node = SubgroupNode(k, level, sub, d_p_subgroup(sub, p))
                    nodes[k] = node
                    fresh.append(k)
                if parent_key not in node.parents:
                    node.parents.append(parent_key)
            if reason:
                break
        if reason:
            for k in fresh:
                del nodes[k]
            for n in nodes.values():
                n.parents = [q for q in n.parents if q in nodes]
            break
        current = fresh
        levels.append(LevelStats(level, len(fresh), max(nodes[k].d_p for k in fresh) if fresh else 0))
    return GrowthLedger(p, d_p(pres, p), tuple(levels), bool(reason), reason, nodes)


@dataclass(frozen=True)
class Gradient:
    indices: tuple
    d_p: tuple
    reduced: tuple  # (d_p − 1)/index
    plain: tuple  # d_p/index
    infimum_so_far: tuple
    non_increasing: bool

    def to_dict(self) -> dict:
        def fr(q):
            return [q.numerator, q.denominator]

        return {
            "indices": list(self.indices), "d_p": list(self.d_p),
            "reduced": [fr(q) for q in self.reduced], "plain": [fr(q) for q in self.plain],
            "infimum_so_far": [fr(q) for q in self.infimum_so_far],
            "non_increasing": self.non_increasing,
        }


def gradient(chain: SubnormalChain) -> Gradient:
    idx = tuple(t.index for t in chain.tables)
    dps = tuple(d_p_subgroup(t, chain.p) for t in chain.tables)
    reduced = tuple(Fraction(d - 1, n) for d, n in zip(dps, idx))
    plain = tuple(Fraction(d, n) for d, n in zip(dps, idx))
    inf, acc = [], None
    for q in reduced:
        acc = q if acc is None else min(acc, q)
        inf.append(acc)
    ok = all(b <= a for a, b in zip(reduced, reduced[1:]))
    return Gradient(idx, dps, reduced, plain, tuple(inf), ok)


def count_lower_bound(p: int, lam: Fraction, level: int) -> int:
    """``(p^{e} − 1)/(p − 1)`` with ``e = ⌊λ·p^{n−1}⌋ + 1``, for level ``n ≥ 1``."""
    e = math.floor(Fraction(lam) * p ** (level - 1)) + 1
    return (p ** e - 1) // (p - 1)


def growth_bound_diagnostics(ledger: GrowthLedger, lam: Fraction | None = None) -> dict:
    """Finite-level data on both sides of the growth equivalence; no verdict.

    The upper bound ``log a_n ≤ log p · Σ_{i<n} r_i`` is checked as the
    integer inequality ``a_n ≤ p^{Σ r_i}``.
    """
    if len(ledger.levels) < 2:
        raise ValueError("need at least two ledger levels")
    p = ledger.p
    rows = []
    acc = 0
    for s in ledger.levels:
        q = Fraction(acc, p ** s.level)
        row = {
            "level": s.level,
            "index": p ** s.level,
            "count": s.count,
            "r_partial_sum": acc,
            "r_partial_ratio": [q.numerator, q.denominator],
            "upper_bound_ok": s.count <= p ** acc if s.level else s.count == 1,
        }
        if lam is not None and s.level >= 1:
            bound = count_lower_bound(p, lam, s.level)
            row["lower_bound"] = bound
            row["lower_bound_ok"] = s.count >= bound
        rows.append(row)
        acc += s.r
    out = {"schema": 1, "p": p, "levels": rows, "truncated": ledger.truncated,
           "note": "finite prefix only; no asymptotic claim"}
    if lam is not None:
        lam = Fraction(lam)
        out["lambda"] = [lam.numerator, lam.denominator]
    return out


def walk_subnormal(pres: Presentation, p: int, max_level: int,
                   max_cosets: int = DEFAULT_MAX_COSETS):
    """Lazily yield ``(level, table)`` for distinct subnormal subgroups, level by level."""
    p = check_prime(p)
    root = trivial_table(pres)
    seen = {canonical_form(root, p)}
    yield 0, root
    current = [root]
    for level in range(1, max_level + 1):
        if p ** level > max_cosets:
            return
        fresh = []
        for parent in current:
            for sub in index_p_normal_subgroups(parent, p):
                k = canonical_form(sub, p)
                if k not in seen:
                    seen.add(k)
                    fresh.append(sub)
                    yield level, sub
        current = fresh


def greedy_max_gradient_chain(pres: Presentation, p: int, levels: int,
                              max_cosets: int = DEFAULT_MAX_COSETS) -> SubnormalChain:
    """Descend one level at a time into a child of largest ``d_p``.

    Ties go to the least canonical form, so the chain is deterministic.
    """
    p = check_prime(p)
    tabs = [trivial_table(pres)]
    for level in range(1, levels + 1):
        if p ** level > max_cosets:
            raise CosetBudgetExceeded(f"level {level}: index {p ** level} exceeds the coset budget {max_cosets}")
        children = index_p_normal_subgroups(tabs[-1], p)
        if not children:
            break
        scored = [(-d_p_subgroup(c, p), canonical_form(c, p), i) for i, c in enumerate(children)]
        tabs.append(children[min(scored)[2]])
    return SubnormalChain(tuple(tabs), p)
