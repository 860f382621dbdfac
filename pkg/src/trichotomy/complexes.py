"""Combinatorial 2-complexes, their covers and cellular homology over F_p."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fplinalg
from .cosets import CosetTable
from .fplinalg import MatrixFp
from .words import Presentation, check_prime


class ComplexError(ValueError):
    pass


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb

    def labels(self):
        """Component id per element, numbered by first appearance."""
        ids, out = {}, []
        for x in range(len(self.parent)):
            r = self.find(x)
            out.append(ids.setdefault(r, len(ids)))
        return out, len(ids)


@dataclass(frozen=True)
class TwoComplex:
    """0-cells ``0..V-1``; 1-cells ``(tail, head)``; 2-cells as signed edge paths.

    ``labels`` optionally records the generator labelling each 1-cell (for
    presentation complexes and their covers).
    """

    zero_cells: int
    one_cells: tuple
    two_cells: tuple = ()
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        ones = tuple((int(a), int(b)) for a, b in self.one_cells)
        twos = tuple(tuple((int(e), int(s)) for e, s in w) for w in self.two_cells)
        object.__setattr__(self, "one_cells", ones)
        object.__setattr__(self, "two_cells", twos)
        object.__setattr__(self, "labels", tuple(self.labels))
        for a, b in ones:
            if not (0 <= a < self.zero_cells and 0 <= b < self.zero_cells):
                raise ComplexError("1-cell endpoint out of range")
        for f, w in enumerate(twos):
            if not w:
                raise ComplexError(f"2-cell {f} has an empty boundary")
            for j, (e, s) in enumerate(w):
                if not 0 <= e < len(ones) or s not in (1, -1):
                    raise ComplexError(f"2-cell {f}: bad boundary letter {(e, s)}")
                e2, s2 = w[(j + 1) % len(w)]
                if self.end(e, s) != self.start(e2, s2):
                    raise ComplexError(f"2-cell {f}: boundary path is not closed at position {j}")

    @classmethod
    def _trusted(cls, zero_cells, one_cells, two_cells, labels=()) -> "TwoComplex":
        """Build without validation; inputs must already be normalized tuples."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "zero_cells", zero_cells)
        object.__setattr__(obj, "one_cells", one_cells)
        object.__setattr__(obj, "two_cells", two_cells)
        object.__setattr__(obj, "labels", labels)
        return obj

    def start(self, e, s):
        t, h = self.one_cells[e]
        return t if s == 1 else h

    def end(self, e, s):
        t, h = self.one_cells[e]
        return h if s == 1 else t

    @property
    def euler_characteristic(self) -> int:
        return self.zero_cells - len(self.one_cells) + len(self.two_cells)

    @cached_property
    def valence(self) -> tuple:
        val = [0] * len(self.one_cells)
        for w in self.two_cells:
            for e, _ in w:
                val[e] += 1
        return tuple(val)

    def corner_vertices(self, f: int) -> list[int]:
        return [self.start(e, s) for e, s in self.two_cells[f]]

    def components(self):
        """Connected-component id of each 0-cell and the component count."""
        dsu = _DSU(self.zero_cells)
        for a, b in self.one_cells:
            dsu.union(a, b)
        return dsu.labels()

    def boundary_1(self, p: int) -> MatrixFp:
        """``∂₁``: rows are 0-cells, columns 1-cells."""
        m = np.zeros((self.zero_cells, len(self.one_cells)), dtype=np.int64)
        for e, (a, b) in enumerate(self.one_cells):
            m[b, e] += 1
            m[a, e] -= 1
        return MatrixFp(p, m)

    def boundary_2(self, p: int) -> MatrixFp:
        """``∂₂``: rows are 1-cells, columns 2-cells (signed occurrence counts)."""
        m = np.zeros((len(self.one_cells), len(self.two_cells)), dtype=np.int64)
        for f, w in enumerate(self.two_cells):
            for e, s in w:
                m[e, f] += s
        return MatrixFp(p, m)

    def coboundary_0(self, p: int) -> MatrixFp:
        """``δ⁰`` as a matrix whose rows are the coboundaries of 0-cell indicators."""
        return self.boundary_1(p)

    def coboundary_1(self, p: int) -> MatrixFp:
        """``δ¹``: rows are 2-cells, columns 1-cells."""
        return self.boundary_2(p).T

    def to_dict(self) -> dict:
        out = {
            "zero_cells": self.zero_cells,
            "one_cells": [list(e) for e in self.one_cells],
            "two_cells": [[list(x) for x in w] for w in self.two_cells],
        }
        if self.labels:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "TwoComplex":
        return cls(
            d["zero_cells"],
            tuple(tuple(e) for e in d["one_cells"]),
            tuple(tuple(tuple(x) for x in w) for w in d["two_cells"]),
            tuple(d.get("labels", ())),
        )

    def disjoint_union(self, other: "TwoComplex") -> "TwoComplex":
        v, e = self.zero_cells, len(self.one_cells)
        ones = self.one_cells + tuple((a + v, b + v) for a, b in other.one_cells)
        twos = self.two_cells + tuple(tuple((x + e, s) for x, s in w) for w in other.two_cells)
        return TwoComplex(v + other.zero_cells, ones, twos)


@dataclass(frozen=True)
class HomologyProfile:
    p: int
    d0: int
    d1: int
    rank_boundary_1: int
    rank_boundary_2: int


def homology_profile(k: TwoComplex, p: int) -> HomologyProfile:
    p = check_prime(p)
    r1 = fplinalg.rank(k.boundary_1(p))
    r2 = fplinalg.rank(k.boundary_2(p))
    return HomologyProfile(p, k.zero_cells - r1, len(k.one_cells) - r1 - r2, r1, r2)


def d_p_complex(k: TwoComplex, p: int) -> int:
    return homology_profile(k, p).d1


def presentation_complex(pres: Presentation) -> TwoComplex:
    n = pres.generator_count
    ones = tuple((0, 0) for _ in range(n))
    twos = tuple(tuple(r) for r in pres.relators)
    return TwoComplex(1, ones, twos, tuple(range(n)))


def covering_complex(k: TwoComplex, t: CosetTable) -> TwoComplex:
    """Cover of the presentation complex ``k`` corresponding to ``t``'s subgroup.

    1-cell ``c·n + g`` runs from coset ``c`` to ``c·g``; there is one 2-cell
    per (coset, relator), the lift of the relator starting at that coset.
    """
    pres = t.presentation
    if k != presentation_complex(pres):
        raise ComplexError("complex is not the presentation complex of the table's presentation")
    n = pres.generator_count
    fwd, inv = t.action, t.inverse_action
    ones = tuple((c, fwd[g][c]) for c in range(t.index) for g in range(n))
    twos = []
    for c in range(t.index):
        for r in pres.relators:
            cur, cell = c, []
            for g, s in r:
                if s == 1:
                    cell.append((cur * n + g, 1))
                    cur = fwd[g][cur]
                else:
                    cur = inv[g][cur]
                    cell.append((cur * n + g, -1))
            if cur != c:
                raise ComplexError("relator lift does not close; table is not over this presentation")
            twos.append(tuple(cell))
    labels = tuple(g for _ in range(t.index) for g in range(n))
    return TwoComplex(t.index, ones, tuple(twos), labels)


def cover_of(t: CosetTable) -> TwoComplex:
    """``covering_complex`` over the presentation complex of ``t``'s presentation."""
    return covering_complex(presentation_complex(t.presentation), t)


# ---------------------------------------------------------------------------
# subcomplexes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubComplex:
    parent: TwoComplex
    kept_zero: frozenset
    kept_one: frozenset
    kept_two: frozenset = frozenset()

    def __post_init__(self):
        for name in ("kept_zero", "kept_one", "kept_two"):
            object.__setattr__(self, name, frozenset(int(x) for x in getattr(self, name)))
        k = self.parent
        for e in self.kept_one:
            a, b = k.one_cells[e]
            if a not in self.kept_zero or b not in self.kept_zero:
                raise ComplexError(f"1-cell {e} kept without its endpoints")
        for f in self.kept_two:
            if any(e not in self.kept_one for e, _ in k.two_cells[f]):
                raise ComplexError(f"2-cell {f} kept without its boundary")

    @classmethod
    def closure(cls, k: TwoComplex, zero=(), one=(), two=()) -> "SubComplex":
        two = set(two)
        one = set(one)
        for f in two:
            one.update(e for e, _ in k.two_cells[f])
        zero = set(zero)
        for e in one:
            zero.update(k.one_cells[e])
        return cls(k, frozenset(zero), frozenset(one), frozenset(two))

    @classmethod
    def whole(cls, k: TwoComplex) -> "SubComplex":
        return cls(k, frozenset(range(k.zero_cells)), frozenset(range(len(k.one_cells))),
                   frozenset(range(len(k.two_cells))))

    def cells(self):
        return (self.kept_zero, self.kept_one, self.kept_two)

    def __and__(self, other: "SubComplex") -> "SubComplex":
        return SubComplex(self.parent, self.kept_zero & other.kept_zero,
                          self.kept_one & other.kept_one, self.kept_two & other.kept_two)

    def __or__(self, other: "SubComplex") -> "SubComplex":
        return SubComplex(self.parent, self.kept_zero | other.kept_zero,
                          self.kept_one | other.kept_one, self.kept_two | other.kept_two)

    @cached_property
    def reindexed(self):
        """``(complex, zero_map, one_map, two_map)``; maps go sub index -> parent index."""
        k = self.parent
        z, o, t = sorted(self.kept_zero), sorted(self.kept_one), sorted(self.kept_two)
        zi = {v: i for i, v in enumerate(z)}
        oi = {e: i for i, e in enumerate(o)}
        ones = tuple((zi[k.one_cells[e][0]], zi[k.one_cells[e][1]]) for e in o)
        twos = tuple(tuple((oi[e], s) for e, s in k.two_cells[f]) for f in t)
        labels = tuple(k.labels[e] for e in o) if k.labels else ()
        return TwoComplex._trusted(len(z), ones, twos, labels), z, o, t

    def as_complex(self) -> TwoComplex:
        return self.reindexed[0]

    def relative_to(self, outer: "SubComplex") -> "SubComplex":
        """This subcomplex seen inside ``outer.as_complex()``."""
        if outer.parent != self.parent:
            raise ComplexError("subcomplexes of different complexes")
        cx, z, o, t = outer.reindexed
        zi = {v: i for i, v in enumerate(z)}
        oi = {e: i for i, e in enumerate(o)}
        ti = {f: i for i, f in enumerate(t)}
        try:
            return SubComplex(cx, frozenset(zi[v] for v in self.kept_zero),
                              frozenset(oi[e] for e in self.kept_one),
                              frozenset(ti[f] for f in self.kept_two))
        except KeyError as exc:
            raise ComplexError("subcomplex is not contained in the outer one") from exc

    def profile(self, p: int) -> HomologyProfile:
        return homology_profile(self.as_complex(), p)


def cut_decomposition(k: TwoComplex, d_set):
    """``(A, B, C)``: closures of the cells meeting ``d_set`` / its complement, and ``A ∩ B``."""
    d = set(int(v) for v in d_set)
    if not d or len(d) >= k.zero_cells or not d <= set(range(k.zero_cells)):
        raise ComplexError("d_set must be a non-empty proper subset of the 0-cells")
    dc = set(range(k.zero_cells)) - d

    def meeting(side):
        ones = [e for e, (a, b) in enumerate(k.one_cells) if a in side or b in side]
        twos = [f for f in range(len(k.two_cells)) if any(v in side for v in k.corner_vertices(f))]
        return SubComplex.closure(k, side, ones, twos)

    a, b = meeting(d), meeting(dc)
    return a, b, a & b


def labelled_subgraph_pullback(t: CosetTable, label_set, k: TwoComplex | None = None) -> SubComplex:
    """Subgraph of the cover's 1-skeleton made of edges with labels in ``label_set``."""
    if k is None:
        k = cover_of(t)
    labels = set(label_set)
    if not labels <= set(range(t.presentation.generator_count)):
        raise ComplexError("label outside the generator range")
    ones = [e for e, g in enumerate(k.labels) if g in labels]
    return SubComplex(k, frozenset(range(k.zero_cells)), frozenset(ones))


def cycle_basis_in_parent(sub: SubComplex, p: int) -> np.ndarray:
    """Basis of ``Z₁(sub)`` written in the parent's 1-cell coordinates (rows)."""
    cx, _, one_map, _ = sub.reindexed
    basis = fplinalg.kernel_basis(cx.boundary_1(p)) if cx.one_cells else []
    out = np.zeros((len(basis), len(sub.parent.one_cells)), dtype=np.int64)
    for i, v in enumerate(basis):
        out[i, one_map] = v
    return out


def homology_image_dim(k: TwoComplex, cycles: np.ndarray, p: int) -> int:
    """Dimension of the image of the span of ``cycles`` (rows) in ``H₁(k; F_p)``."""
    bnd = k.boundary_2(p).T.entries  # rows: boundaries of 2-cells
    if bnd.shape[0] == 0:
        bnd = np.zeros((0, len(k.one_cells)), dtype=np.int64)
    both = MatrixFp(p, np.vstack([cycles.reshape(-1, len(k.one_cells)), bnd]))
    return fplinalg.rank(both) - fplinalg.rank(MatrixFp(p, bnd))


def pullback_report(t: CosetTable, label_set, p: int) -> dict:
    """Connectivity of the labelled pullback and surjectivity on ``H₁(·; F_p)``."""
    k = cover_of(t)
    sub = labelled_subgraph_pullback(t, label_set, k)
    cx = sub.as_complex()
    _, ncomp = cx.components()
    image = homology_image_dim(k, cycle_basis_in_parent(sub, p), p)
    total = homology_profile(k, p).d1
    return {"connected": ncomp == 1, "components": ncomp, "image_dim": image,
            "d1_cover": total, "surjective": image == total}


def homology_basis_labels(pres: Presentation, p: int) -> list[int]:
    """Greedy set of generators whose images form a basis of ``H₁(G; F_p)``."""
    from .words import abelianized_mod_p

    rel = abelianized_mod_p(pres, p)
    chosen: list[int] = []
    cur = rel
    for g in range(pres.generator_count):
        e = np.zeros((1, pres.generator_count), dtype=np.int64)
        e[0, g] = 1
        trial = cur.stack(MatrixFp(p, e))
        if fplinalg.rank(trial) > fplinalg.rank(cur):
            chosen.append(g)
            cur = trial
    return chosen


def is_homology_basis(pres: Presentation, labels, p: int) -> bool:
    from .words import abelianized_mod_p, d_p

    labels = list(labels)
    if len(labels) != d_p(pres, p) or len(set(labels)) != len(labels):
        return False
    rel = abelianized_mod_p(pres, p)
    e = np.zeros((len(labels), pres.generator_count), dtype=np.int64)
    for i, g in enumerate(labels):
        e[i, g] = 1
    return fplinalg.rank(rel.stack(MatrixFp(p, e))) == fplinalg.rank(rel) + len(labels)


def hypothesis_violations(k: TwoComplex) -> dict:
    """1-cells of valence 0 or 1 and 0-cells whose link is disconnected.

    Interior points of valence-0 1-cells are locally separating; so is a 0-cell
    whose link graph (edge ends joined by 2-cell corners) is disconnected.
    """
    val = k.valence
    ends = 2 * len(k.one_cells)
    dsu = _DSU(ends)
    for w in k.two_cells:
        m = len(w)
        for j in range(m):
            e, s = w[j]
            e2, s2 = w[(j + 1) % m]
            arrive = 2 * e + (1 if s == 1 else 0)
            leave = 2 * e2 + (0 if s2 == 1 else 1)
            dsu.union(arrive, leave)
    at_vertex = [[] for _ in range(k.zero_cells)]
    for e, (a, b) in enumerate(k.one_cells):
        at_vertex[a].append(2 * e)
        at_vertex[b].append(2 * e + 1)
    separating = [v for v in range(k.zero_cells)
                  if len({dsu.find(x) for x in at_vertex[v]}) > 1]
    return {
        "valence_one": [e for e, x in enumerate(val) if x == 1],
        "valence_zero": [e for e, x in enumerate(val) if x == 0],
        "locally_separating_vertices": separating,
    }
