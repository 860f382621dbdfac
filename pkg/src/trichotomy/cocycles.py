"""Regular mod-p cocycles on 2-complexes.

A cellular 1-cocycle ``c`` is turned into a weighted graph: one edge vertex
on every 1-cell where ``c`` is nonzero, and one interior vertex in every
2-cell whose boundary meets those 1-cells, joined by one arc to each such
boundary occurrence. The complement of that graph is modelled by pieces
(0-cells, whole or halved 1-cells, 2-cell interiors or sectors between
consecutive arcs) glued with union-find.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fplinalg
from .complexes import SubComplex, TwoComplex, _DSU
from .fplinalg import MatrixFp
from .kernels import min_weight
from .words import check_prime


class CocycleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Cochain1:
    p: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.int64, copy=True).reshape(-1) % self.p
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        return (isinstance(other, Cochain1) and self.p == other.p
                and np.array_equal(self.values, other.values))

    def __len__(self):
        return len(self.values)

    @property
    def support(self) -> tuple:
        return tuple(int(e) for e in np.flatnonzero(self.values))

    def coboundary(self, k: TwoComplex) -> np.ndarray:
        """Signed sum of the values around each 2-cell."""
        if len(self.values) != len(k.one_cells):
            raise CocycleError("cochain length differs from the 1-cell count")
        if not k.two_cells:
            return np.zeros(0, dtype=np.int64)
        return k.coboundary_1(self.p) @ self.values

    def is_cocycle(self, k: TwoComplex) -> bool:
        return not self.coboundary(k).any()

    def __sub__(self, other: "Cochain1") -> "Cochain1":
        return Cochain1(self.p, self.values - other.values)

    def __add__(self, other: "Cochain1") -> "Cochain1":
        return Cochain1(self.p, self.values + other.values)

    def to_sparse(self) -> list:
        return [[e, int(self.values[e])] for e in self.support]


def coboundary_of_vertices(k: TwoComplex, x, p: int) -> Cochain1:
    """``δ⁰x``: value ``x(head) − x(tail)`` on each 1-cell."""
    x = np.asarray(x, dtype=np.int64)
    vals = np.array([x[h] - x[t] for t, h in k.one_cells], dtype=np.int64)
    return Cochain1(p, vals)


def coboundary_space(k: TwoComplex, p: int) -> MatrixFp:
    """Row basis of ``im δ⁰`` in 1-cell coordinates."""
    if k.zero_cells == 0 or not k.one_cells:
        return MatrixFp.zeros(0, len(k.one_cells), p)
    return fplinalg.row_space_basis(k.coboundary_0(p))


def cohomology_basis(k: TwoComplex, p: int) -> list[np.ndarray]:
    """Cocycle representatives of a basis of ``H¹(k; F_p)``.

    Kernel vectors of ``δ¹`` are scanned in echelon order and kept when they
    are independent of ``im δ⁰`` and of those already kept.
    """
    p = check_prime(p)
    n = len(k.one_cells)
    if n == 0:
        return []
    if k.two_cells:
        z = fplinalg.kernel_basis(k.coboundary_1(p))
    else:
        z = list(np.eye(n, dtype=np.int64))
    if not z:
        return []
    span = coboundary_space(k, p).entries
    # pivot columns of the transposed stack are the greedily independent rows
    stacked = np.vstack([span, np.asarray(z)]) if span.shape[0] else np.asarray(z)
    _, piv = fplinalg.rref(MatrixFp(p, stacked.T))
    first = span.shape[0]
    return [np.asarray(z[c - first], dtype=np.int64) % p for c in piv if c >= first]


def cocycle_from_class(k: TwoComplex, class_coeffs, p: int) -> Cochain1:
    basis = cohomology_basis(k, p)
    coeffs = np.asarray(class_coeffs, dtype=np.int64).reshape(-1)
    if coeffs.shape[0] != len(basis):
        raise CocycleError(f"expected {len(basis)} class coefficients, got {coeffs.shape[0]}")
    vals = np.zeros(len(k.one_cells), dtype=np.int64)
    for a, v in zip(coeffs, basis):
        vals += a * v
    return Cochain1(p, vals)


def is_coboundary(k: TwoComplex, c: Cochain1) -> bool:
    if not c.values.any():
        return True
    return fplinalg.in_row_space(coboundary_space(k, c.p), c.values) if k.one_cells else True


# ---------------------------------------------------------------------------
# regular cocycles and their complements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegularModPCocycle:
    """Weighted graph dual to a cocycle.

    ``weights`` maps each supported 1-cell to its edge-vertex weight;
    ``arcs`` maps each star 2-cell to the boundary positions holding
    supported 1-cells (one arc per occurrence).
    """

    complex: TwoComplex = field(repr=False)
    p: int
    weights: dict
    arcs: dict

    @property
    def support(self) -> tuple:
        return tuple(sorted(self.weights))

    @property
    def star_cells(self) -> tuple:
        return tuple(sorted(self.arcs))

    @property
    def edge_vertex_count(self) -> int:
        return len(self.weights)

    @property
    def interior_vertex_count(self) -> int:
        return len(self.arcs)

    @property
    def arc_count(self) -> int:
        return sum(len(a) for a in self.arcs.values())

    def interior_sums(self) -> dict:
        """Signed weight sum at each interior vertex, mod p."""
        out = {}
        for f, positions in self.arcs.items():
            w = self.complex.two_cells[f]
            out[f] = sum(w[j][1] * self.weights[w[j][0]] for j in positions) % self.p
        return out

    def cochain(self) -> Cochain1:
        vals = np.zeros(len(self.complex.one_cells), dtype=np.int64)
        for e, w in self.weights.items():
            vals[e] = w
        return Cochain1(self.p, vals)

    def to_dict(self) -> dict:
        return {"p": self.p, "weights": [[e, self.weights[e]] for e in self.support]}


def regularize(k: TwoComplex, c: Cochain1) -> RegularModPCocycle:
    if len(c) != len(k.one_cells):
        raise CocycleError("cochain length differs from the 1-cell count")
    if not c.is_cocycle(k):
        raise CocycleError("not a cocycle: some 2-cell boundary sum is nonzero")
    supp = set(c.support)
    if not supp:
        raise CocycleError("a regular cocycle needs non-empty support")
    weights = {e: int(c.values[e]) for e in sorted(supp)}
    arcs = {}
    for f, w in enumerate(k.two_cells):
        pos = tuple(j for j, (e, _) in enumerate(w) if e in supp)
        if pos:
            arcs[f] = pos
    return RegularModPCocycle(k, c.p, weights, arcs)


def union_of(cocycles) -> RegularModPCocycle:
    """Union of regular cocycles with disjoint supports and star cells."""
    cocycles = list(cocycles)
    if not cocycles:
        raise CocycleError("empty union")
    k, p = cocycles[0].complex, cocycles[0].p
    weights, arcs = {}, {}
    for g in cocycles:
        if g.complex != k or g.p != p:
            raise CocycleError("cocycles live on different complexes or primes")
        if set(weights) & set(g.weights):
            raise CocycleError("supports are not disjoint")
        if set(arcs) & set(g.arcs):
            raise CocycleError("star cells are not disjoint")
        weights.update(g.weights)
        arcs.update(g.arcs)
    return RegularModPCocycle(k, p, dict(sorted(weights.items())), dict(sorted(arcs.items())))


@dataclass(frozen=True)
class ComplementDecomposition:
    """Component index for every complement piece.

    Piece keys: ``("v", vertex)``, ``("e", edge)`` for an unsupported 1-cell,
    ``("half", edge, 0|1)`` for the tail/head half of a supported 1-cell,
    ``("cell", f)`` for a 2-cell with no arcs and ``("sector", f, i)`` for the
    region after the ``i``-th arc of a star cell.
    """

    component_id: dict
    component_count: int

    def vertex_component(self, v: int) -> int:
        return self.component_id[("v", v)]


def _weights_and_arcs(k: TwoComplex, g):
    if g is None:
        return {}, {}
    if g.complex != k:
        raise CocycleError("cocycle lives on a different complex")
    return g.weights, g.arcs


def complement_components(k: TwoComplex, g: RegularModPCocycle | None) -> ComplementDecomposition:
    supp, arcs = _weights_and_arcs(k, g)
    keys: list = [("v", v) for v in range(k.zero_cells)]
    for e in range(len(k.one_cells)):
        if e in supp:
            keys += [("half", e, 0), ("half", e, 1)]
        else:
            keys.append(("e", e))
    for f in range(len(k.two_cells)):
        if f in arcs:
            keys += [("sector", f, i) for i in range(len(arcs[f]))]
        else:
            keys.append(("cell", f))
    index = {key: i for i, key in enumerate(keys)}
    dsu = _DSU(len(keys))

    for e, (t, h) in enumerate(k.one_cells):
        if e in supp:
            dsu.union(index[("half", e, 0)], index[("v", t)])
            dsu.union(index[("half", e, 1)], index[("v", h)])
        else:
            dsu.union(index[("e", e)], index[("v", t)])
            dsu.union(index[("e", e)], index[("v", h)])

    for f, w in enumerate(k.two_cells):
        if f not in arcs:
            here = index[("cell", f)]
            for e, _ in w:
                dsu.union(here, index[("e", e)])
            continue
        pos = arcs[f]
        m, length = len(pos), len(w)
        for i in range(m):
            here = index[("sector", f, i)]
            j0, j1 = pos[i], pos[(i + 1) % m]
            e0, s0 = w[j0]
            # second half of the occurrence at j0 in traversal order
            dsu.union(here, index[("half", e0, 1 if s0 == 1 else 0)])
            j = (j0 + 1) % length
            while j != j1:
                dsu.union(here, index[("e", w[j][0])])
                j = (j + 1) % length
            e1, s1 = w[j1]
            dsu.union(here, index[("half", e1, 0 if s1 == 1 else 1)])

    labels, count = dsu.labels()
    return ComplementDecomposition(dict(zip(keys, labels)), count)


def is_nonseparating(k: TwoComplex, g: RegularModPCocycle) -> bool:
    return complement_components(k, g).component_count == k.components()[1]


def unsupported_graph_components(k: TwoComplex, support) -> list[int]:
    """Component label per 0-cell in the graph of unsupported 1-cells."""
    supp = set(support)
    dsu = _DSU(k.zero_cells)
    for e, (t, h) in enumerate(k.one_cells):
        if e not in supp:
            dsu.union(t, h)
    return dsu.labels()[0]


# ---------------------------------------------------------------------------
# reduction to a non-separating representative
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of :func:`make_nonseparating`.

    ``cocycle`` is ``None`` exactly when the class was trivial.
    ``potential`` is a 0-cochain with ``input − output = δ⁰(potential)``;
    ``trace`` lists the edge-vertex count before each pass.
    """

    cocycle: RegularModPCocycle | None
    potential: np.ndarray
    trace: tuple

    @property
    def trivial(self) -> bool:
        return self.cocycle is None

    def output(self, k: TwoComplex, p: int) -> Cochain1:
        if self.cocycle is None:
            return Cochain1(p, np.zeros(len(k.one_cells), dtype=np.int64))
        return self.cocycle.cochain()


def make_nonseparating(k: TwoComplex, c: Cochain1) -> ReductionResult:
    p = c.p
    if not c.is_cocycle(k):
        raise CocycleError("not a cocycle: some 2-cell boundary sum is nonzero")
    ambient = k.components()[1]
    vals = c.values.copy()
    potential = np.zeros(k.zero_cells, dtype=np.int64)
    trace = []
    while True:
        cur = Cochain1(p, vals)
        if not cur.support:
            trace.append(0)
            return ReductionResult(None, potential % p, tuple(trace))
        g = regularize(k, cur)
        trace.append(g.edge_vertex_count)
        dec = complement_components(k, g)
        if dec.component_count == ambient:
            return ReductionResult(g, potential % p, tuple(trace))
        comp = [dec.vertex_component(v) for v in range(k.zero_cells)]
        best = None
        for e in g.support:
            t, h = k.one_cells[e]
            if comp[t] != comp[h]:
                for v in (t, h):
                    if best is None or (v, e) < best:
                        best = (v, e)
        v, e = best
        region = comp[v]
        chi = np.array([1 if comp[u] == region else 0 for u in range(k.zero_cells)], dtype=np.int64)
        t, h = k.one_cells[e]
        # choose the multiple of δχ that kills the value on e
        w = -int(vals[e]) if comp[t] == region else int(vals[e])
        step = coboundary_of_vertices(k, chi, p).values
        vals = (vals - w * step) % p
        potential = (potential + w * chi) % p


def restrict(c: Cochain1, sub: SubComplex) -> Cochain1:
    _, _, one_map, _ = sub.reindexed
    return Cochain1(c.p, c.values[one_map] if one_map else np.zeros(0, dtype=np.int64))


def vanish_on(k: TwoComplex, avoid: SubComplex, c: Cochain1):
    """Cohomologous cochain vanishing on ``avoid``, and the potential used.

    Raises :class:`CocycleError` when the restriction to ``avoid`` is not a
    coboundary there.
    """
    p = c.p
    sub, zero_map, one_map, _ = avoid.reindexed
    local = c.values[one_map] if one_map else np.zeros(0, dtype=np.int64)
    x_full = np.zeros(k.zero_cells, dtype=np.int64)
    if local.any():
        y = fplinalg.solve_in_span(sub.coboundary_0(p), local)
        if y is None:
            raise CocycleError("class does not restrict to zero on the avoided subcomplex")
        x_full[zero_map] = y
    adjusted = c - coboundary_of_vertices(k, x_full, p)
    return adjusted, x_full % p


def relative_nonseparating(k: TwoComplex, avoid: SubComplex, c: Cochain1) -> ReductionResult:
    if avoid.parent != k:
        raise CocycleError("avoided subcomplex belongs to another complex")
    adjusted, x = vanish_on(k, avoid, c)
    res = make_nonseparating(k, adjusted)
    return ReductionResult(res.cocycle, (res.potential + x) % c.p, res.trace)


# ---------------------------------------------------------------------------
# relative size
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelativeSize:
    value: Fraction
    min_support: int
    exact: bool
    representative: Cochain1 | None = None


def _greedy_descent(k: TwoComplex, vals: np.ndarray, p: int) -> np.ndarray:
    deltas = [coboundary_of_vertices(k, np.eye(k.zero_cells, dtype=np.int64)[v], p).values
              for v in range(k.zero_cells)]
    best = vals % p
    weight = int(np.count_nonzero(best))
    improved = True
    while improved:
        improved = False
        for d in deltas:
            for a in range(1, p):
                cand = (best + a * d) % p
                w = int(np.count_nonzero(cand))
                if w < weight:
                    best, weight, improved = cand, w, True
    return best


def relative_size(k: TwoComplex, c: Cochain1, budget: int = 1 << 22) -> RelativeSize:
    """Least support fraction over the representatives ``c + δ⁰x``."""
    n = len(k.one_cells)
    if n == 0:
        return RelativeSize(Fraction(0), 0, True, c)
    p = c.p
    basis = coboundary_space(k, p).entries
    if p ** basis.shape[0] <= budget:
        w, digits = min_weight(c.values, basis, p)
        rep = (c.values + digits @ basis) % p if basis.shape[0] else c.values
        return RelativeSize(Fraction(int(w), n), int(w), True, Cochain1(p, rep))
    rep = _greedy_descent(k, c.values, p)
    w = int(np.count_nonzero(rep))
    return RelativeSize(Fraction(w, n), w, False, Cochain1(p, rep))


def min_nonzero_class_support(k: TwoComplex, p: int, budget: int = 1 << 22, seed: int = 0):
    """Least support of a representative of any nonzero class, and an exact flag."""
    reps = cohomology_basis(k, p)
    if not reps:
        return None, True
    cob = coboundary_space(k, p).entries
    n = len(k.one_cells)
    basis = np.vstack([np.asarray(reps)] + ([cob] if cob.shape[0] else []))
    if p ** basis.shape[0] <= budget:
        w, _ = min_weight(np.zeros(n, dtype=np.int64), basis, p, nz_prefix=len(reps))
        return int(w), True
    rng = np.random.default_rng(seed)
    best = n
    trials = [np.eye(len(reps), dtype=np.int64)[i] for i in range(len(reps))]
    trials += [rng.integers(0, p, len(reps)) for _ in range(32)]
    for coeffs in trials:
        if not coeffs.any():
            continue
        vals = (coeffs @ np.asarray(reps)) % p
        best = min(best, relative_size(k, Cochain1(p, vals), budget).min_support)
    return best, False
