"""Largeness certificates from vertex cuts of covering complexes.

A cut ``D`` of the 0-cells splits a cover ``K`` into ``A`` (closure of the
cells meeting ``D``), ``B`` (same for the complement) and ``C = A ∩ B``.
When both restriction maps ``H¹(A) → H¹(C)`` and ``H¹(B) → H¹(C)`` have
nonzero kernels, kernel classes are pushed off ``C`` and made
non-separating; the two resulting disjoint cocycles map the cover's
fundamental group onto ``Z/p * Z/p``. Everything is re-checkable from the
JSON form by :func:`verify_certificate`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import fplinalg
from .cocycles import (
    Cochain1,
    CocycleError,
    RegularModPCocycle,
    cohomology_basis,
    coboundary_space,
    complement_components,
    regularize,
    relative_nonseparating,
    union_of,
)
from .complexes import (
    SubComplex,
    TwoComplex,
    cover_of,
    cut_decomposition,
    cycle_basis_in_parent,
    homology_image_dim,
    homology_profile,
    is_homology_basis,
    labelled_subgraph_pullback,
)
from .cosets import (
    CosetTable,
    canonical_form,
    deck_permutations,
    schreier_graph,
    table_from_canonical,
)
from .fplinalg import MatrixFp
from .words import d_p, parse_presentation


class CertificationError(ValueError):
    pass


class CutBudgetExceeded(RuntimeError):
    """A cut enumeration would exceed the subset budget."""


# ---------------------------------------------------------------------------
# homological quantities of a cut
# ---------------------------------------------------------------------------


def _d1(sub: SubComplex, p: int) -> int:
    return sub.profile(p).d1


def hp_exponent(k: TwoComplex, d_set, p: int) -> int:
    a, b, c = cut_decomposition(k, d_set)
    return _d1(c, p) - min(_d1(a, p), _d1(b, p))


def hp_upper_bound(k: TwoComplex, d_set, p: int) -> Fraction:
    """``|H₁(C)| / min(|H₁(A)|, |H₁(B)|)`` for the vertex cut ``d_set``."""
    return Fraction(p) ** hp_exponent(k, d_set, p)


def hp_threshold(p: int) -> Fraction:
    return Fraction(1, 2) if p == 2 else Fraction(1)


def restriction_kernel_dim(side: SubComplex, inner: SubComplex, p: int) -> int:
    """Dimension of the kernel of ``H¹(side) → H¹(inner)``."""
    cx = side.as_complex()
    d1 = homology_profile(cx, p).d1
    if d1 == 0:
        return 0
    n = len(cx.one_cells)
    z = fplinalg.kernel_basis(cx.coboundary_1(p)) if cx.two_cells else list(np.eye(n, dtype=np.int64))
    inner_cx, _, inner_edges, _ = inner.relative_to(side).reindexed
    if not inner_edges:
        return d1
    restricted = np.asarray(z)[:, inner_edges]
    cob = coboundary_space(inner_cx, p).entries
    both = MatrixFp(p, np.vstack([cob, restricted]))
    return d1 - (fplinalg.rank(both) - cob.shape[0])


def restriction_kernel(side: SubComplex, inner: SubComplex, p: int):
    """Kernel of ``H¹(side) → H¹(inner)``.

    Returns ``(dimension, cocycles)`` where the cocycles live on
    ``side.as_complex()`` and represent a basis of the kernel.
    """
    cx = side.as_complex()
    reps = cohomology_basis(cx, p)
    if not reps:
        return 0, []
    rel = inner.relative_to(side)
    inner_cx, _, inner_edges, _ = rel.reindexed
    reps = np.asarray(reps)
    restricted = reps[:, inner_edges] if inner_edges else np.zeros((len(reps), 0), dtype=np.int64)
    cob = coboundary_space(inner_cx, p).entries
    stacked = MatrixFp(p, np.vstack([restricted, cob]) if cob.shape[0] else restricted)
    # rows combining to zero: their coefficients on the reps span the kernel
    relations = fplinalg.kernel_basis(stacked.T)
    if not relations:
        return 0, []
    coeffs = MatrixFp(p, np.asarray(relations)[:, : len(reps)])
    basis = fplinalg.row_space_basis(coeffs).entries
    cocycles = [(row @ reps) % p for row in basis]
    return len(cocycles), cocycles


class CutEvaluator:
    """Fast homological bookkeeping for many vertex cuts of one complex.

    Boundary matrices of ``k`` are built once; every subcomplex quantity is
    computed on row/column slices, so no intermediate complexes are built.
    """

    def __init__(self, k: TwoComplex, p: int):
        self.k, self.p = k, p
        self.d1_full = k.boundary_1(p).entries
        self.d2_full = k.boundary_2(p).entries
        e = np.asarray(k.one_cells, dtype=np.int64).reshape(-1, 2)
        self.tails, self.heads = e[:, 0], e[:, 1]
        nf = len(k.two_cells)
        self.cell_edges = np.zeros((nf, len(k.one_cells)), dtype=bool)
        self.cell_corners = np.zeros((nf, k.zero_cells), dtype=bool)
        for f, w in enumerate(k.two_cells):
            for x, s in w:
                self.cell_edges[f, x] = True
                self.cell_corners[f, k.start(x, s)] = True

    def _closure_meeting(self, side: np.ndarray):
        edges = side[self.tails] | side[self.heads]
        cells = (self.cell_corners & side[None, :]).any(axis=1)
        if cells.any():
            edges = edges | self.cell_edges[cells].any(axis=0)
        verts = side.copy()
        verts[self.tails[edges]] = True
        verts[self.heads[edges]] = True
        return verts, edges, cells

    def decompose(self, d_set):
        inside = np.zeros(self.k.zero_cells, dtype=bool)
        inside[list(d_set)] = True
        a = self._closure_meeting(inside)
        b = self._closure_meeting(~inside)
        c = tuple(x & y for x, y in zip(a, b))
        return a, b, c

    def _rank(self, m: np.ndarray) -> int:
        if m.size == 0:
            return 0
        return fplinalg.rank(MatrixFp(self.p, m))

    def d1(self, part) -> int:
        v, e, f = part
        r1 = self._rank(self.d1_full[np.ix_(v, e)])
        r2 = self._rank(self.d2_full[np.ix_(e, f)])
        return int(e.sum()) - r1 - r2

    def kernel_dim(self, side, inner, d1_side: int | None = None) -> int:
        """Dimension of the kernel of ``H¹(side) → H¹(inner)``."""
        d1 = self.d1(side) if d1_side is None else d1_side
        if d1 == 0:
            return 0
        v, e, f = side
        ce = inner[1][e]  # inner edges, in side-edge coordinates
        if not ce.any():
            return d1
        p = self.p
        if f.any():
            z = fplinalg.kernel_basis(MatrixFp(p, self.d2_full[np.ix_(e, f)].T))
            z = np.asarray(z).reshape(-1, int(e.sum()))
        else:
            z = np.eye(int(e.sum()), dtype=np.int64)
        restricted = z[:, ce]
        cob = self.d1_full[np.ix_(inner[0], inner[1])]
        r_cob = self._rank(cob)
        return d1 - (self._rank(np.vstack([cob, restricted])) - r_cob)

    def summary(self, d_set) -> dict:
        a, b, c = self.decompose(d_set)
        da, db, dc = self.d1(a), self.d1(b), self.d1(c)
        return {
            "d_p": (da, db, dc),
            "hp_exponent": dc - min(da, db),
            "kernel_dims": (self.kernel_dim(a, c, da), self.kernel_dim(b, c, db)),
        }


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificationFailure:
    d_set: tuple
    p: int
    reason: str
    kernel_dims: tuple
    hp_exponent: int

    succeeded = False

    def to_dict(self) -> dict:
        return {"schema": 1, "kind": "failure", "p": self.p, "d_set": list(self.d_set),
                "reason": self.reason, "kernel_dims": list(self.kernel_dims),
                "hp_exponent": self.hp_exponent}


@dataclass(frozen=True)
class LargenessCertificate:
    complex: TwoComplex = field(repr=False)
    p: int
    d_set: tuple
    cocycles: tuple
    witness_loops: tuple
    kernel_dims: tuple
    hp_exponent: int
    cover: CosetTable | None = field(default=None, repr=False)
    generator_images: tuple = ()

    succeeded = True

    def to_dict(self) -> dict:
        out = {
            "schema": 1,
            "kind": "certificate",
            "p": self.p,
            "d_set": list(self.d_set),
            "kernel_dims": list(self.kernel_dims),
            "hp_exponent": self.hp_exponent,
            "cocycles": [[[e, g.weights[e]] for e in g.support] for g in self.cocycles],
            "witness_loops": [[list(x) for x in loop] for loop in self.witness_loops],
            "generator_images": [
                {"name": name, "word": [list(x) for x in word]} for name, word in self.generator_images
            ],
        }
        if self.cover is not None:
            out["presentation"] = self.cover.presentation.to_text()
            out["cover"] = canonical_form(self.cover, self.p).decode()
        else:
            out["complex"] = self.complex.to_dict()
        return out


def _bfs_paths(k: TwoComplex, blocked, root: int = 0):
    """Shortest edge paths from ``root`` avoiding ``blocked`` 1-cells."""
    adj = [[] for _ in range(k.zero_cells)]
    for e, (t, h) in enumerate(k.one_cells):
        if e in blocked:
            continue
        adj[t].append((h, e, 1))
        adj[h].append((t, e, -1))
    parent = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for v, e, s in adj[u]:
            if v not in parent:
                parent[v] = (u, e, s)
                queue.append(v)

    def path(v):
        out = []
        while parent[v] is not None:
            u, e, s = parent[v]
            out.append((e, s))
            v = u
        return out[::-1]

    return parent, path


def witness_loops(k: TwoComplex, cocycles, root: int = 0) -> tuple:
    """One loop per cocycle crossing only its least supported 1-cell, once."""
    blocked = set()
    for g in cocycles:
        blocked.update(g.weights)
    reach, path = _bfs_paths(k, blocked, root)
    loops = []
    for g in cocycles:
        e = g.support[0]
        t, h = k.one_cells[e]
        if t not in reach or h not in reach:
            raise CertificationError("cocycle union separates the basepoint from a crossing")
        back = [(x, -s) for x, s in reversed(path(h))]
        loops.append(tuple(path(t) + [(e, 1)] + back))
    return tuple(loops)


def reduce_free_product(letters, p: int) -> tuple:
    """Normal form in ``*ⁿ Z/p``: merge neighbours with the same factor, drop zeros."""
    out: list = []
    for i, a in letters:
        a %= p
        if a == 0:
            continue
        if out and out[-1][0] == i:
            b = (out[-1][1] + a) % p
            out.pop()
            if b:
                out.append((i, b))
        else:
            out.append((i, a))
    return tuple(out)


def crossing_word(path, cocycles, p: int) -> tuple:
    weights = [g.weights for g in cocycles]
    letters = []
    for e, s in path:
        for i, w in enumerate(weights):
            if e in w:
                letters.append((i, s * w[e]))
    return reduce_free_product(letters, p)


def _edge_path(t: CosetTable, word, start: int):
    n = t.presentation.generator_count
    cur, out = start, []
    for g, s in word:
        if s == 1:
            out.append((cur * n + g, 1))
            cur = t.action[g][cur]
        else:
            cur = t.inverse_action[g][cur]
            out.append((cur * n + g, -1))
    return out, cur


def epimorphism_images(cert: LargenessCertificate) -> tuple:
    """Images of generators in ``*ⁿ Z/p``.

    For an index-1 cover these are the group generators; otherwise the
    based generator loops do not close, and the images of the cover's
    Schreier generators are returned instead.
    """
    t = cert.cover
    if t is None:
        raise CertificationError("certificate carries no coset table")
    names = t.presentation.generator_names
    out = []
    if t.index == 1:
        for g, name in enumerate(names):
            path, _ = _edge_path(t, ((g, 1),), 0)
            out.append((name, crossing_word(path, cert.cocycles, cert.p)))
        return tuple(out)
    trans, _ = t.spanning_tree
    for c, g in t.schreier_edges:
        word = trans[c] + ((g, 1),) + tuple((x, -s) for x, s in reversed(trans[t.action[g][c]]))
        path, end = _edge_path(t, word, 0)
        assert end == 0
        out.append((f"{names[g]}_{c}", crossing_word(path, cert.cocycles, cert.p)))
    return tuple(out)


def _lift(side: SubComplex, values: np.ndarray, k: TwoComplex, p: int) -> Cochain1:
    _, _, one_map, _ = side.reindexed
    full = np.zeros(len(k.one_cells), dtype=np.int64)
    full[one_map] = values
    return Cochain1(p, full)


def certify_from_cut(k: TwoComplex, d_set, p: int, cover: CosetTable | None = None,
                     evaluator: CutEvaluator | None = None):
    """Try to build a two-cocycle certificate from the vertex cut ``d_set``.

    Pass a shared :class:`CutEvaluator` when sweeping many cuts of ``k``.
    """
    d_tuple = tuple(sorted(int(v) for v in d_set))
    if evaluator is None:
        evaluator = CutEvaluator(k, p)
    info = evaluator.summary(d_tuple)
    exponent = info["hp_exponent"]
    dims = info["kernel_dims"]
    dim_a, dim_b = dims

    def fail(reason):
        return CertificationFailure(d_tuple, p, reason, dims, exponent)

    if dim_a == 0 or dim_b == 0:
        return fail("a restriction map H^1(side) -> H^1(A cap B) is injective")
    if p == 2 and max(dims) < 2:
        return fail("p = 2 needs a restriction kernel of dimension at least 2; "
                    "the 4-fold cover construction is not attempted")
    a, b, c = cut_decomposition(k, d_tuple)
    produced = []
    for side in (a, b):
        _, ker = restriction_kernel(side, c, p)
        cx = side.as_complex()
        avoid = c.relative_to(side)
        res = relative_nonseparating(cx, avoid, Cochain1(p, ker[0]))
        if res.trivial:
            return fail("kernel class reduced to zero (internal inconsistency)")
        produced.append(regularize(k, _lift(side, res.cocycle.cochain().values, k, p)))
    try:
        joint = union_of(produced)
    except CocycleError as exc:
        return fail(f"cocycles are not disjoint: {exc}")
    if complement_components(k, joint).component_count != k.components()[1]:
        return fail("union of the two cocycles separates the complex")
    loops = witness_loops(k, produced)
    cert = LargenessCertificate(k, p, d_tuple, tuple(produced), loops, dims, exponent, cover)
    if cover is not None:
        cert = LargenessCertificate(k, p, d_tuple, tuple(produced), loops, dims, exponent, cover,
                                    epimorphism_images(cert))
    return cert


# ---------------------------------------------------------------------------
# independent verification
# ---------------------------------------------------------------------------


def verify_certificate(data: dict) -> list[str]:
    """Re-check a certificate dictionary from scratch; returns the violations."""
    problems: list[str] = []
    try:
        p = int(data["p"])
        if "cover" in data:
            pres = parse_presentation(data["presentation"])
            table = table_from_canonical(pres, data["cover"])
            k = cover_of(table)
        else:
            table = None
            k = TwoComplex.from_dict(data["complex"])
        cocycles = [{int(e): int(w) % p for e, w in cz} for cz in data["cocycles"]]
        loops = [[(int(e), int(s)) for e, s in loop] for loop in data["witness_loops"]]
    except (KeyError, ValueError, TypeError) as exc:
        return [f"malformed certificate: {exc}"]

    n_edges = len(k.one_cells)
    for i, w in enumerate(cocycles):
        if not w:
            problems.append(f"cocycle {i} has empty support")
        if any(v == 0 for v in w.values()):
            problems.append(f"cocycle {i} lists a zero weight")
        if any(not 0 <= e < n_edges for e in w):
            problems.append(f"cocycle {i} names a 1-cell out of range")
            return problems
        for f, cell in enumerate(k.two_cells):
            if sum(s * w.get(e, 0) for e, s in cell) % p:
                problems.append(f"cocycle {i}: weight sum around 2-cell {f} is nonzero mod p")
                break
    for i, j in combinations(range(len(cocycles)), 2):
        if set(cocycles[i]) & set(cocycles[j]):
            problems.append(f"cocycles {i} and {j} share a supported 1-cell")
        cells_i = {f for f, cell in enumerate(k.two_cells) if any(e in cocycles[i] for e, _ in cell)}
        cells_j = {f for f, cell in enumerate(k.two_cells) if any(e in cocycles[j] for e, _ in cell)}
        if cells_i & cells_j:
            problems.append(f"cocycles {i} and {j} have interior vertices in the same 2-cell")

    # complement of the union: components of the graph of unsupported 1-cells
    supported = set().union(*cocycles) if cocycles else set()
    label = list(range(k.zero_cells))

    def root(x):
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    for e, (t, h) in enumerate(k.one_cells):
        rt, rh = root(t), root(h)
        if rt != rh:
            label[max(rt, rh)] = min(rt, rh)
    ambient = len({root(v) for v in range(k.zero_cells)})
    label = list(range(k.zero_cells))
    for e, (t, h) in enumerate(k.one_cells):
        if e in supported:
            continue
        rt, rh = root(t), root(h)
        if rt != rh:
            label[max(rt, rh)] = min(rt, rh)
    if len({root(v) for v in range(k.zero_cells)}) != ambient:
        problems.append("union of the cocycles is separating")

    if len(loops) != len(cocycles):
        problems.append("one witness loop per cocycle is required")
    for i, loop in enumerate(loops):
        cur = 0
        for e, s in loop:
            if not 0 <= e < n_edges:
                problems.append(f"witness loop {i} uses a 1-cell out of range")
                break
            t, h = k.one_cells[e]
            if (t if s == 1 else h) != cur:
                problems.append(f"witness loop {i} is not an edge path")
                break
            cur = h if s == 1 else t
        else:
            if cur != 0:
                problems.append(f"witness loop {i} does not close at the basepoint")
        for j, w in enumerate(cocycles):
            hits = [(e, s) for e, s in loop if e in w]
            total = sum(s * w[e] for e, s in hits) % p
            if j == i and (len(hits) != 1 or total == 0):
                problems.append(f"witness loop {i} does not cross cocycle {i} exactly once")
            if j != i and hits:
                problems.append(f"witness loop {i} meets cocycle {j}")

    if table is not None and "generator_images" in data:
        regs = [
            RegularModPCocycle(k, p, dict(sorted(w.items())), {}) for w in cocycles
        ]
        fake = LargenessCertificate(k, p, (), tuple(regs), (), (), 0, table)
        expected = [(name, [list(x) for x in word]) for name, word in epimorphism_images(fake)]
        given = [(g["name"], g["word"]) for g in data["generator_images"]]
        if expected != given:
            problems.append("generator images do not match the crossing words")
    return problems


# ---------------------------------------------------------------------------
# cut bookkeeping along a cover
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CutDiagnostics:
    d_set: tuple
    h_value: Fraction
    boundary_size: int
    d_p_a: int
    d_p_b: int
    d_p_c: int
    type_i: int
    type_ii: int
    type_iii: int
    type_ii_or_iii: int
    c_vertices: int
    gamma_c_components: int
    mv_codimension: int
    hp_exponent: int
    bounds: dict

    @property
    def strict_gap(self) -> bool:
        """``d_p(C) < min(d_p(A), d_p(B)) − 1``."""
        return self.d_p_c < min(self.d_p_a, self.d_p_b) - 1

    @property
    def all_bounds_hold(self) -> bool:
        return all(v["holds"] for v in self.bounds.values())

    def to_dict(self) -> dict:
        return {
            "d_set": list(self.d_set),
            "h_value": [self.h_value.numerator, self.h_value.denominator],
            "boundary_size": self.boundary_size,
            "d_p": {"A": self.d_p_a, "B": self.d_p_b, "C": self.d_p_c},
            "edge_types": {"i": self.type_i, "ii": self.type_ii, "iii": self.type_iii,
                           "ii_or_iii": self.type_ii_or_iii},
            "c_vertices": self.c_vertices,
            "gamma_c_components": self.gamma_c_components,
            "mv_codimension": self.mv_codimension,
            "hp_exponent": self.hp_exponent,
            "strict_gap": self.strict_gap,
            "bounds": self.bounds,
        }


def cut_diagnostics(t: CosetTable, d_set, p: int, basis_labels, k: TwoComplex | None = None) -> CutDiagnostics:
    pres = t.presentation
    if not is_homology_basis(pres, basis_labels, p):
        raise CertificationError("basis_labels do not map to a basis of H_1(G; F_p)")
    k = k if k is not None else cover_of(t)
    d = set(int(v) for v in d_set)
    a, b, c = cut_decomposition(k, d)
    gamma = labelled_subgraph_pullback(t, basis_labels, k)
    x = schreier_graph(t)
    boundary = x.boundary(d)

    crossing_cells = [f for f in range(len(k.two_cells))
                      if len({v in d for v in k.corner_vertices(f)}) == 2]
    in_crossing_cell = {e for f in crossing_cells for e, _ in k.two_cells[f]}
    type_i = type_ii = type_iii = either = 0
    for e in gamma.kept_one & a.kept_one:
        tl, hd = k.one_cells[e]
        i_ = tl in d and hd in d
        ii = (tl in d) != (hd in d)
        iii = e in in_crossing_cell
        type_i += i_
        type_ii += ii
        type_iii += iii
        either += ii or iii

    gamma_a, gamma_b, gamma_c = gamma & a, gamma & b, gamma & c
    img = homology_image_dim(
        k, np.vstack([cycle_basis_in_parent(gamma_a, p), cycle_basis_in_parent(gamma_b, p)]), p)
    d1 = homology_profile(k, p).d1
    codim = d1 - img
    gc_components = gamma_c.as_complex().components()[1] if gamma_c.kept_zero else 0
    c_vertices = len(c.kept_zero)
    dpg = d_p(pres, p)
    big_l = pres.total_length
    da, db, dc = _d1(a, p), _d1(b, p), _d1(c, p)
    bounds = {
        "type_i": {"value": type_i, "bound": len(d) * dpg},
        "type_ii_iii": {"value": either, "bound": boundary * (big_l ** 2 + 1)},
        "c_vertices": {"value": c_vertices, "bound": boundary * (big_l ** 2 + 2)},
        "mv_codimension": {"value": codim, "bound": gc_components},
        "mv_components": {"value": gc_components, "bound": c_vertices},
    }
    for v in bounds.values():
        v["holds"] = v["value"] <= v["bound"]
    return CutDiagnostics(
        tuple(sorted(d)), Fraction(boundary, len(d)), boundary, da, db, dc,
        type_i, type_ii, type_iii, either, c_vertices, gc_components, codim,
        dc - min(da, db), bounds,
    )


# ---------------------------------------------------------------------------
# cut sweeps
# ---------------------------------------------------------------------------


def bfs_ball_cuts(t: CosetTable, centers=None) -> list[tuple]:
    """Balls in the Schreier graph, radius 0 upward, while proper."""
    x = schreier_graph(t)
    adj = [[] for _ in range(x.vertex_count)]
    for u, v, _ in x.edges:
        adj[u].append(v)
        adj[v].append(u)
    out = []
    for s in (range(x.vertex_count) if centers is None else centers):
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in sorted(adj[u]):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        for r in range(max(dist.values()) + 1):
            ball = tuple(sorted(v for v, dv in dist.items() if dv <= r))
            if len(ball) < x.vertex_count:
                out.append(ball)
    return out


def cheeger_cuts(t: CosetTable, max_vertices: int = 24) -> list[tuple]:
    """Least-boundary vertex sets of every size (exact), or the sweep witness."""
    from .expansion import _mask_to_set, cheeger

    r = cheeger(schreier_graph(t), max_vertices)
    if r.value is None:
        return []
    if r.method == "exact":
        return [tuple(sorted(_mask_to_set(m))) for m in r.size_masks]
    return [tuple(sorted(r.witness))]


def _orbit_canonical(masks: np.ndarray, perms, n: int) -> np.ndarray:
    """Least image of each mask (or its complement) under the given permutations."""
    full = np.uint64((1 << n) - 1)
    best = masks.copy()
    one = np.uint64(1)
    bits = [(masks >> np.uint64(v)) & one for v in range(n)]
    for perm in perms:
        img = np.zeros_like(masks)
        for v in range(n):
            img |= bits[v] << np.uint64(perm[v])
        best = np.minimum(best, np.minimum(img, img ^ full))
    return best


def exhaustive_cuts(t: CosetTable) -> list[tuple]:
    """All cuts up to complement and deck symmetry, each as a sorted vertex tuple."""
    n = t.index
    if n < 2:
        return []
    if n > 24:
        raise CutBudgetExceeded("exhaustive cut enumeration is limited to 24 vertices")
    full = (1 << n) - 1
    masks = np.arange(1, full, dtype=np.uint64)
    canon = _orbit_canonical(masks, deck_permutations(t), n)
    reps = np.unique(canon)
    out = []
    for m in reps:
        m = int(m)
        out.append(tuple(v for v in range(n) if (m >> v) & 1))
    return out


def candidate_cuts(t: CosetTable, strategy: str = "auto", exhaustive_limit: int = 12,
                   max_vertices: int = 24) -> list[tuple]:
    """Cuts to try on a cover.

    ``max_vertices`` caps every ``2ⁿ`` subset enumeration (exhaustive cuts and
    the exact Cheeger profile).
    """
    if strategy == "exhaustive" and t.index > max_vertices:
        raise CutBudgetExceeded(f"exhaustive cuts need {t.index} vertices; budget allows {max_vertices}")
    if strategy == "exhaustive" or (strategy == "auto" and t.index <= min(exhaustive_limit, max_vertices)):
        return exhaustive_cuts(t)
    seen, out = set(), []
    centers = [0] if len(deck_permutations(t)) == t.index else None
    for d in cheeger_cuts(t, max_vertices) + bfs_ball_cuts(t, centers):
        if d and len(d) < t.index and d not in seen:
            seen.add(d)
            out.append(d)
    return out


@dataclass(frozen=True)
class SweepResult:
    certificate: LargenessCertificate | None
    failures: tuple
    cuts_tried: int

    def to_dict(self) -> dict:
        out = {"schema": 1, "cuts_tried": self.cuts_tried,
               "failures": [f.to_dict() for f in self.failures]}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


def sweep_cover(t: CosetTable, p: int, strategy: str = "auto", max_cuts: int | None = None,
                stop_at_first: bool = True, max_vertices: int = 24) -> SweepResult:
    k = cover_of(t)
    evaluator = CutEvaluator(k, p)
    failures = []
    cert = None
    cuts = candidate_cuts(t, strategy, max_vertices=max_vertices)
    if max_cuts is not None:
        cuts = cuts[:max_cuts]
    tried = 0
    for d in cuts:
        tried += 1
        res = certify_from_cut(k, d, p, t, evaluator)
        if res.succeeded:
            if cert is None:
                cert = res
            if stop_at_first:
                break
        else:
            failures.append(res)
    return SweepResult(cert, tuple(failures), tried)
