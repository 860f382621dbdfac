"""Coset tables of finite-index subgroups and the machinery built on them."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import fplinalg
from .words import (
    FiniteQuotientSpec,
    Presentation,
    PresentationError,
    abelianized_mod_p,
    check_prime,
    check_word,
    free_reduce,
    inverse,
)

DEFAULT_MAX_COSETS = 100_000


class CosetBudgetExceeded(RuntimeError):
    """Enumeration did not close within ``max_cosets`` live cosets."""


class AmbientMismatch(ValueError):
    """Two tables are over different presentations."""


@dataclass(frozen=True, eq=False)
class CosetTable:
    """Right action of the generators on the cosets ``H\\G``; coset 0 is ``H``.

    ``action[g][c]`` is the coset ``c·g``.
    """

    presentation: Presentation
    action: tuple

    def __post_init__(self):
        act = tuple(tuple(int(x) for x in row) for row in self.action)
        object.__setattr__(self, "action", act)
        if len(act) != self.presentation.generator_count:
            raise ValueError("one permutation per generator required")

    @property
    def index(self) -> int:
        return len(self.action[0])

    basepoint = 0

    @cached_property
    def inverse_action(self) -> tuple:
        out = []
        for row in self.action:
            inv = [0] * len(row)
            for c, d in enumerate(row):
                inv[d] = c
            out.append(tuple(inv))
        return tuple(out)

    def act(self, c: int, w) -> int:
        fwd, inv = self.action, self.inverse_action
        for g, s in w:
            c = fwd[g][c] if s == 1 else inv[g][c]
        return c

    def contains(self, w) -> bool:
        return self.act(0, w) == 0

    def check(self) -> None:
        """Raise ``ValueError`` unless bijective, relator-closed and transitive."""
        n = self.index
        for row in self.action:
            if sorted(row) != list(range(n)):
                raise ValueError("generator does not act as a bijection")
        for r in self.presentation.relators:
            for c in range(n):
                if self.act(c, r) != c:
                    raise ValueError(f"relator trace from coset {c} does not close")
        if len(self.bfs_order()) != n:
            raise ValueError("action is not transitive")

    def bfs_order(self) -> list[int]:
        seen = [False] * self.index
        seen[0] = True
        order = [0]
        for c in order:
            for row in self.action:
                d = row[c]
                if not seen[d]:
                    seen[d] = True
                    order.append(d)
        return order

    @cached_property
    def spanning_tree(self):
        """BFS tree of the Schreier graph from coset 0.

        Returns ``(transversal, tree_edges)``: ``transversal[c]`` is a word
        taking coset 0 to ``c`` along the tree and ``tree_edges`` the set of
        ``(coset, generator)`` edges in the tree.
        """
        n = self.index
        trans = [None] * n
        trans[0] = ()
        tree = set()
        queue = deque([0])
        fwd, inv = self.action, self.inverse_action
        while queue:
            c = queue.popleft()
            for g in range(len(fwd)):
                d = fwd[g][c]
                if trans[d] is None:
                    trans[d] = trans[c] + ((g, 1),)
                    tree.add((c, g))
                    queue.append(d)
                d = inv[g][c]
                if trans[d] is None:
                    trans[d] = trans[c] + ((g, -1),)
                    tree.add((d, g))
                    queue.append(d)
        return tuple(trans), frozenset(tree)

    @cached_property
    def schreier_edges(self) -> tuple:
        """Non-tree edges ``(coset, generator)`` in lexicographic order."""
        _, tree = self.spanning_tree
        return tuple(
            (c, g) for c in range(self.index) for g in range(len(self.action)) if (c, g) not in tree
        )

    def schreier_generators(self) -> list:
        """Words ``t_c g t_{c·g}^{-1}`` generating the subgroup, one per non-tree edge."""
        trans, _ = self.spanning_tree
        return [
            free_reduce(trans[c] + ((g, 1),) + inverse(trans[self.action[g][c]]))
            for c, g in self.schreier_edges
        ]

    def standardized(self) -> "CosetTable":
        """Same subgroup, cosets renumbered in BFS order from the basepoint."""
        order = self.bfs_order()
        new = {old: i for i, old in enumerate(order)}
        act = tuple(tuple(new[row[old]] for old in order) for row in self.action)
        return CosetTable(self.presentation, act)


@dataclass(frozen=True)
class SchreierGraph:
    vertex_count: int
    edges: tuple  # (u, v, generator label)

    def degrees(self) -> list[int]:
        deg = [0] * self.vertex_count
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def csr(self):
        """Loop-free adjacency ``(ptr, nbr)`` with parallel edges repeated."""
        lists = [[] for _ in range(self.vertex_count)]
        for u, v, _ in self.edges:
            if u != v:
                lists[u].append(v)
                lists[v].append(u)
        ptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(x) for x in lists])
        nbr = np.fromiter(itertools.chain.from_iterable(lists), dtype=np.int64, count=int(ptr[-1]))
        return ptr, nbr

    def boundary(self, vertex_set) -> int:
        s = set(vertex_set)
        return sum(1 for u, v, _ in self.edges if (u in s) != (v in s))


def schreier_graph(t: CosetTable) -> SchreierGraph:
    edges = tuple(
        (c, t.action[g][c], g) for c in range(t.index) for g in range(len(t.action))
    )
    return SchreierGraph(t.index, edges)


# ---------------------------------------------------------------------------
# Todd–Coxeter
# ---------------------------------------------------------------------------


class _Enumerator:
    """HLT coset enumeration with lookahead when the live-coset budget is hit."""

    def __init__(self, pres: Presentation, max_cosets: int):
        self.ngen = pres.generator_count
        self.ncol = 2 * self.ngen
        self.rels = [self._cols(r) for r in pres.relators]
        self.max_cosets = max_cosets
        self.table = [[-1] * self.ncol]
        self.parent = [0]
        self.live = 1

    @staticmethod
    def _cols(w):
        return [2 * g + (0 if s == 1 else 1) for g, s in w]

    def rep(self, c):
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def is_live(self, c):
        return self.parent[c] == c

    def define(self, c, x):
        if self.live >= self.max_cosets:
            self.lookahead()
            if self.live >= self.max_cosets:
                raise CosetBudgetExceeded(
                    f"coset enumeration exceeded {self.max_cosets} live cosets"
                )
            if not self.is_live(c) or self.table[c][x] != -1:
                return
        d = len(self.table)
        self.table.append([-1] * self.ncol)
        self.parent.append(d)
        self.live += 1
        self.table[c][x] = d
        self.table[d][x ^ 1] = c

    def _merge(self, k, l, queue):
        k, l = self.rep(k), self.rep(l)
        if k == l:
            return
        k, l = min(k, l), max(k, l)
        self.parent[l] = k
        self.live -= 1
        queue.append(l)

    def coincidence(self, a, b):
        queue = deque()
        self._merge(a, b, queue)
        while queue:
            e = queue.popleft()
            row = self.table[e]
            for x in range(self.ncol):
                f = row[x]
                if f == -1:
                    continue
                if self.table[f][x ^ 1] == e:
                    self.table[f][x ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                if self.table[e1][x] != -1:
                    self._merge(f1, self.table[e1][x], queue)
                elif self.table[f1][x ^ 1] != -1:
                    self._merge(e1, self.table[f1][x ^ 1], queue)
                else:
                    self.table[e1][x] = f1
                    self.table[f1][x ^ 1] = e1

    def scan(self, c, w, fill):
        table = self.table
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] != -1:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] != -1:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self.define(f, w[i])
            if not self.is_live(c):
                return
            if not (self.is_live(f) and self.is_live(b)):
                # a lookahead collapsed part of the scan; start again from c
                f, b = c, c
                i, j = 0, len(w) - 1

    def lookahead(self):
        for c in range(len(self.table)):
            for r in self.rels:
                if not self.is_live(c):
                    break
                self.scan(c, r, fill=False)

    def run(self, subgroup_gens):
        for w in subgroup_gens:
            self.scan(0, self._cols(w), fill=True)
        c = 0
        while c < len(self.table):
            if self.is_live(c):
                for r in self.rels:
                    self.scan(c, r, fill=True)
                    if not self.is_live(c):
                        break
                for x in range(self.ncol):
                    if not self.is_live(c):
                        break
                    if self.table[c][x] == -1:
                        self.define(c, x)
            c += 1
        live = [c for c in range(len(self.table)) if self.is_live(c)]
        new = {c: i for i, c in enumerate(live)}
        return [[new[self.rep(self.table[c][2 * g])] for c in live] for g in range(self.ngen)]


def todd_coxeter(pres: Presentation, subgroup_gens=(), max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Coset table of the subgroup generated by ``subgroup_gens``.

    Raises :class:`CosetBudgetExceeded` when more than ``max_cosets`` live
    cosets would be needed; no partial table is ever returned.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    subgroup_gens = [check_word(w, pres.generator_count, "subgroup generator") for w in subgroup_gens]
    action = _Enumerator(pres, max_cosets).run(subgroup_gens)
    table = CosetTable(pres, action).standardized()
    table.check()
    for w in subgroup_gens:
        if not table.contains(w):
            raise RuntimeError("coset enumeration produced an inconsistent table")
    return table


def from_quotient(pres: Presentation, spec: FiniteQuotientSpec, point: int = 0) -> CosetTable:
    """Table of the stabilizer of ``point`` under a permutation quotient."""
    spec.validate(pres)
    if not 0 <= point < spec.degree:
        raise PresentationError(f"point {point} outside 0..{spec.degree - 1}")
    orbit = [point]
    pos = {point: 0}
    for x in orbit:
        for im in spec.images:
            y = im[x]
            if y not in pos:
                pos[y] = len(orbit)
                orbit.append(y)
    action = tuple(tuple(pos[im[x]] for x in orbit) for im in spec.images)
    return CosetTable(pres, action)


def trivial_table(pres: Presentation) -> CosetTable:
    return CosetTable(pres, tuple((0,) for _ in range(pres.generator_count)))


def cyclic_quotient_table(pres: Presentation, n: int, images) -> CosetTable:
    """Stabilizer of 0 for the map to ``Z/n`` sending generator ``g`` to ``images[g]``."""
    spec = FiniteQuotientSpec(n, tuple(tuple((x + k) % n for x in range(n)) for k in images))
    return from_quotient(pres, spec, 0)


# ---------------------------------------------------------------------------
# Reidemeister–Schreier and index-p kernels
# ---------------------------------------------------------------------------


def rewrite(t: CosetTable, w, start: int = 0):
    """Rewrite the path of ``w`` from ``start`` as a word in the Schreier generators."""
    _, tree = t.spanning_tree
    idx = {e: i for i, e in enumerate(t.schreier_edges)}
    fwd, inv = t.action, t.inverse_action
    out = []
    c = start
    for g, s in w:
        if s == 1:
            if (c, g) not in tree:
                out.append((idx[(c, g)], 1))
            c = fwd[g][c]
        else:
            d = inv[g][c]
            if (d, g) not in tree:
                out.append((idx[(d, g)], -1))
            c = d
    return tuple(out), c


def reidemeister_schreier(t: CosetTable) -> Presentation:
    """Presentation of the subgroup on the non-tree edges of a BFS spanning tree."""
    pres = t.presentation
    names = tuple(f"{pres.generator_names[g]}_{c}" for c, g in t.schreier_edges)
    rels = []
    for c in range(t.index):
        for r in pres.relators:
            word, end = rewrite(t, r, c)
            assert end == c
            rels.append(word)
    return Presentation(len(names), tuple(rels), names)


def _hom_basis(t: CosetTable, p: int) -> np.ndarray:
    rs = reidemeister_schreier(t)
    basis = fplinalg.kernel_basis(abelianized_mod_p(rs, p))
    return np.asarray(basis, dtype=np.int64).reshape(len(basis), rs.generator_count)


def homomorphisms_mod_p(t: CosetTable, p: int) -> list[np.ndarray]:
    """One representative per kernel of a nonzero map ``H -> Z/p``.

    Each map is given by its values on the Schreier generators, normalized so
    that the first nonzero coordinate in the kernel-basis expansion is 1.
    """
    p = check_prime(p)
    B = _hom_basis(t, p)
    d = B.shape[0]
    out = []
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            coeff = np.zeros(d, dtype=np.int64)
            coeff[lead] = 1
            coeff[lead + 1:] = tail
            out.append((coeff @ B) % p)
    return out


def homomorphism_count(d: int, p: int) -> int:
    """Number of index-``p`` normal subgroups when ``d_p = d``."""
    return (p ** d - 1) // (p - 1)


def nth_homomorphism(t: CosetTable, p: int, n: int) -> np.ndarray:
    """``homomorphisms_mod_p(t, p)[n]`` without building the whole list."""
    p = check_prime(p)
    B = _hom_basis(t, p)
    d = B.shape[0]
    total = homomorphism_count(d, p)
    if not 0 <= n < total:
        raise IndexError(f"homomorphism {n} out of range 0..{total - 1}")
    lead = 0
    while n >= p ** (d - lead - 1):
        n -= p ** (d - lead - 1)
        lead += 1
    coeff = np.zeros(d, dtype=np.int64)
    coeff[lead] = 1
    for i in range(d - 1, lead, -1):
        n, coeff[i] = divmod(n, p)
    return (coeff @ B) % p


def kernel_table(t: CosetTable, phi, p: int) -> CosetTable:
    """Table (in ``G``) of the kernel of ``phi: H -> Z/p`` given on Schreier generators."""
    idx = {e: i for i, e in enumerate(t.schreier_edges)}
    n = t.index
    action = []
    for g, row in enumerate(t.action):
        new = [0] * (n * p)
        for c in range(n):
            i = idx.get((c, g))
            shift = 0 if i is None else int(phi[i])
            for z in range(p):
                new[c * p + z] = row[c] * p + (z + shift) % p
        action.append(tuple(new))
    return CosetTable(t.presentation, tuple(action)).standardized()


def index_p_normal_subgroups(t: CosetTable, p: int) -> list[CosetTable]:
    """Kernels of all nonzero maps ``H -> Z/p``, as subgroups of the top group."""
    return [kernel_table(t, phi, p) for phi in homomorphisms_mod_p(t, p)]


def d_p_subgroup(t: CosetTable, p: int) -> int:
    from .words import d_p

    return d_p(reidemeister_schreier(t), p)


# ---------------------------------------------------------------------------
# identity, inclusion, normality
# ---------------------------------------------------------------------------


def canonical_form(t: CosetTable, p: int = 0) -> bytes:
    """``p|index|rows`` with rows comma-separated, images dot-separated.

    Cosets are renumbered in BFS order from the basepoint, so two tables give
    the same bytes exactly when they describe the same subgroup. ``p`` only
    tags the string (0 when no prime is attached).
    """
    s = t.standardized()
    rows = ",".join(".".join(str(s.action[g][c]) for g in range(len(s.action))) for c in range(s.index))
    return f"{p}|{s.index}|{rows}".encode()


def table_from_canonical(pres: Presentation, data) -> CosetTable:
    """Inverse of :func:`canonical_form`; the result is checked for validity."""
    text = data.decode() if isinstance(data, (bytes, bytearray)) else str(data)
    try:
        _, index, rows = text.split("|")
        index = int(index)
        images = [[int(x) for x in row.split(".")] for row in rows.split(",")]
    except ValueError as exc:
        raise ValueError(f"malformed canonical form {text!r}") from exc
    n = pres.generator_count
    if len(images) != index or any(len(r) != n for r in images):
        raise ValueError("canonical form does not match the presentation")
    action = tuple(tuple(images[c][g] for c in range(index)) for g in range(n))
    t = CosetTable(pres, action)
    t.check()
    return t


def _same_ambient(a: CosetTable, b: CosetTable) -> None:
    if a.presentation != b.presentation:
        raise AmbientMismatch("tables are over different presentations")


def coset_map(inner: CosetTable, outer: CosetTable, target: int = 0):
    """Equivariant map from inner cosets to outer cosets sending 0 to ``target``.

    Returns ``None`` if no such map exists.
    """
    _same_ambient(inner, outer)
    m = [-1] * inner.index
    m[0] = target
    queue = deque([0])
    while queue:
        c = queue.popleft()
        for gi, (ri, ro) in enumerate(zip(inner.action, outer.action)):
            d, e = ri[c], ro[m[c]]
            if m[d] == -1:
                m[d] = e
                queue.append(d)
            elif m[d] != e:
                return None
    return m


def is_subgroup_of(inner: CosetTable, outer: CosetTable) -> bool:
    return coset_map(inner, outer) is not None


def is_normal_in(inner: CosetTable, outer: CosetTable) -> bool:
    """``inner`` is a subgroup of ``outer`` and every Schreier generator of
    ``outer`` conjugates ``inner`` to itself (stabilizers of 0 and 0·h agree)."""
    if not is_subgroup_of(inner, outer):
        return False
    for h in outer.schreier_generators():
        c = inner.act(0, h)
        if c != 0 and coset_map(inner, inner, c) is None:
            return False
    return True


def deck_permutations(t: CosetTable) -> list[list[int]]:
    """Automorphisms of the coset action, i.e. the normalizer quotient ``N(H)/H``."""
    out = []
    for c in range(t.index):
        m = coset_map(t, t, c)
        if m is not None:
            out.append(m)
    return out


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------


def _is_p_power(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class SubnormalChain:
    """``G = G_0 ≥ G_1 ⊳ G_2 ⊳ …``; ``tables[0]`` is the whole group."""

    tables: tuple
    p: int
    step_indices: tuple = field(default=())

    def __post_init__(self):
        tabs = tuple(self.tables)
        object.__setattr__(self, "tables", tabs)
        steps = tuple(b.index // a.index for a, b in zip(tabs, tabs[1:]))
        object.__setattr__(self, "step_indices", steps)

    def __len__(self):
        return len(self.tables)

    @property
    def presentation(self) -> Presentation:
        return self.tables[0].presentation

    def validate(self, strict: bool = True) -> list[str]:
        """Problems found (empty when valid).

        With ``strict=False`` the first inclusion need not be normal.
        """
        problems = []
        if self.tables and self.tables[0].index != 1:
            problems.append("tables[0] must be the whole group (index 1)")
        for i, (a, b) in enumerate(zip(self.tables, self.tables[1:])):
            if b.index % a.index or not _is_p_power(b.index // a.index, self.p):
                problems.append(f"step {i}: index ratio is not a power of {self.p}")
                continue
            if not is_subgroup_of(b, a):
                problems.append(f"step {i}: G_{i + 1} is not contained in G_{i}")
                continue
            if (strict or i > 0) and not is_normal_in(b, a):
                problems.append(f"step {i}: G_{i + 1} is not normal in G_{i}")
        return problems

    def projection(self, i: int) -> list[int]:
        """Covering map from the cosets of ``G_i`` to those of ``G_{i-1}``."""
        return coset_map(self.tables[i], self.tables[i - 1])


def descend(t: CosetTable, p: int, choice: int = 0) -> CosetTable:
    """The ``choice``-th index-p normal subgroup of ``t`` (deterministic order)."""
    d = d_p_subgroup(t, p)
    if d == 0:
        raise ValueError("subgroup has no index-p normal subgroups (d_p = 0)")
    return kernel_table(t, nth_homomorphism(t, p, choice % homomorphism_count(d, p)), p)


def quotient_chain(pres: Presentation, p: int, levels: int, images) -> SubnormalChain:
    """Preimages of ``p^i Z`` under the map to ``Z`` with generator images ``images``."""
    tabs = [trivial_table(pres)]
    for i in range(1, levels + 1):
        tabs.append(cyclic_quotient_table(pres, p ** i, images))
    return SubnormalChain(tuple(tabs), p)
