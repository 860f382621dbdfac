"""Linear codes spanned by cocycle representatives of H¹ of covers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fplinalg
from .cocycles import cohomology_basis, min_nonzero_class_support
from .complexes import TwoComplex, cover_of
from .cosets import CosetTable
from .fplinalg import MatrixFp
from .kernels import min_weight
from .words import check_prime

DEFAULT_CODEWORD_BUDGET = 1 << 22


@dataclass(frozen=True, eq=False)
class LinearCode:
    p: int
    generator_matrix: np.ndarray

    def __post_init__(self):
        g = np.array(self.generator_matrix, dtype=np.int64, copy=True) % self.p
        if g.ndim != 2:
            raise ValueError("generator matrix must be 2-dimensional")
        if g.shape[0] and fplinalg.rank(MatrixFp(self.p, g)) != g.shape[0]:
            raise ValueError("generator rows are linearly dependent")
        g.setflags(write=False)
        object.__setattr__(self, "generator_matrix", g)

    @property
    def length(self) -> int:
        return self.generator_matrix.shape[1]

    @property
    def dimension(self) -> int:
        return self.generator_matrix.shape[0]

    @property
    def rate(self) -> Fraction:
        return Fraction(self.dimension, self.length)

    def to_text(self) -> str:
        lines = [f"{self.p} {self.dimension} {self.length}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.generator_matrix]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LinearCode":
        rows = [ln.split() for ln in text.strip().splitlines()]
        p, k, n = (int(x) for x in rows[0])
        g = np.array([[int(x) for x in r] for r in rows[1:]], dtype=np.int64).reshape(k, n)
        return cls(p, g)


def code_from_cover(k_complex: TwoComplex, p: int) -> LinearCode:
    p = check_prime(p)
    reps = cohomology_basis(k_complex, p)
    n = len(k_complex.one_cells)
    g = np.asarray(reps, dtype=np.int64).reshape(len(reps), n)
    return LinearCode(p, g)


@dataclass(frozen=True)
class Distance:
    value: int | None
    exact: bool
    codeword: np.ndarray | None = field(default=None, repr=False)


def distance(code: LinearCode, budget: int = DEFAULT_CODEWORD_BUDGET, seed: int = 0) -> Distance:
    """Least weight of a nonzero codeword; exact when ``p^k`` fits the budget."""
    p, g = code.p, code.generator_matrix
    k, n = g.shape
    if k == 0:
        return Distance(None, True)
    if p ** k <= budget:
        w, digits = min_weight(np.zeros(n, dtype=np.int64), g, p, nz_prefix=k)
        return Distance(int(w), True, (digits @ g) % p)
    best_w, best = n + 1, None

    def consider(vec):
        nonlocal best_w, best
        w = int(np.count_nonzero(vec))
        if 0 < w < best_w:
            best_w, best = w, vec

    for i in range(k):
        for a in range(1, p):
            consider((a * g[i]) % p)
    for i in range(k):
        for j in range(i + 1, k):
            for a in range(1, p):
                consider((g[i] + a * g[j]) % p)
    rng = np.random.default_rng(seed)
    for _ in range(min(budget, 1 << 14)):
        consider((rng.integers(0, p, k) @ g) % p)
    return Distance(best_w, False, best)


@dataclass(frozen=True)
class GoodnessRow:
    index: int | None
    length: int
    dimension: int
    distance: int | None
    distance_exact: bool
    min_class_support: int | None
    min_class_exact: bool

    @property
    def rate(self) -> Fraction:
        return Fraction(self.dimension, self.length)

    @property
    def relative_distance(self) -> Fraction | None:
        return None if self.distance is None else Fraction(self.distance, self.length)

    @property
    def min_relative_size(self) -> Fraction | None:
        return None if self.min_class_support is None else Fraction(self.min_class_support, self.length)


@dataclass(frozen=True)
class GoodnessLedger:
    p: int
    rows: tuple
    hypothesis: str
    dichotomy_note: str

    def to_dict(self) -> dict:
        def fr(q):
            return None if q is None else [q.numerator, q.denominator]

        return {
            "schema": 1,
            "p": self.p,
            "covers": [
                {"index": r.index, "n": r.length, "k": r.dimension, "d": r.distance,
                 "d_exact": r.distance_exact, "rate_k_over_n": fr(r.rate),
                 "d_over_n": fr(r.relative_distance),
                 "min_relative_size": fr(r.min_relative_size),
                 "min_relative_size_exact": r.min_class_exact}
                for r in self.rows
            ],
            "linear_growth_hypothesis": self.hypothesis,
            "dichotomy_note": self.dichotomy_note,
        }


def _hypothesis_status(rows) -> str:
    indexed = [r for r in rows if r.index]
    if len(indexed) < 2:
        return "inconclusive: fewer than two covers"
    first, last = indexed[0], indexed[-1]
    if last.index > first.index and last.dimension <= first.dimension:
        return "hypothesis not met: homology dimension does not grow with the index"
    g0 = Fraction(first.dimension - 1, first.index)
    g1 = Fraction(last.dimension - 1, last.index)
    if g1 > 0 and 2 * g1 >= g0:
        return "trend consistent with linear growth over the computed covers"
    return "inconclusive: gradient decaying over the computed covers"


def goodness_ledger(covers, p: int, budget: int = DEFAULT_CODEWORD_BUDGET,
                    certificate_found: bool | None = None) -> GoodnessLedger:
    """Per-cover code statistics; ``covers`` are coset tables or complexes over one base."""
    rows = []
    for cov in covers:
        if isinstance(cov, CosetTable):
            index, cx = cov.index, cover_of(cov)
        else:
            index, cx = None, cov
        code = code_from_cover(cx, p)
        dist = distance(code, budget)
        mcs, exact = min_nonzero_class_support(cx, p, budget)
        rows.append(GoodnessRow(index, code.length, code.dimension, dist.value, dist.exact, mcs, exact))
    status = _hypothesis_status(rows)
    if certificate_found:
        note = "largeness certificate found: no goodness claim needed"
    elif certificate_found is None:
        note = "largeness not examined"
    else:
        note = ("no largeness certificate found: if the linear-growth hypothesis holds, "
                "the codes are the branch to watch")
    return GoodnessLedger(p, tuple(rows), status, note)
