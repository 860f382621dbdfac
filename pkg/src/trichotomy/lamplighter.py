"""Arithmetic in the lamplighter group Z/p ≀ Z and its mod-p homology witnesses.

Elements are pairs ``(shift, lamps)`` with ``lamps`` a finitely supported
map from positions to ``F_p``. The product is
``(s, f)·(t, g) = (s + t, f + g(· − s))``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fplinalg
from .cosets import SchreierGraph
from .fplinalg import MatrixFp
from .words import check_prime

POSITION_CAP = 10 ** 6


class LampOverflowError(OverflowError):
    pass


class NotInSubgroup(ValueError):
    pass


@dataclass(frozen=True)
class LamplighterElement:
    p: int
    shift: int = 0
    lamps: tuple = ()  # sorted (position, value) pairs with value in 1..p-1

    def __post_init__(self):
        acc: dict = {}
        for pos, val in self.lamps:
            pos = int(pos)
            if abs(pos) > POSITION_CAP:
                raise LampOverflowError(f"lamp position {pos} exceeds the cap {POSITION_CAP}")
            acc[pos] = (acc.get(pos, 0) + int(val)) % self.p
        if abs(int(self.shift)) > POSITION_CAP:
            raise LampOverflowError(f"shift {self.shift} exceeds the cap {POSITION_CAP}")
        object.__setattr__(self, "shift", int(self.shift))
        object.__setattr__(self, "lamps", tuple(sorted((k, v) for k, v in acc.items() if v)))

    @classmethod
    def identity(cls, p: int) -> "LamplighterElement":
        return cls(p)

    @classmethod
    def shift_generator(cls, p: int) -> "LamplighterElement":
        return cls(p, 1)

    @classmethod
    def lamp_generator(cls, p: int) -> "LamplighterElement":
        return cls(p, 0, ((0, 1),))

    @classmethod
    def lamp_at(cls, p: int, position: int, value: int = 1) -> "LamplighterElement":
        return cls(p, 0, ((position, value),))

    def __mul__(self, other: "LamplighterElement") -> "LamplighterElement":
        return multiply(self, other)

    def inverse(self) -> "LamplighterElement":
        s = self.shift
        return LamplighterElement(self.p, -s, tuple((pos - s, -v) for pos, v in self.lamps))

    def __pow__(self, k: int) -> "LamplighterElement":
        base = self if k >= 0 else self.inverse()
        out = LamplighterElement.identity(self.p)
        for _ in range(abs(k)):
            out = out * base
        return out


def multiply(x: LamplighterElement, y: LamplighterElement) -> LamplighterElement:
    if x.p != y.p:
        raise ValueError("elements of different lamplighter groups")
    s = x.shift
    return LamplighterElement(x.p, s + y.shift, x.lamps + tuple((pos + s, v) for pos, v in y.lamps))


def lamp_residue_sum(x: LamplighterElement, i: int, j: int, p: int) -> int:
    """Sum of the lamps at positions ``≡ j (mod pⁱ)``; defined on shifts divisible by ``pⁱ``."""
    p = check_prime(p)
    if x.p != p:
        raise ValueError("element lives in a different lamplighter group")
    m = p ** i
    if not 0 <= j < m:
        raise ValueError(f"residue {j} outside 0..{m - 1}")
    if x.shift % m:
        raise NotInSubgroup(f"shift {x.shift} is not divisible by {m}")
    return sum(v for pos, v in x.lamps if pos % m == j) % p


@dataclass(frozen=True)
class LowerBoundWitness:
    value: int
    evaluation: np.ndarray  # rows: lamp_residue_sum, columns: lamp at position 0..p^i-1
    rank: int

    @property
    def verified(self) -> bool:
        return self.rank == self.value


def dp_lower_bound(i: int, p: int) -> LowerBoundWitness:
    """``pⁱ`` independent residue-sum homomorphisms on the index-``pⁱ`` subgroup."""
    p = check_prime(p)
    if i < 0:
        raise ValueError("level must be non-negative")
    m = p ** i
    ev = np.array(
        [[lamp_residue_sum(LamplighterElement.lamp_at(p, pos), i, j, p) for pos in range(m)] for j in range(m)],
        dtype=np.int64,
    )
    return LowerBoundWitness(m, ev, fplinalg.rank(MatrixFp(p, ev)))


def quotient_cycle_graph(p: int, i: int) -> SchreierGraph:
    """Schreier graph of the index-``pⁱ`` subgroup pulled back from ``Z``.

    The shift generator moves around a ``pⁱ``-cycle; the lamp generator acts
    trivially and contributes loops.
    """
    m = p ** i
    edges = tuple((c, (c + 1) % m, 0) for c in range(m)) + tuple((c, c, 1) for c in range(m))
    return SchreierGraph(m, edges)
