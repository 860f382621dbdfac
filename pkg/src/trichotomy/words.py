"""Words in a free basis, finite presentations and permutation quotients.

A word is a tuple of ``(generator, sign)`` pairs with ``sign`` in ``{1, -1}``.
Generators are indexed ``0..n-1``; names only matter for parsing and display.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Word = tuple  # tuple[tuple[int, int], ...]


class PresentationError(ValueError):
    """Malformed presentation text or invalid quotient specification."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"{p!r} is not a prime")
    return int(p)


def inverse(w: Word) -> Word:
    return tuple((g, -s) for g, s in reversed(w))


def free_reduce(w: Iterable) -> Word:
    out: list = []
    for g, s in w:
        if out and out[-1][0] == g and out[-1][1] == -s:
            out.pop()
        else:
            out.append((g, s))
    return tuple(out)


def cyclic_reduce(w: Word) -> Word:
    """Trim matching first/last letters of a freely reduced word."""
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i][0] == w[j][0] and w[i][1] == -w[j][1]:
        i += 1
        j -= 1
    return w[i:j + 1]


def power(w: Word, k: int) -> Word:
    if k < 0:
        return inverse(w) * (-k)
    return tuple(w) * k


def commutator(x: Word, y: Word) -> Word:
    return free_reduce(x + y + inverse(x) + inverse(y))


def exponent_sums(w: Word, n: int) -> list[int]:
    sums = [0] * n
    for g, s in w:
        sums[g] += s
    return sums


def check_word(w: Iterable, generator_count: int, what: str = "word") -> Word:
    """``w`` as a tuple of ``(generator, ±1)`` letters; raises on anything else."""
    out = tuple((int(g), int(s)) for g, s in w)
    for g, s in out:
        if not 0 <= g < generator_count or s not in (1, -1):
            raise PresentationError(f"bad letter {(g, s)!r} in {what}")
    return out


@dataclass(frozen=True)
class Presentation:
    """Finite presentation; relators are stored cyclically reduced."""

    generator_count: int
    relators: tuple = ()
    generator_names: tuple = field(default=())

    def __post_init__(self):
        n = self.generator_count
        if n < 1:
            raise PresentationError("a presentation needs at least one generator")
        names = tuple(self.generator_names) or tuple(default_names(n))
        if len(names) != n or len(set(names)) != n:
            raise PresentationError("generator names must be distinct, one per generator")
        rels = []
        for r in self.relators:
            r = cyclic_reduce(check_word(r, n, "relator"))
            if r:
                rels.append(r)
        object.__setattr__(self, "generator_names", names)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def total_length(self) -> int:
        """Sum of relator lengths (``L``)."""
        return sum(len(r) for r in self.relators)

    L = total_length

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generator_names)

    def to_text(self) -> str:
        lines = ["generators: " + " ".join(self.generator_names)]
        lines += ["rel: " + self.format_word(r) for r in self.relators]
        return "\n".join(lines) + "\n"


def default_names(n: int) -> list[str]:
    letters = "abcdefghijklmnopqrstuvwxyz"
    if n <= len(letters):
        return list(letters[:n])
    return [f"x{i}" for i in range(n)]


def format_word(w: Word, names: Sequence[str]) -> str:
    if not w:
        return "1"
    return " ".join(names[g] if s == 1 else f"{names[g]}^-1" for g, s in w)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(text: str, names: Sequence[str], line: int | None = None) -> Word:
    """Parse ``"a b a^-1 b^-1"``; ``a^k`` for any integer ``k`` is accepted."""
    index = {name: i for i, name in enumerate(names)}
    out = []
    for tok in text.split():
        if tok == "1":
            continue
        m = _TOKEN.match(tok)
        if m is None:
            raise PresentationError(f"cannot parse token {tok!r}", line)
        name, exp = m.group(1), m.group(2)
        if name not in index:
            raise PresentationError(f"unknown generator {name!r}", line)
        k = 1 if exp is None else int(exp)
        out.extend([(index[name], 1 if k > 0 else -1)] * abs(k))
    return tuple(out)


def parse_presentation(text: str) -> Presentation:
    names = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise PresentationError(f"expected 'generators:' or 'rel:', got {line!r}", lineno)
        key = key.strip()
        if key == "generators":
            if names is not None:
                raise PresentationError("duplicate generators line", lineno)
            names = rest.split()
            if not names:
                raise PresentationError("empty generator list", lineno)
            for nm in names:
                if not _TOKEN.match(nm) or "^" in nm:
                    raise PresentationError(f"bad generator name {nm!r}", lineno)
            if len(set(names)) != len(names):
                raise PresentationError("duplicate generator name", lineno)
        elif key == "rel":
            if names is None:
                raise PresentationError("'rel:' before 'generators:'", lineno)
            rels.append(parse_word(rest, names, lineno))
        else:
            raise PresentationError(f"unknown key {key!r}", lineno)
    if names is None:
        raise PresentationError("missing 'generators:' line")
    return Presentation(len(names), tuple(rels), tuple(names))


def load_presentation(path) -> Presentation:
    return parse_presentation(Path(path).read_text(encoding="utf-8"))


def abelianized_mod_p(pres: Presentation, p: int):
    """Relator-by-generator exponent-sum matrix reduced mod ``p``."""
    from .fplinalg import MatrixFp

    p = check_prime(p)
    rows = [exponent_sums(r, pres.generator_count) for r in pres.relators]
    return MatrixFp.from_rows(rows, p, cols=pres.generator_count)


def d_p(pres: Presentation, p: int) -> int:
    """Dimension of ``H_1(G; F_p)`` for the presented group."""
    from .fplinalg import rank

    return pres.generator_count - rank(abelianized_mod_p(pres, p))


@dataclass(frozen=True)
class FiniteQuotientSpec:
    """Right action of the generators on ``{0..degree-1}``."""

    degree: int
    images: tuple

    def __post_init__(self):
        imgs = tuple(tuple(int(x) for x in im) for im in self.images)
        object.__setattr__(self, "images", imgs)
        for im in imgs:
            if sorted(im) != list(range(self.degree)):
                raise PresentationError("generator image is not a permutation")

    def act(self, point: int, w: Word) -> int:
        inv = None
        for g, s in w:
            if s == 1:
                point = self.images[g][point]
            else:
                if inv is None:
                    inv = [np.argsort(im) for im in self.images]
                point = int(inv[g][point])
        return point

    def validate(self, pres: Presentation) -> None:
        if len(self.images) != pres.generator_count:
            raise PresentationError("one image per generator required")
        for r in pres.relators:
            for x in range(self.degree):
                if self.act(x, r) != x:
                    raise PresentationError(
                        f"relator {pres.format_word(r)} does not act trivially on point {x}"
                    )


# Stock presentations used throughout the tests and the CLI examples.


def free_group(n: int = 2) -> Presentation:
    return Presentation(n, ())


def free_abelian(n: int = 2) -> Presentation:
    gens = [((i, 1),) for i in range(n)]
    rels = [commutator(gens[i], gens[j]) for i in range(n) for j in range(i + 1, n)]
    return Presentation(n, tuple(rels))


def surface_group(genus: int) -> Presentation:
    rel: tuple = ()
    for i in range(genus):
        rel += commutator(((2 * i, 1),), ((2 * i + 1, 1),))
    return Presentation(2 * genus, (rel,))


def cyclic_group(n: int) -> Presentation:
    return Presentation(1, (((0, 1),) * n,) if n else ())
