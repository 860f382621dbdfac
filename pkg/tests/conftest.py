import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

import numpy as np  # noqa: E402

from trichotomy.cocycles import Cochain1, coboundary_of_vertices, cohomology_basis  # noqa: E402
from trichotomy.complexes import TwoComplex  # noqa: E402
from trichotomy.cosets import d_p_subgroup, descend, homomorphism_count, trivial_table  # noqa: E402
from trichotomy.words import Presentation, free_reduce  # noqa: E402

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
PRESENTATIONS = ROOT / "presentations"


def random_word(rng: random.Random, gens: int, length: int):
    return free_reduce(tuple((rng.randrange(gens), rng.choice((1, -1))) for _ in range(length)))


def random_presentation(rng: random.Random, max_gens: int = 3, max_rels: int = 2, max_len: int = 6):
    n = rng.randint(1, max_gens)
    rels = []
    for _ in range(rng.randint(0, max_rels)):
        w = random_word(rng, n, rng.randint(2, max_len))
        if w:
            rels.append(w)
    return Presentation(n, tuple(rels))


def random_chain(rng: random.Random, pres, p: int, max_index: int):
    """Random descent through index-``p`` normal subgroups, as a list of tables."""
    tabs = [trivial_table(pres)]
    while tabs[-1].index * p <= max_index:
        d = d_p_subgroup(tabs[-1], p)
        if d == 0:
            break
        tabs.append(descend(tabs[-1], p, rng.randrange(homomorphism_count(d, p))))
    return tabs


def random_small_complex(rng: random.Random, max_cells: int = 12) -> TwoComplex:
    """Connected complex with 2-cells attached along random closed walks."""
    while True:
        v = rng.randint(1, 4)
        edges = [(i, i + 1) for i in range(v - 1)]  # spanning path keeps it connected
        for _ in range(rng.randint(1, 4)):
            edges.append((rng.randrange(v), rng.randrange(v)))
        adj = {x: [] for x in range(v)}
        for e, (t, h) in enumerate(edges):
            adj[t].append((e, 1, h))
            adj[h].append((e, -1, t))
        cells = []
        for _ in range(rng.randint(0, 3)):
            for _attempt in range(30):
                start = rng.randrange(v)
                cur, walk = start, []
                for _ in range(rng.randint(1, 5)):
                    e, s, nxt = rng.choice(adj[cur])
                    walk.append((e, s))
                    cur = nxt
                if cur == start:
                    cells.append(tuple(walk))
                    break
        if v + len(edges) + len(cells) <= max_cells:
            return TwoComplex(v, tuple(edges), tuple(cells))


def random_cocycle(rng: random.Random, k: TwoComplex, p: int) -> Cochain1:
    basis = cohomology_basis(k, p)
    vals = np.zeros(len(k.one_cells), dtype=np.int64)
    for v in basis:
        vals += rng.randrange(p) * v
    x = [rng.randrange(p) for _ in range(k.zero_cells)]
    return Cochain1(p, vals) + coboundary_of_vertices(k, x, p)


@pytest.fixture
def rng():
    return random.Random(20240607)


def descend_path(pres, p, choices):
    tabs = [trivial_table(pres)]
    for c in choices:
        tabs.append(descend(tabs[-1], p, c))
    return tabs
