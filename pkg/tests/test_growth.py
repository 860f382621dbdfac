import itertools
import random
from fractions import Fraction

import pytest

from conftest import random_chain, random_presentation
from oracles import count_p_subnormal_by_permutations
from trichotomy.cosets import CosetBudgetExceeded, SubnormalChain, is_normal_in, is_subgroup_of
from trichotomy.growth import (
    count_lower_bound,
    enumerate_subnormal,
    gradient,
    greedy_max_gradient_chain,
    growth_bound_diagnostics,
    walk_subnormal,
)
from trichotomy.words import cyclic_group, d_p, free_abelian, free_group, surface_group


def divisor_sum(n: int) -> int:
    return sum(d for d in range(1, n + 1) if n % d == 0)


def test_integers_have_one_subgroup_per_level():
    ledger = enumerate_subnormal(free_group(1), 2, 3)
    assert ledger.counts == (1, 1, 1, 1)
    assert ledger.r == (1, 1, 1, 1)


def test_free_group_counts():
    ledger = enumerate_subnormal(free_group(2), 2, 2)
    assert ledger.counts == (1, 3, 19)
    assert ledger.r == (2, 3, 5)
    assert ledger.counts[2] == count_p_subnormal_by_permutations(free_group(2), 4, 2)


@pytest.mark.parametrize("p,levels", [(2, 4), (3, 2)])
def test_lattice_counts_are_divisor_sums(p, levels):
    ledger = enumerate_subnormal(free_abelian(2), p, levels)
    assert ledger.counts == tuple(divisor_sum(p ** n) for n in range(levels + 1))
    assert set(ledger.r) == {2}


def test_lattice_level_one_at_three():
    ledger = enumerate_subnormal(free_abelian(2), 3, 2)
    assert ledger.counts[1] == 4
    assert all(n.d_p == 2 for n in ledger.nodes.values() if n.level == 2)


def test_counts_against_permutation_oracle():
    rng = random.Random(99)
    for _ in range(6):
        pres = random_presentation(rng, max_gens=2, max_rels=2, max_len=5)
        for p, n in ((2, 2), (3, 3), (2, 4)):
            level = {2: 1, 3: 1, 4: 2}[n]
            ledger = enumerate_subnormal(pres, p, level)
            assert ledger.counts[level] == count_p_subnormal_by_permutations(pres, n, p)


def test_level_one_formula():
    rng = random.Random(5)
    for _ in range(10):
        pres = random_presentation(rng)
        for p in (2, 3, 5):
            ledger = enumerate_subnormal(pres, p, 1)
            assert ledger.counts[1] == (p ** d_p(pres, p) - 1) // (p - 1)


def test_ledger_inequalities_and_dag_structure():
    for pres, p, lv in [(free_group(2), 2, 2), (surface_group(2), 2, 1), (free_abelian(2), 3, 2)]:
        ledger = enumerate_subnormal(pres, p, lv)
        for row in ledger.inequality_checks():
            assert row.get("count_ok", True) and row["r_ok"]
        for node in ledger.nodes.values():
            assert node.table.index == p ** node.level
            if node.level:
                assert node.parents
                for q in node.parents:
                    parent = ledger.nodes[q].table
                    assert is_subgroup_of(node.table, parent) and is_normal_in(node.table, parent)
        # distinct keys are distinct subgroups
        same_level = [n.table for n in ledger.nodes.values() if n.level == lv]
        rng = random.Random(0)
        for x, y in rng.sample(list(itertools.combinations(same_level, 2)), min(20, len(same_level) * (len(same_level) - 1) // 2)):
            assert not is_subgroup_of(x, y)


def test_truncation_keeps_complete_levels():
    ledger = enumerate_subnormal(free_group(2), 2, 3, max_cosets=4)
    assert ledger.truncated and "coset budget" in ledger.truncation_reason
    assert ledger.counts == (1, 3, 19)
    small = enumerate_subnormal(free_group(2), 2, 2, max_nodes=10)
    assert small.truncated and small.counts == (1, 3)
    assert all(n.level <= 1 for n in small.nodes.values())


def test_walk_matches_ledger():
    ledger = enumerate_subnormal(free_group(2), 2, 2)
    by_level = {}
    for level, _ in walk_subnormal(free_group(2), 2, 2):
        by_level[level] = by_level.get(level, 0) + 1
    assert tuple(by_level[n] for n in range(3)) == ledger.counts


def test_gradient_free_group():
    chain = greedy_max_gradient_chain(free_group(2), 2, 3)
    g = gradient(chain)
    assert all(q == 1 for q in g.reduced) and g.non_increasing


def test_gradient_lattice():
    chain = greedy_max_gradient_chain(free_abelian(2), 2, 4)
    g = gradient(chain)
    assert g.reduced == tuple(Fraction(1, 2 ** n) for n in range(5))
    assert g.infimum_so_far[-1] == Fraction(1, 16)


def test_gradient_genus_two():
    tabs = random_chain(random.Random(4), surface_group(2), 2, 16)
    g = gradient(SubnormalChain(tuple(tabs), 2))
    assert g.reduced == tuple(Fraction(2 * n + 1, n) for n in g.indices)
    assert g.plain == tuple(Fraction(2 * n + 2, n) for n in g.indices)
    assert g.non_increasing


def test_gradient_non_increasing_on_random_chains():
    rng = random.Random(12)
    for _ in range(25):
        pres = random_presentation(rng)
        p = rng.choice([2, 3, 5])
        g = gradient(SubnormalChain(tuple(random_chain(rng, pres, p, 27)), p))
        assert g.non_increasing
        dg = d_p(pres, p)
        for d, n in zip(g.d_p, g.indices):
            assert d - 1 <= n * (dg - 1)


def test_count_lower_bound_and_diagnostics():
    assert count_lower_bound(2, Fraction(1), 1) == 3
    assert count_lower_bound(2, Fraction(1), 2) == 7
    ledger = enumerate_subnormal(free_group(2), 2, 2)
    diag = growth_bound_diagnostics(ledger, Fraction(1))
    assert [r["lower_bound"] for r in diag["levels"][1:]] == [3, 7]
    assert all(r["lower_bound_ok"] and r["upper_bound_ok"] for r in diag["levels"][1:])
    assert diag["lambda"] == [1, 1]
    flat = growth_bound_diagnostics(enumerate_subnormal(free_group(1), 2, 3))
    assert [r["count"] for r in flat["levels"]] == [1, 1, 1, 1]
    with pytest.raises(ValueError):
        growth_bound_diagnostics(enumerate_subnormal(free_group(1), 2, 0))


def test_reports_are_exact():
    out = enumerate_subnormal(free_abelian(2), 2, 2).to_dict(include_dag=True)

    def walk(x):
        if isinstance(x, dict):
            for v in x.values():
                walk(v)
        elif isinstance(x, (list, tuple)):
            for v in x:
                walk(v)
        else:
            assert not isinstance(x, float)

    walk(out)
    assert len(out["dag"]) == 1 + 3 + 7


def test_greedy_chain_budget_and_max_gradient_chain():
    with pytest.raises(CosetBudgetExceeded):
        greedy_max_gradient_chain(free_group(2), 2, 3, max_cosets=4)
    ledger = enumerate_subnormal(free_group(2), 3, 2)
    chain = ledger.max_gradient_chain()
    assert chain.validate() == [] and len(chain) == 3
    assert all(q == 1 for q in gradient(chain).reduced)


def test_empty_levels_pass_inequalities_vacuously():
    ledger = enumerate_subnormal(cyclic_group(3), 2, 2)
    assert ledger.counts == (1, 0, 0)
    assert all(row["r_ok"] and row.get("count_ok", True) for row in ledger.inequality_checks())
