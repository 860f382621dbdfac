import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trichotomy.expansion import cheeger_exact
from trichotomy.lamplighter import (
    POSITION_CAP,
    LampOverflowError,
    LamplighterElement as L,
    NotInSubgroup,
    dp_lower_bound,
    lamp_residue_sum,
    multiply,
    quotient_cycle_graph,
)


@st.composite
def elements(draw, p=None, shift_multiple=1):
    p = p or draw(st.sampled_from([2, 3, 5]))
    shift = draw(st.integers(-6, 6)) * shift_multiple
    lamps = draw(st.lists(st.tuples(st.integers(-10, 10), st.integers(0, p - 1)), max_size=5))
    return L(p, shift, tuple(lamps))


def test_examples():
    p = 2
    x = L(p, 3, ((1, 1), (-2, 1)))
    assert L.identity(p) * x == x
    b = L.lamp_generator(p)
    assert b * b == L.identity(p)
    a = L.shift_generator(p)
    assert a * b * a.inverse() == L.lamp_at(p, 1)


def test_normalisation_drops_zero_lamps():
    assert L(3, 0, ((0, 1), (0, 2))).lamps == ()
    assert L(3, 0, ((4, 5),)).lamps == ((4, 2),)


@given(st.data())
def test_group_axioms(data):
    p = data.draw(st.sampled_from([2, 3, 5]))
    x, y, z = (data.draw(elements(p)) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * x.inverse() == L.identity(p) == x.inverse() * x
    assert multiply(x, y) == x * y


def test_powers():
    a = L.shift_generator(3)
    assert a ** 4 == L(3, 4) and a ** -2 == L(3, -2)


def test_residue_sum_examples():
    p = 2
    b = L.lamp_generator(p)
    a = L.shift_generator(p)
    assert lamp_residue_sum(b, 1, 0, p) == 1 and lamp_residue_sum(b, 1, 1, p) == 0
    x = a ** 2 * b * a ** -2
    assert x.lamps == ((2, 1),) and lamp_residue_sum(x, 1, 0, p) == 1
    assert lamp_residue_sum(L.lamp_at(p, 0) * L.lamp_at(p, 2), 1, 0, p) == 0


def test_residue_sum_domain_errors():
    with pytest.raises(NotInSubgroup):
        lamp_residue_sum(L.shift_generator(2), 1, 0, 2)
    with pytest.raises(ValueError):
        lamp_residue_sum(L.identity(2), 1, 2, 2)


def test_residue_sums_are_homomorphisms():
    rng = random.Random(7)
    failures = 0
    for trial in range(2000):
        p = rng.choice([2, 3])
        i = rng.randint(0, 3)
        m = p ** i
        def rand():
            return L(p, m * rng.randint(-3, 3), tuple((rng.randint(-20, 20), rng.randrange(p)) for _ in range(4)))
        x, y = rand(), rand()
        shift_m = L(p, m)
        for j in range(m):
            lhs = lamp_residue_sum(x * y, i, j, p)
            rhs = (lamp_residue_sum(x, i, j, p) + lamp_residue_sum(y, i, j, p)) % p
            failures += lhs != rhs
            conj = shift_m * x * shift_m.inverse()
            failures += lamp_residue_sum(conj, i, j, p) != lamp_residue_sum(x, i, j, p)
    assert failures == 0


@pytest.mark.parametrize("p", [2, 3])
def test_lower_bound_witness(p):
    assert dp_lower_bound(0, p).value == 1
    for i in range(5):
        w = dp_lower_bound(i, p)
        assert w.value == p ** i and w.verified
    w = dp_lower_bound(2, 2)
    assert np.array_equal(w.evaluation, np.eye(4, dtype=np.int64))


def test_position_cap():
    with pytest.raises(LampOverflowError):
        L(2, 0, ((POSITION_CAP + 1, 1),))
    with pytest.raises(LampOverflowError):
        L(2, POSITION_CAP + 1)


def test_quotient_cycle_graphs_lose_expansion():
    values = [cheeger_exact(quotient_cycle_graph(2, i)).value for i in range(1, 5)]
    assert values == [Fraction(2, 1), Fraction(1), Fraction(1, 2), Fraction(1, 4)]
