import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import d_p_by_homomorphism_count, naive_free_reduce
from trichotomy.words import (
    FiniteQuotientSpec,
    Presentation,
    PresentationError,
    abelianized_mod_p,
    commutator,
    cyclic_group,
    cyclic_reduce,
    d_p,
    free_abelian,
    free_group,
    free_reduce,
    inverse,
    parse_presentation,
    surface_group,
)

A, B, C = (0, 1), (1, 1), (2, 1)
a_, b_ = (0, -1), (1, -1)

letters = st.tuples(st.integers(0, 2), st.sampled_from((1, -1)))
words = st.lists(letters, max_size=40).map(tuple)


def test_free_reduce_basic():
    assert free_reduce((A, a_)) == ()
    assert free_reduce((A, B, b_, A)) == (A, A)


@given(words)
def test_free_reduce_matches_fixpoint(w):
    assert free_reduce(w) == naive_free_reduce(w)


@given(words)
def test_free_reduce_idempotent_and_inverse(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert free_reduce(w + inverse(w)) == ()


def test_cyclic_reduce_examples():
    assert cyclic_reduce((A, B, a_)) == (B,)
    comm = (A, B, a_, b_)
    assert cyclic_reduce(comm) == comm
    assert cyclic_reduce((A, A, B, a_, a_)) == (B,)


def _rotations(w):
    return {w[i:] + w[:i] for i in range(len(w))} or {()}


@given(words)
def test_cyclic_reduce_is_rotation_invariant_up_to_rotation(w):
    r = cyclic_reduce(w)
    assert free_reduce(r) == r
    if len(r) > 1:
        assert r[0] != (r[-1][0], -r[-1][1])
    # conjugating by a letter does not change the cyclic class
    for letter in (A, B):
        conj = cyclic_reduce(free_reduce((letter,) + w + ((letter[0], -1),)))
        assert conj in _rotations(r)


def test_abelianization_examples():
    m = abelianized_mod_p(free_group(2), 2)
    assert m.entries.shape == (0, 2)
    assert d_p(free_group(2), 2) == 2
    assert abelianized_mod_p(free_abelian(2), 3).entries.tolist() == [[0, 0]]
    assert d_p(free_abelian(2), 3) == 2
    assert abelianized_mod_p(cyclic_group(5), 5).entries.tolist() == [[0]]
    assert d_p(cyclic_group(5), 5) == 1
    assert abelianized_mod_p(cyclic_group(5), 2).entries.tolist() == [[1]]
    assert d_p(cyclic_group(5), 2) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_d_p_matches_homomorphism_count(p):
    rng = random.Random(p)
    for _ in range(25):
        n = rng.randint(1, 3)
        rels = tuple(
            tuple((rng.randrange(n), rng.choice((1, -1))) for _ in range(rng.randint(1, 7)))
            for _ in range(rng.randint(0, 3))
        )
        pres = Presentation(n, rels)
        assert d_p(pres, p) == d_p_by_homomorphism_count(pres, p)


@given(words.filter(bool), st.sampled_from([2, 3, 5]))
def test_d_p_invariant_under_relator_rotation_and_inversion(w, p):
    w = free_reduce(w)
    if not w:
        return
    base = Presentation(3, (w,))
    rotated = Presentation(3, (w[1:] + w[:1],))
    inverted = Presentation(3, (inverse(w),))
    assert d_p(base, p) == d_p(rotated, p) == d_p(inverted, p)


def test_stock_presentations():
    g2 = surface_group(2)
    assert g2.generator_count == 4 and g2.total_length == 8
    assert d_p(g2, 2) == 4
    assert commutator((A,), (B,)) == (A, B, a_, b_)


def test_parse_roundtrip_and_errors():
    text = "generators: a b\nrel: a b a^-1 b^-1\n"
    pres = parse_presentation(text)
    assert pres == free_abelian(2)
    assert parse_presentation(pres.to_text()) == pres
    assert parse_presentation("generators: x\nrel: x^3 # order three\n").relators == (((0, 1),) * 3,)
    with pytest.raises(PresentationError, match="line 2"):
        parse_presentation("generators: a b\nrel: a c\n")
    with pytest.raises(PresentationError, match="line 1"):
        parse_presentation("gens a b\n")
    with pytest.raises(PresentationError):
        parse_presentation("rel: a\n")


def test_relators_stored_cyclically_reduced():
    pres = Presentation(2, (((0, 1), (1, 1), (0, -1)),))
    assert pres.relators == (((1, 1),),)


def test_quotient_spec_validation():
    spec = FiniteQuotientSpec(2, ((1, 0), (0, 1)))
    spec.validate(free_abelian(2))
    with pytest.raises(PresentationError):
        FiniteQuotientSpec(2, ((0, 0),))
    with pytest.raises(PresentationError):
        FiniteQuotientSpec(3, ((1, 2, 0),)).validate(cyclic_group(2))
