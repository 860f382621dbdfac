import copy
import random

import numpy as np
import pytest

from conftest import random_chain, random_presentation
from trichotomy.cocycles import Cochain1, is_coboundary, is_nonseparating, regularize, union_of
from trichotomy.complexes import cover_of, cut_decomposition, homology_basis_labels
from trichotomy.cosets import (
    cyclic_quotient_table,
    index_p_normal_subgroups,
    todd_coxeter,
    trivial_table,
)
from trichotomy.largeness import (
    CertificationError,
    CutBudgetExceeded,
    CutEvaluator,
    candidate_cuts,
    certify_from_cut,
    crossing_word,
    cut_diagnostics,
    epimorphism_images,
    exhaustive_cuts,
    hp_exponent,
    hp_threshold,
    hp_upper_bound,
    reduce_free_product,
    restriction_kernel,
    restriction_kernel_dim,
    sweep_cover,
    verify_certificate,
)
from trichotomy.words import free_abelian, free_group, surface_group

a, b = ((0, 1),), ((1, 1),)


def first_certificate(pres, p, max_level=2):
    """Breadth-first over index-p normal descents until a sweep certifies."""
    frontier = [trivial_table(pres)]
    for _ in range(max_level):
        nxt = []
        for t in frontier:
            for child in index_p_normal_subgroups(t, p):
                res = sweep_cover(child, p)
                if res.certificate is not None:
                    return res.certificate
                nxt.append(child)
        frontier = nxt
    return None


@pytest.fixture(scope="module")
def wedge_cert():
    t = cyclic_quotient_table(free_group(2), 2, [1, 0])
    return sweep_cover(t, 3).certificate


@pytest.fixture(scope="module")
def genus2_cert():
    return first_certificate(surface_group(2), 2)


def test_free_group_positive_control(wedge_cert):
    cert = wedge_cert
    assert cert is not None and cert.p == 3
    g0, g1 = cert.cocycles
    assert not set(g0.support) & set(g1.support)
    assert is_nonseparating(cert.complex, union_of(cert.cocycles))
    words = [w for _, w in epimorphism_images(cert)]
    used = {i for w in words for i, _ in w}
    assert used == {0, 1}
    assert verify_certificate(cert.to_dict()) == []


def test_genus_two_certificate(genus2_cert):
    cert = genus2_cert
    assert cert is not None and cert.cover.index <= 8
    assert min(cert.kernel_dims) >= 1 and max(cert.kernel_dims) >= 2
    assert verify_certificate(cert.to_dict()) == []


def test_genus_two_index_two_balanced_cuts_fail():
    for t in index_p_normal_subgroups(trivial_table(surface_group(2)), 2):
        res = sweep_cover(t, 2, stop_at_first=False)
        assert res.certificate is None
        assert all(min(f.kernel_dims) == 0 for f in res.failures)


def test_lattice_cuts_all_fail_at_small_index():
    t = todd_coxeter(free_abelian(2), [a + a, b + b])
    res = sweep_cover(t, 2, strategy="exhaustive", stop_at_first=False)
    assert res.certificate is None
    assert res.cuts_tried == len(exhaustive_cuts(t)) == len(res.failures)
    for f in res.failures:
        assert min(f.kernel_dims) == 0


def test_witness_loops_cross_their_cocycle_once(wedge_cert, genus2_cert):
    for cert in (wedge_cert, genus2_cert):
        for i, loop in enumerate(cert.witness_loops):
            word = crossing_word(loop, cert.cocycles, cert.p)
            assert len(word) == 1 and word[0][0] == i and word[0][1] != 0


def test_crossing_word_trivial_cases(wedge_cert):
    assert crossing_word([], wedge_cert.cocycles, 3) == ()
    g = wedge_cert.cocycles[0]
    e = g.support[0]
    assert crossing_word([(e, 1)], [g], 3) == ((0, g.weights[e]),)


def test_reduce_free_product():
    assert reduce_free_product([(0, 1), (0, 2), (1, 1)], 3) == ((1, 1),)
    assert reduce_free_product([(0, 1), (1, 3), (0, 1)], 3) == ((0, 2),)
    assert reduce_free_product([(0, 5), (1, -1)], 5) == ((1, 4),)


@pytest.mark.parametrize("field,mutate", [
    ("cocycles", lambda d: d["cocycles"][0][0].__setitem__(1, d["cocycles"][0][0][1] + 1)),
    ("cocycles", lambda d: d["cocycles"][1].extend(d["cocycles"][0])),
    ("witness_loops", lambda d: d["witness_loops"][0].reverse() or d["witness_loops"][0].append([0, 1])),
    ("witness_loops", lambda d: d["witness_loops"].pop()),
    ("generator_images", lambda d: d["generator_images"][0]["word"].append([1, 1])),
    ("cocycles", lambda d: d["cocycles"][0].append([0, 0])),
])
def test_tampered_certificates_are_rejected(genus2_cert, field, mutate):
    data = copy.deepcopy(genus2_cert.to_dict())
    mutate(data)
    assert verify_certificate(data)


def test_malformed_certificate():
    assert verify_certificate({"p": 2})[0].startswith("malformed")


def test_verify_accepts_complex_form(wedge_cert):
    data = wedge_cert.to_dict()
    data.pop("cover")
    data.pop("presentation")
    data.pop("generator_images")
    data["complex"] = wedge_cert.complex.to_dict()
    assert verify_certificate(data) == []


def random_cuts(rng, n, count):
    out = set()
    for _ in range(count):
        size = rng.randint(1, n - 1)
        out.add(tuple(sorted(rng.sample(range(n), size))))
    return sorted(out)


def test_kernel_routes_agree():
    rng = random.Random(17)
    done = 0
    while done < 30:
        pres = random_presentation(rng, max_gens=3)
        p = rng.choice([2, 3])
        tabs = random_chain(rng, pres, p, 9)
        t = tabs[-1]
        if t.index < 2:
            continue
        k = cover_of(t)
        ev = CutEvaluator(k, p)
        for d in random_cuts(rng, t.index, 4):
            A, B, C = cut_decomposition(k, d)
            fast = ev.summary(d)
            slow = tuple(restriction_kernel_dim(side, C, p) for side in (A, B))
            assert fast["kernel_dims"] == slow
            assert fast["d_p"] == tuple(x.profile(p).d1 for x in (A, B, C))
            assert fast["hp_exponent"] == hp_exponent(k, d, p)
            for side, dim in zip((A, B), slow):
                n, cocycles = restriction_kernel(side, C, p)
                assert n == dim
                cx = side.as_complex()
                inner_cx, _, inner_edges, _ = C.relative_to(side).reindexed
                for z in cocycles:
                    assert Cochain1(p, z).is_cocycle(cx)
                    assert is_coboundary(inner_cx, Cochain1(p, np.asarray(z)[inner_edges]))
                    assert not is_coboundary(cx, Cochain1(p, z))
        done += 1


def test_hp_upper_bound_example():
    t = todd_coxeter(free_abelian(2), [a + a, b + b])
    k = cover_of(t)
    A, B, C = cut_decomposition(k, [0, 1])
    direct = C.profile(2).d1 - min(A.profile(2).d1, B.profile(2).d1)
    assert hp_upper_bound(k, [0, 1], 2) == 2 ** direct
    assert hp_upper_bound(k, [0, 1], 2) >= 1


def test_hp_bound_below_threshold_implies_certificate():
    rng = random.Random(23)
    below = 0
    for pres, p in [(free_group(2), 2), (free_group(2), 3), (surface_group(2), 2),
                    (free_group(3), 2), (free_abelian(2), 3)]:
        for t in random_chain(rng, pres, p, 8)[1:]:
            k = cover_of(t)
            ev = CutEvaluator(k, p)
            for d in candidate_cuts(t):
                res = certify_from_cut(k, d, p, t, ev)
                if hp_upper_bound(k, d, p) < hp_threshold(p):
                    below += 1
                    assert res.succeeded, (pres, p, d, res)
                if res.succeeded:
                    assert verify_certificate(res.to_dict()) == []
    assert below > 0


def test_p2_needs_a_two_dimensional_kernel():
    found = 0
    for t in index_p_normal_subgroups(trivial_table(free_group(2)), 2):
        for child in index_p_normal_subgroups(t, 2):
            for f in sweep_cover(child, 2, stop_at_first=False).failures:
                if min(f.kernel_dims) >= 1:
                    assert max(f.kernel_dims) == 1
                    assert "dimension at least 2" in f.reason
                    found += 1
    assert found


def test_cut_diagnostics_bounds_on_free_and_lattice_covers():
    rng = random.Random(31)
    for pres, p in [(free_group(2), 2), (free_group(2), 3), (free_abelian(2), 2), (surface_group(2), 2)]:
        labels = homology_basis_labels(pres, p)
        for t in random_chain(rng, pres, p, 16)[1:]:
            k = cover_of(t)
            for d in random_cuts(rng, t.index, 6):
                diag = cut_diagnostics(t, d, p, labels, k)
                assert diag.all_bounds_hold, diag.bounds
                assert diag.hp_exponent == hp_exponent(k, d, p)


def test_cut_diagnostics_without_two_cells():
    t = cyclic_quotient_table(free_group(1), 8, [1])
    diag = cut_diagnostics(t, [0, 1, 2, 3], 2, [0])
    assert diag.type_iii == 0
    assert diag.boundary_size == 2 and diag.type_ii == 2 and diag.type_i == 3


def test_cut_diagnostics_rejects_bad_labels():
    t = cyclic_quotient_table(free_group(2), 2, [1, 0])
    with pytest.raises(CertificationError):
        cut_diagnostics(t, [0], 2, [0])


def test_mv_codimension_on_torus_cover():
    t = todd_coxeter(free_abelian(2), [a + a, b + b])
    diag = cut_diagnostics(t, [0, 1], 2, [0, 1])
    assert diag.mv_codimension <= diag.gamma_c_components <= diag.c_vertices


def test_cut_budget():
    t = cyclic_quotient_table(free_group(1), 32, [1])
    with pytest.raises(CutBudgetExceeded):
        exhaustive_cuts(t)
    with pytest.raises(CutBudgetExceeded):
        candidate_cuts(t, "exhaustive", max_vertices=16)
    assert candidate_cuts(t, "auto")


def test_exhaustive_cuts_cover_every_orbit():
    t = cyclic_quotient_table(free_group(1), 6, [1])
    cuts = exhaustive_cuts(t)
    # subsets of Z/6 up to rotation and complement
    seen = set()
    for mask in range(1, 63):
        orbit = set()
        for r in range(6):
            m = sum(1 << ((v + r) % 6) for v in range(6) if mask >> v & 1)
            orbit |= {m, m ^ 63}
        seen.add(min(orbit))
    assert len(cuts) == len(seen)


def test_regularized_cocycles_of_certificate_are_regular(genus2_cert):
    k = genus2_cert.complex
    for g in genus2_cert.cocycles:
        again = regularize(k, g.cochain())
        assert again.weights == g.weights
        assert all(s == 0 for s in again.interior_sums().values())
