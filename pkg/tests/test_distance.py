import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.distance import (
    CosetDistance,
    cyclic_coset_decomposition,
    group_hd,
    hd_to_cyclic,
    hd_to_cyclic_cosets,
    hd_to_set,
    pa_hd,
    pairwise_hd,
    poly_hd,
)
from src.errors import IdenticalPolynomials, NotAPermutationPolynomial, NotASupergroupOfCyclic, TrivialGroup
from src.finite_field import FPoly, field_of_order, make_field
from src.groups import GroupDescriptor, materialize
from src.perm_array import PermArray
from src.permutation import Permutation, compose, hamming, identity, stack
from tests.conftest import perms


def _shifts(n):
    return [Permutation([(x + j) % n for x in range(n)]) for j in range(n)]


@given(perms(min_n=2))
def test_hd_to_cyclic_matches_brute_force(pi):
    dist, histogram = hd_to_cyclic(pi)
    brute = [hamming(pi, g) for g in _shifts(pi.n)]
    assert dist == min(brute)
    assert list(histogram) == brute


@settings(max_examples=300)
@given(st.data())
def test_hd_to_cyclic_cosets_matches_brute_force(data):
    n = data.draw(st.integers(min_value=2, max_value=10))
    pi = data.draw(perms(n=n))
    reps = data.draw(st.lists(perms(n=n), min_size=1, max_size=4))
    brute = min(hamming(pi, compose(r, g)) for r in reps for g in _shifts(n))
    assert hd_to_cyclic_cosets(pi, reps) == brute


def test_hd_to_cyclic_of_identity():
    dist, histogram = hd_to_cyclic(identity(5))
    assert dist == 0
    assert list(histogram) == [0, 5, 5, 5, 5]


def test_cyclic_coset_decomposition_of_agl1_7():
    group = materialize(GroupDescriptor.agl1(7))
    reps = cyclic_coset_decomposition(group)
    assert len(reps) == 6
    assert all(r[0] == 0 for r in reps)
    covered = {compose(r, g) for r in reps for g in _shifts(7)}
    assert covered == set(group.elements)


def test_cyclic_decomposition_needs_the_shift():
    with pytest.raises(NotASupergroupOfCyclic):
        cyclic_coset_decomposition(materialize(GroupDescriptor.agl1(8)))


@pytest.mark.parametrize("descriptor", [GroupDescriptor.agl1(7), GroupDescriptor.agl1(11), GroupDescriptor.cyclic(9)])
def test_fast_and_direct_oracles_agree(descriptor):
    group = materialize(descriptor)
    fast, direct = CosetDistance(group), CosetDistance(group, fast=False)
    assert fast.method == "cyclic-fast"
    assert direct.method == "coset-shortcut"
    rng = np.random.default_rng(3)
    rows = np.stack([rng.permutation(group.degree) for _ in range(200)])
    fast_d, fast_arg = fast.distances(rows)
    direct_d, _ = direct.distances(rows)
    assert np.array_equal(fast_d, direct_d)
    # the returned element realises the distance
    assert all((group.matrix[a] != row).sum() == d for row, a, d in zip(rows, fast_arg, fast_d))


def test_group_hd_and_trivial_group():
    report = group_hd(materialize(GroupDescriptor.agl1(5)))
    assert report.min_distance == 4
    assert report.method == "group-shortcut"
    with pytest.raises(TrivialGroup):
        group_hd(materialize(GroupDescriptor.trivial(4)))


def test_pairwise_hd_witness_is_smallest_pair():
    matrix = stack([Permutation(p) for p in ([0, 1, 2, 3], [1, 0, 3, 2], [1, 0, 2, 3], [0, 1, 3, 2])])
    report = pairwise_hd(matrix, workers=1)
    assert report.min_distance == 2
    assert report.witness == (0, 2)
    assert report.comparisons == 6
    with pytest.raises(TrivialGroup):
        pairwise_hd(matrix[:1])


def test_pairwise_target_stops_at_first_row_below_it():
    matrix = stack([Permutation(p) for p in ([0, 1, 2, 3], [1, 0, 3, 2], [1, 0, 2, 3], [0, 1, 3, 2])])
    stopped = pairwise_hd(matrix, workers=1, target=3)
    assert (stopped.min_distance, stopped.witness, stopped.comparisons) == (2, (0, 2), 3)
    assert stopped.stopped_early
    reached = pairwise_hd(matrix, workers=1, target=2)
    assert reached == pairwise_hd(matrix, workers=1)
    assert not reached.stopped_early


@pytest.mark.parametrize("mode", ["coset-shortcut", "exact-pairwise"])
def test_target_decides_like_a_full_scan(mode):
    base = materialize(GroupDescriptor.agl1(7))
    rng = random.Random(11)
    for _ in range(4):
        pa = PermArray(base, [Permutation(rng.sample(range(7), 7)) for _ in range(3)])
        full = pa_hd(pa, mode, workers=1)
        for target in range(1, 9):
            report = pa_hd(pa, mode, workers=1, target=target)
            assert (report.min_distance >= target) == (full.min_distance >= target)
            if full.min_distance >= target:
                assert report.min_distance == full.min_distance
            i, j = report.witness
            assert hamming(pa.element(i), pa.element(j)) == report.min_distance


def test_hd_to_set():
    matrix = stack([Permutation([1, 0, 2]), Permutation([2, 1, 0])])
    assert hd_to_set(np.array([0, 1, 2]), matrix) == (2, 0)


@pytest.mark.parametrize("descriptor", [GroupDescriptor.agl1(5), GroupDescriptor.agl1(8), GroupDescriptor.cyclic(6)])
def test_coset_shortcut_matches_pairwise(descriptor):
    base = materialize(descriptor)
    rng = random.Random(descriptor.degree)
    for _ in range(5):
        reps = [Permutation(rng.sample(range(base.degree), base.degree)) for _ in range(3)]
        pa = PermArray(base, reps)
        shortcut = pa_hd(pa, "coset-shortcut")
        exact = pa_hd(pa, "exact-pairwise", workers=1)
        assert shortcut.min_distance == exact.min_distance
        i, j = shortcut.witness
        assert hamming(pa.element(i), pa.element(j)) == shortcut.min_distance


def test_pa_hd_of_explicit_listing():
    pa = PermArray.explicit([Permutation([1, 0, 2, 3]), Permutation([0, 1, 3, 2]), Permutation([1, 0, 3, 2])])
    assert pa.reps[0] == Permutation([1, 0, 2, 3])
    assert pa_hd(pa).min_distance == pa_hd(pa, "exact-pairwise").min_distance == 2


@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 16, 25, 27])
def test_poly_hd_matches_hamming(q):
    spec = field_of_order(q)
    rng = random.Random(q)
    for _ in range(200):
        i = rng.randrange(spec.k)
        a, b = rng.randrange(1, q), rng.randrange(q)
        c, e = rng.randrange(1, q), rng.randrange(q)
        f = FPoly.from_terms(spec, {spec.p ** i: a, 0: b} if i else {1: a, 0: b})
        g = FPoly.from_terms(spec, {1: c, 0: e})
        if f == g:
            continue
        as_perm = [Permutation([h(x) for x in spec.elements()]) for h in (f, g)]
        assert poly_hd(spec, f, g) == hamming(*as_perm)


def test_poly_hd_errors():
    gf5 = make_field(5)
    with pytest.raises(NotAPermutationPolynomial):
        poly_hd(gf5, FPoly(gf5, [0, 0, 1]), FPoly(gf5, [0, 1]))
    with pytest.raises(IdenticalPolynomials):
        poly_hd(gf5, FPoly(gf5, [0, 1]), FPoly(gf5, [0, 1]))
    gf4 = make_field(2, 2)
    assert poly_hd(gf4, FPoly(gf4, [0, 1]), FPoly(gf4, [0, 0, 1])) == 2
