import numpy as np
import pytest
from hypothesis import given

from src.errors import BadPermutation, DegreeMismatch
from src.permutation import (
    Permutation,
    compose,
    cycle_containing,
    cycle_decomposition,
    embed,
    hamming,
    identity,
    inverse,
    parse_permutation,
    stack,
)
from tests.conftest import perms


def test_construction_validates():
    with pytest.raises(BadPermutation):
        Permutation([0, 0, 1])
    with pytest.raises(BadPermutation):
        Permutation([0, 3, 1])
    assert Permutation([2, 0, 1]).n == 3


def test_compose_applies_left_argument_first():
    pi = Permutation([1, 2, 0])
    sigma = Permutation([0, 2, 1])
    # pi first: 0 -> 1 -> 2
    assert compose(pi, sigma) == Permutation([2, 1, 0])
    assert compose(sigma, pi) == Permutation([1, 0, 2])


def test_compose_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        compose(identity(3), identity(4))
    with pytest.raises(DegreeMismatch):
        hamming(identity(3), identity(4))


@given(perms())
def test_inverse_composes_to_identity(pi):
    assert compose(pi, inverse(pi)).is_identity()
    assert compose(inverse(pi), pi).is_identity()


@given(perms(n=7), perms(n=7), perms(n=7))
def test_hamming_is_bi_invariant(pi, sigma, g):
    d = hamming(pi, sigma)
    assert hamming(compose(pi, g), compose(sigma, g)) == d
    assert hamming(compose(g, pi), compose(g, sigma)) == d
    assert hamming(compose(inverse(pi), sigma), identity(7)) == d


def test_cycle_decomposition():
    decomposition = cycle_decomposition(Permutation([1, 2, 0, 3, 5, 4]))
    assert decomposition.cycles == [(0, 1, 2), (3,), (4, 5)]
    assert decomposition.fixed_points == [3]
    assert decomposition.length_histogram == {3: 1, 1: 1, 2: 1}
    assert decomposition.has_cycle_of_length(3)
    assert not decomposition.has_cycle_of_length(4)
    assert decomposition.moved() == 5


@given(perms())
def test_cycle_lengths_sum_to_degree(pi):
    decomposition = cycle_decomposition(pi)
    assert sum(len(c) for c in decomposition.cycles) == pi.n
    for cycle in decomposition.cycles:
        assert cycle_containing(pi, cycle[0]) == cycle


def test_embed_fixes_new_symbols():
    assert embed(Permutation([1, 0]), 4) == Permutation([1, 0, 2, 3])
    with pytest.raises(DegreeMismatch):
        embed(identity(4), 3)


def test_parse_permutation():
    assert parse_permutation("2 0 1") == Permutation([2, 0, 1])
    assert parse_permutation("3,1,2", one_indexed=True) == Permutation([2, 0, 1])
    with pytest.raises(BadPermutation) as err:
        parse_permutation("0 1 1", line=7)
    assert err.value.line == 7
    with pytest.raises(BadPermutation):
        parse_permutation("0 x 1")
    with pytest.raises(BadPermutation):
        parse_permutation("   ")


def test_stack_and_text():
    pi = Permutation([1, 0, 2])
    assert pi.to_text() == "1 0 2"
    assert np.array_equal(stack([pi, identity(3)]), np.array([[1, 0, 2], [0, 1, 2]]))
