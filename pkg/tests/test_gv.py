from itertools import permutations
from math import factorial

import numpy as np
import pytest

from src.errors import BadRange
from src.gv import derangements, gv_bound, sphere_volume


def test_derangements():
    assert [derangements(k) for k in range(9)] == [1, 0, 1, 2, 9, 44, 265, 1854, 14833]
    with pytest.raises(BadRange):
        derangements(-1)


@pytest.mark.parametrize("k", [4, 5, 6])
def test_derangements_brute_force(k):
    count = sum(1 for p in permutations(range(k)) if all(p[i] != i for i in range(k)))
    assert derangements(k) == count


def test_small_bounds():
    result = gv_bound(4, 3)
    assert result.volume == 7
    assert result.bound == 3
    degenerate = gv_bound(9, 2)
    assert degenerate.volume == 1
    assert degenerate.bound == factorial(9)


def test_gv_16_9():
    result = gv_bound(16, 9)
    assert result.volume == 214_442_403
    assert result.bound == 97_568
    assert result.ceiling == 97_569


def test_gv_14_6():
    result = gv_bound(14, 6)
    assert result.volume == 97_917
    assert result.bound == 890_328


@pytest.mark.parametrize("n,d", [(20, 10), (26, 13), (40, 30)])
def test_exact_integer_invariant(n, d):
    result = gv_bound(n, d)
    assert result.bound * result.volume <= factorial(n) < (result.bound + 1) * result.volume


def test_sphere_volume_counts_permutations():
    n = 5
    rows = np.array(list(permutations(range(n))))
    for radius in range(n + 1):
        within = int(((rows != np.arange(n)).sum(axis=1) <= radius).sum())
        assert sphere_volume(n, radius) == within


def _greedy_code_size(rows, d):
    chosen = np.empty_like(rows)
    k = 0
    for row in rows:
        if k == 0 or (chosen[:k] != row).sum(axis=1).min() >= d:
            chosen[k] = row
            k += 1
    return k


@pytest.mark.parametrize("n", [5, 6, pytest.param(7, marks=pytest.mark.slow)])
def test_gv_is_below_greedy_code_size(n):
    rows = np.array(list(permutations(range(n))))
    for d in range(2, n + 1):
        assert gv_bound(n, d).bound <= _greedy_code_size(rows, d)


def test_bad_range():
    with pytest.raises(BadRange):
        gv_bound(5, 6)
    with pytest.raises(BadRange):
        gv_bound(5, 1)
    assert gv_bound(5, 5).render() == f"n=5 d=5 V={gv_bound(5, 5).volume} gv={gv_bound(5, 5).bound}"
