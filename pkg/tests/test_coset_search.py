from collections import Counter

import numpy as np
import pytest

from src.coset_search import SearchConfig, coset_search, random_permutation, verify_search_output
from src.distance import CosetDistance
from src.errors import BaseTooWeak, ClaimFailed, Exhausted, MalformedPA
from src.finite_field import field_of_order
from src.groups import GroupDescriptor, materialize
from src.pa_format import read_pa, serialize_pa, write_pa
from src.perm_array import PermArray, frobenius_coset_pa
from src.permutation import Permutation, compose, hamming, inverse
from src.settings import get_settings


def _coset_distance(base, pi, rep):
    sigma = compose(inverse(rep), pi)
    mins, _ = CosetDistance(base).distances(sigma.as_array()[None, :])
    return int(mins[0])


def test_random_permutation_is_reproducible():
    assert random_permutation(np.random.default_rng(0), 1) == Permutation([0])
    # fixed across runs and platforms for numpy's PCG64 stream
    assert random_permutation(np.random.default_rng(12345), 8) == Permutation([4, 3, 0, 2, 1, 6, 7, 5])
    a = [random_permutation(np.random.default_rng(12345), 8) for _ in range(3)]
    b = [random_permutation(np.random.default_rng(12345), 8) for _ in range(3)]
    assert a == b


def test_random_permutation_is_uniform():
    rng = np.random.default_rng(2024)
    counts = Counter(random_permutation(rng, 4) for _ in range(10_000))
    assert len(counts) == 24
    expected = 10_000 / 24
    sigma = (10_000 * (1 / 24) * (23 / 24)) ** 0.5
    assert all(abs(c - expected) <= 5 * sigma for c in counts.values())


def test_base_too_weak():
    with pytest.raises(BaseTooWeak) as err:
        coset_search(materialize(GroupDescriptor.agl1(5)), SearchConfig(d=6, max_candidates=10, workers=1))
    assert err.value.group_hd == 4


def test_cyclic_4_cannot_grow():
    base = materialize(GroupDescriptor.cyclic(4))
    with pytest.raises(Exhausted) as err:
        coset_search(base, SearchConfig(d=4, seed=1, max_candidates=300, workers=1))
    assert err.value.tried == 300
    assert len(err.value.pa.reps) == 1


def _search_agl13(seed=7, **kwargs):
    base = materialize(GroupDescriptor.agl1(13))
    cfg = SearchConfig(d=7, seed=seed, max_candidates=5_000, max_cosets=4, workers=1, **kwargs)
    return base, cfg, coset_search(base, cfg)


def test_search_is_sound_and_reproducible():
    base, cfg, pa = _search_agl13()
    assert len(pa.reps) >= 2
    assert pa.size == len(pa.reps) * 156
    report = verify_search_output(pa)
    assert report.min_distance >= 7
    _, _, again = _search_agl13()
    assert serialize_pa(again) == serialize_pa(pa)


def test_tight_condition_holds_for_every_added_coset():
    base, _, pa = _search_agl13(seed=3)
    for k in range(1, len(pa.reps)):
        distances = [_coset_distance(base, pa.reps[k], pa.reps[i]) for i in range(k)]
        assert min(distances) >= 7
        assert 7 in distances


def test_loose_search_is_still_sound():
    _, _, pa = _search_agl13(seed=5, require_tight=False)
    assert verify_search_output(pa).min_distance >= 7


def test_resume_is_monotone(tmp_path):
    base, cfg, first = _search_agl13()
    checkpoint = tmp_path / "agl13.pa"
    resumed_cfg = cfg.model_copy(update={"max_cosets": len(first.reps) + 1, "checkpoint_path": checkpoint})
    resumed = coset_search(base, resumed_cfg, resume_from=first)
    assert resumed.reps[: len(first.reps)] == first.reps
    assert len(resumed.reps) == len(first.reps) + 1
    assert read_pa(checkpoint).reps == resumed.reps


def test_resume_continues_the_interrupted_streams(tmp_path):
    base = materialize(GroupDescriptor.agl1(13))
    cfg = SearchConfig(d=7, seed=7, max_candidates=5_000, max_cosets=3, workers=1)
    straight = coset_search(base, cfg)
    partial = coset_search(base, cfg.model_copy(update={"max_cosets": 2}))
    assert partial.search is not None
    path = tmp_path / "partial.pa"
    write_pa(partial, path)
    resumed = coset_search(base, cfg, resume_from=read_pa(path))
    assert resumed == straight
    assert serialize_pa(resumed) == serialize_pa(straight)
    assert resumed.search.tried > partial.search.tried


def test_resume_rejects_a_mismatched_search_state():
    base = materialize(GroupDescriptor.agl1(13))
    cfg = SearchConfig(d=7, seed=7, max_candidates=5_000, max_cosets=2, workers=1)
    partial = coset_search(base, cfg)
    with pytest.raises(MalformedPA):
        coset_search(base, cfg.model_copy(update={"workers": 2, "max_cosets": 3}), resume_from=partial)
    with pytest.raises(MalformedPA):
        coset_search(base, cfg.model_copy(update={"seed": 8, "max_cosets": 3}), resume_from=partial)


def test_checkpoint_progress_line(caplog):
    base = materialize(GroupDescriptor.agl1(13))
    cfg = SearchConfig(d=7, seed=1, max_candidates=1_000, max_cosets=2, workers=1, checkpoint_every=100)
    with caplog.at_level("INFO"):
        pa = coset_search(base, cfg)
    assert any(r.getMessage().startswith(f"cosets={len(pa.reps)} size={pa.size} tried=") for r in caplog.records)


@pytest.mark.slow
def test_parallel_search_is_deterministic():
    base = materialize(GroupDescriptor.agl1(13))
    cfg = SearchConfig(d=7, seed=9, max_candidates=5_000, max_cosets=4, workers=2)
    first, second = coset_search(base, cfg), coset_search(base, cfg)
    assert serialize_pa(first) == serialize_pa(second)
    verify_search_output(first)


def test_frobenius_cosets_of_gf8_give_agammal1():
    pa = frobenius_coset_pa(field_of_order(8))
    assert len(pa.reps) == 3
    assert pa.size == 168
    assert verify_search_output(pa, claimed=6).min_distance == 6


def test_frobenius_cosets_of_gf16():
    pa = frobenius_coset_pa(field_of_order(16))
    assert pa.size == 480
    assert verify_search_output(pa).min_distance >= 14


def test_tampered_pa_fails_with_witness():
    base = materialize(GroupDescriptor.agl1(8))
    pa = PermArray(base, [Permutation([1, 0, 2, 3, 4, 5, 6, 7])], d=6)
    with pytest.raises(ClaimFailed) as err:
        verify_search_output(pa)
    report = err.value.report
    assert report.min_distance == 2
    i, j = report.witness
    assert hamming(pa.element(i), pa.element(j)) == 2


def test_shipped_m20_16_claim_fails_at_14():
    pa = read_pa(get_settings().data_dir / "m20_16.pa")
    assert pa.size == 13_680
    with pytest.raises(ClaimFailed) as err:
        verify_search_output(pa)
    report = err.value.report
    assert err.value.claimed == 16
    assert (report.min_distance, report.witness, report.method) == (14, (2124, 6840), "coset-shortcut")
    assert hamming(pa.element(2124), pa.element(6840)) == 14
