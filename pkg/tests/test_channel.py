"""Loss pattern admissibility and enumeration, cross-checked against a
brute-force filter over all subsets."""

import itertools

import pytest

from streamfec.channel import (
    all_patterns,
    apply_pattern,
    enumerate_patterns,
    erased_runs,
    is_admissible,
    single_burst_patterns,
)
from streamfec.model import make_params


def brute_force_admissible(erased, p):
    """Definition transliterated: every w-window holds at most one run <= b."""
    er = set(erased)
    for start in range(0, p.t + 1):
        window = [x for x in range(start, start + p.w) if x in er]
        if not window:
            continue
        if len(window) > p.b:
            return False
        if window[-1] - window[0] + 1 != len(window):
            return False
    return True


def test_empty_pattern_admissible():
    p = make_params(4, 2, m=1, t=8)
    assert is_admissible((), p)


def test_single_bursts_admissible_anywhere():
    p = make_params(4, 2, m=1, t=8)
    for start in range(8):
        assert is_admissible((start, start + 1), p)
        assert is_admissible((start,), p)


def test_two_close_bursts_rejected():
    p = make_params(4, 2, m=1, t=10)  # w = 5
    assert not is_admissible((0, 1, 4), p)  # second run starts w-1 after first ends
    assert is_admissible((0, 1, 6), p)  # gap of w


def test_run_longer_than_b_rejected():
    p = make_params(4, 2, m=1, t=8)
    assert not is_admissible((3, 4, 5), p)


def test_single_burst_counts():
    # 5 patterns: empty + one per slot
    p = make_params(3, 1, m=1, t=3)
    assert sum(1 for _ in single_burst_patterns(p)) == 5
    # 6 patterns: empty + three length-1 + two length-2
    p = make_params(2, 2, m=1, t=2)
    pats = list(single_burst_patterns(p))
    assert len(pats) == 6
    assert pats[0] == ()


def test_single_bursts_all_admissible_and_subset_of_full():
    p = make_params(3, 2, m=1, t=7)
    singles = set(single_burst_patterns(p))
    for pat in singles:
        assert is_admissible(pat, p)
    assert singles <= set(all_patterns(p))


@pytest.mark.parametrize("tau,b,t", [(2, 1, 9), (3, 2, 9), (4, 3, 9), (2, 2, 13)])
def test_full_enumeration_matches_brute_force(tau, b, t):
    p = make_params(tau, b, m=1, t=t)
    want = set()
    for size in range(t + 2):
        for cand in itertools.combinations(range(t + 1), size):
            if brute_force_admissible(cand, p):
                want.add(cand)
    got = list(all_patterns(p))
    assert len(got) == len(set(got)), "duplicates emitted"
    assert set(got) == want


def test_full_enumeration_lexicographic():
    p = make_params(2, 1, m=1, t=4)
    got = list(all_patterns(p))
    assert got == sorted(got)
    assert got[0] == ()


def test_enumeration_cap():
    p = make_params(4, 2, m=1, t=30)
    with pytest.raises(ValueError):
        list(all_patterns(p))


def test_enumerate_patterns_dispatch():
    p = make_params(3, 1, m=1, t=3)
    assert list(enumerate_patterns(p, "single")) == list(single_burst_patterns(p))
    with pytest.raises(ValueError):
        enumerate_patterns(p, "everything")


def test_apply_pattern():
    packets = [[1], [2], [3], [4]]
    assert apply_pattern((), packets) == packets
    out = apply_pattern((0, 1), packets)
    assert out == [None, None, [3], [4]]
    survivors = sum(1 for x in out if x is not None)
    assert survivors == len(packets) - 2


def test_erased_runs():
    assert erased_runs(()) == []
    assert erased_runs((0, 1, 2, 5, 7, 8)) == [(0, 2), (5, 5), (7, 8)]
