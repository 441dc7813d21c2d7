from __future__ import annotations

import math
import random

import pytest

from lsgc.core.exceptions import SelectionError
from lsgc.core.segments import BlockMeta, Segment
from lsgc.engine.selection import (
    SelectionPolicy,
    cost_benefit_score,
    cost_benefit_select,
    greedy_select,
)


def _sealed(segment_id: int, invalid: int, capacity: int = 10, seal_time: int = 0) -> Segment:
    segment = Segment(id=segment_id, class_id=0, capacity_blocks=capacity)
    for slot in range(capacity):
        segment.append(BlockMeta(lba=slot, last_user_write_time=0), now=0)
    for slot in range(invalid):
        segment.invalidate(slot)
    segment.seal(seal_time)
    return segment


def test_greedy_picks_highest_gp():
    pool = [_sealed(0, 2), _sealed(1, 5), _sealed(2, 3)]
    assert greedy_select(pool) == 1


def test_greedy_ties_go_to_smallest_id_regardless_of_order():
    pool = [_sealed(7, 4), _sealed(3, 4), _sealed(5, 1)]
    assert greedy_select(pool) == 3
    assert greedy_select(list(reversed(pool))) == 3


def test_greedy_matches_exhaustive_argmax():
    rng = random.Random(11)
    pool = [_sealed(segment_id, rng.randrange(11)) for segment_id in rng.sample(range(1000), 64)]
    best_gp = max(segment.garbage_proportion for segment in pool)
    expected = min(segment.id for segment in pool if segment.garbage_proportion == best_gp)
    assert greedy_select(pool) == expected
    shuffled = pool[:]
    rng.shuffle(shuffled)
    assert greedy_select(shuffled) == expected


def test_cost_benefit_scores():
    assert cost_benefit_score(_sealed(0, 5), now=10) == pytest.approx(10.0)
    assert cost_benefit_score(_sealed(0, 0), now=99) == 0
    assert math.isinf(cost_benefit_score(_sealed(0, 10), now=0))


def test_cost_benefit_prefers_old_moderately_garbage_segments():
    young = _sealed(0, 6, seal_time=25)
    old = _sealed(1, 3, seal_time=0)
    assert cost_benefit_score(young, now=30) == pytest.approx(7.5)
    assert cost_benefit_score(old, now=30) == pytest.approx(90 / 7)
    assert cost_benefit_select([young, old], now=30) == 1


def test_cost_benefit_with_equal_ages_matches_greedy():
    rng = random.Random(5)
    pool = [_sealed(segment_id, rng.randrange(10)) for segment_id in range(32)]
    assert cost_benefit_select(pool, now=50) == greedy_select(pool)


def test_fully_invalid_segment_wins_cost_benefit():
    pool = [_sealed(0, 9, seal_time=0), _sealed(1, 10, seal_time=99)]
    assert cost_benefit_select(pool, now=100) == 1


def test_empty_pool_raises():
    with pytest.raises(SelectionError):
        greedy_select([])
    with pytest.raises(SelectionError):
        cost_benefit_select([], now=0)


def test_policy_dispatch():
    pool = [_sealed(0, 6, seal_time=25), _sealed(1, 3, seal_time=0)]
    assert SelectionPolicy("greedy").select(pool, now=30) == 0
    assert SelectionPolicy("cost-benefit").select(pool, now=30) == 1


def test_cost_benefit_zero_scores_fall_back_to_gp():
    # sealed at `now`, so every score is 0
    pool = [_sealed(0, 0, seal_time=40), _sealed(1, 4, seal_time=40), _sealed(2, 2, seal_time=40)]
    assert cost_benefit_select(pool, now=40) == 1
