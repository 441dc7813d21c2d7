from __future__ import annotations

import math

import numpy as np
import pytest

from lsgc.core.exceptions import AnnotationMissingError, ConfigError
from lsgc.core.models import RecencyMode, SepBitOptions, VolumeConfig
from lsgc.core.segments import BlockMeta, Segment
from lsgc.core.units import BLOCK_SIZE
from lsgc.placement.base import WriteKind
from lsgc.placement.baselines import NoSepPlacement, SepGcPlacement, nosep_classify, sepgc_classify
from lsgc.placement.dac import DacPlacement, dac_classify
from lsgc.placement.future_knowledge import FutureKnowledgePlacement, fk_assign
from lsgc.placement.ideal import IdealPlacement, ideal_assign, invalidation_orders
from lsgc.placement.registry import SchemeContext, SchemeRegistry
from lsgc.placement.sepbit import (
    GcWritePlacement,
    SepBitPlacement,
    UserWritePlacement,
    age_multipliers,
    sepbit_gc_class,
    sepbit_user_class,
)


def _victim(class_id: int, lifespan: int, now: int) -> Segment:
    return Segment(id=0, class_id=class_id, capacity_blocks=1, creation_time=now - lifespan, seal_time=now)


def _block(last_user_write_time: int) -> BlockMeta:
    return BlockMeta(lba=1, last_user_write_time=last_user_write_time)


def test_nosep_and_sepgc():
    assert nosep_classify(WriteKind.user) == 0
    assert nosep_classify(WriteKind.gc) == 0
    assert sepgc_classify(WriteKind.user) == 0
    assert sepgc_classify(WriteKind.gc) == 1

    sepgc = SepGcPlacement()
    assert sepgc.on_user_write(3, None, 0) == 0
    assert sepgc.on_gc_write(_block(0), origin_class=1, now=5) == 1
    assert NoSepPlacement().on_gc_write(_block(0), origin_class=0, now=5) == 0


def test_sepbit_user_class():
    assert sepbit_user_class(123456, math.inf) == 1
    assert sepbit_user_class(None, math.inf) == 2
    assert sepbit_user_class(1500, 1000) == 2
    assert sepbit_user_class(999, 1000) == 1


def test_sepbit_gc_class():
    thresholds = [4000.0, 16000.0]
    assert sepbit_gc_class(_block(0), origin_class=1, now=10**6, thresholds=thresholds) == 3
    assert sepbit_gc_class(_block(0), origin_class=4, now=2000, thresholds=thresholds) == 4
    assert sepbit_gc_class(_block(0), origin_class=2, now=4000, thresholds=thresholds) == 5
    assert sepbit_gc_class(_block(0), origin_class=2, now=20000, thresholds=thresholds) == 6


def test_sepbit_gc_class_is_monotone_in_age():
    thresholds = [4000.0, 16000.0]
    classes = [sepbit_gc_class(_block(0), 2, now, thresholds) for now in range(0, 40000, 250)]
    assert classes == sorted(classes)


def test_ell_updates_after_full_window():
    placement = SepBitPlacement(index=RecencyMode.exact)
    for _ in range(15):
        placement.notify_reclaim(_victim(1, 1000, now=5000), now=5000)
    assert math.isinf(placement.ell)

    placement.notify_reclaim(_victim(1, 1000, now=5000), now=5000)
    assert placement.ell == 1000
    assert placement.age_thresholds() == [4000.0, 16000.0]


def test_ell_is_window_mean():
    placement = SepBitPlacement(index=RecencyMode.exact)
    for lifespan in range(1, 17):
        placement.notify_reclaim(_victim(1, lifespan, now=100), now=100)
    assert placement.ell == 8.5


def test_non_class1_victims_leave_ell_alone():
    placement = SepBitPlacement(index=RecencyMode.exact)
    for _ in range(32):
        placement.notify_reclaim(_victim(4, 1000, now=5000), now=5000)
    assert math.isinf(placement.ell)


def test_sepbit_placement_end_to_end_classes():
    placement = SepBitPlacement()
    assert placement.on_user_write(5, None, 0) == 2
    # cold start: any update is short-lived
    assert placement.on_user_write(5, 1, 1) == 1
    assert placement.class_ids == (1, 2, 3, 4, 5, 6)


def test_ell_update_retargets_index_and_samples_memory():
    placement = SepBitPlacement()
    for now in range(100):
        placement.on_user_write(now % 7, None, now)
    for _ in range(16):
        placement.notify_reclaim(_victim(1, 10, now=100), now=100)

    assert placement.index.target_capacity == 10
    assert len(placement.memory_samples) == 1
    sample = placement.memory_samples[0]
    assert sample.clock == 100
    assert sample.unique_lbas == 7
    assert sample.memory_bytes == 56


@pytest.mark.parametrize(
    "thresholds, classes, expected",
    [
        ("default", 3, [4.0, 16.0]),
        ("method1", 3, [4.0, 16.0]),
        ("method1", 5, [16 ** 0.25, 4.0, 16 ** 0.75, 16.0]),
        ("method2", 4, [4.0, 16.0, 64.0]),
        ("2,8,32", 4, [2.0, 8.0, 32.0]),
        ("default", 1, []),
    ],
)
def test_age_multipliers(thresholds, classes, expected):
    assert age_multipliers(thresholds, classes) == pytest.approx(expected)


def test_age_multipliers_reject_bad_lists():
    with pytest.raises(ConfigError):
        age_multipliers("8,2", 3)
    with pytest.raises(ConfigError):
        age_multipliers("2,8,32", 3)
    with pytest.raises(ConfigError):
        age_multipliers("sometimes", 3)
    with pytest.raises(ConfigError):
        SepBitPlacement(num_classes=3)


def test_half_and_double_scale_ell():
    half = SepBitPlacement(thresholds="half", index=RecencyMode.exact)
    double = SepBitPlacement(thresholds="double", index=RecencyMode.exact)
    for placement in (half, double):
        for _ in range(16):
            placement.notify_reclaim(_victim(1, 1000, now=5000), now=5000)

    assert half.user_threshold == 500
    assert half.age_thresholds() == [2000.0, 8000.0]
    assert double.user_threshold == 2000
    assert double.on_user_write(1, 1500, 0) == 1
    assert half.on_user_write(1, 600, 0) == 2


def test_gw_thresholds_follow_class3_and_class4_lifespans():
    placement = SepBitPlacement(thresholds="gw", index=RecencyMode.exact)
    for _ in range(16):
        placement.notify_reclaim(_victim(1, 1000, now=90000), now=90000)
    assert placement.age_thresholds() == [4000.0, 16000.0]

    for _ in range(16):
        placement.notify_reclaim(_victim(3, 3000, now=90000), now=90000)
        placement.notify_reclaim(_victim(4, 7000, now=90000), now=90000)
    assert placement.age_thresholds() == [3000, 10000]


def test_more_classes_extend_gc_classes():
    placement = SepBitPlacement(num_classes=8, thresholds="method2", index=RecencyMode.exact)
    for _ in range(16):
        placement.notify_reclaim(_victim(1, 10, now=100), now=100)
    assert placement.class_ids == tuple(range(1, 9))
    assert placement.on_gc_write(_block(0), origin_class=2, now=10**6) == 8


def test_uw_and_gw():
    uw = UserWritePlacement()
    assert uw.class_ids == (1, 2, 3)
    assert uw.on_user_write(1, None, 0) == 2
    assert uw.on_gc_write(_block(0), origin_class=1, now=50) == 3
    assert uw.on_gc_write(_block(0), origin_class=2, now=50) == 3

    gw = GcWritePlacement()
    assert gw.class_ids == (1, 2, 3, 4)
    assert gw.on_user_write(1, 5, 10) == 1
    for _ in range(16):
        gw.notify_reclaim(_victim(1, 1000, now=10000), now=10000)
    assert gw.ell == 1000
    assert gw.on_gc_write(_block(0), origin_class=1, now=100) == 2
    assert gw.on_gc_write(_block(0), origin_class=1, now=5000) == 3
    assert gw.on_gc_write(_block(0), origin_class=3, now=20000) == 4


def test_dac_levels():
    levels: dict[int, int] = {}
    assert dac_classify(7, WriteKind.user, levels, 6) == 1
    for _ in range(10):
        dac_classify(7, WriteKind.user, levels, 6)
    assert levels[7] == 5
    assert dac_classify(8, WriteKind.gc, levels, 6) == 0

    placement = DacPlacement(num_classes=6)
    for now in range(3):
        placement.on_user_write(1, None, now)
    assert placement.on_gc_write(BlockMeta(lba=1, last_user_write_time=0), origin_class=3, now=3) == 2
    assert all(0 <= level < 6 for level in placement.levels.values())


def test_fk_assign():
    s = 512 * 1024 * 1024
    assert fk_assign(s // 2, s, 6) == 1
    assert fk_assign(3 * s, s, 6) == 3
    assert fk_assign(10 * s, s, 6) == 6
    assert fk_assign(None, s, 6) == 6


def test_fk_uses_residual_lifespan_for_gc_writes():
    # write 0 is invalidated at index 0 + 20; write 1 never
    lifespans = np.array([20, -1] + [-1] * 30, dtype=np.int64)
    placement = FutureKnowledgePlacement(lifespans, segment_blocks=4, num_classes=6)

    assert placement.on_user_write(9, None, 0) == 5
    assert placement.on_user_write(10, None, 1) == 6
    # residual 20 - 12 = 8 blocks -> second segment-sized class
    assert placement.on_gc_write(BlockMeta(lba=9, last_user_write_time=0), origin_class=5, now=12) == 2

    with pytest.raises(AnnotationMissingError):
        placement.on_user_write(1, None, 99)


def test_ideal_assign():
    assert ideal_assign(2, 2) == 1
    assert ideal_assign(3, 2) == 2
    assert ideal_assign(5, 2) == 3


def test_invalidation_orders_rank_by_invalidation_time():
    # stream A B C A C B: A0 dies at 3, C2 at 4, B1 at 5
    lifespans = np.array([3, 4, 2, -1, -1, -1], dtype=np.int64)
    assert invalidation_orders(lifespans).tolist() == [1, 3, 2, 0, 0, 0]

    placement = IdealPlacement(lifespans, segment_blocks=2)
    assert placement.class_ids is None
    assert [placement.on_user_write(0, None, now) for now in range(6)] == [1, 2, 1, 0, 0, 0]


def test_registry_builds_every_scheme():
    registry = SchemeRegistry()
    context = SchemeContext(
        volume=VolumeConfig(segment_size=8 * BLOCK_SIZE),
        sepbit=SepBitOptions(),
        lifespans=np.array([1, -1], dtype=np.int64),
    )
    for scheme in registry.list_schemes():
        assert registry.create(scheme, context).name == scheme

    assert registry.needs_annotation("fk")
    assert not registry.needs_annotation("sepbit")
    with pytest.raises(ConfigError):
        registry.get_entry("warcip")
    with pytest.raises(AnnotationMissingError):
        registry.create("ideal", SchemeContext())
