from __future__ import annotations

import numpy as np

from lsgc.core.units import BLOCK_SIZE, GIB
from lsgc.workload.volumes import VolumeStats, compute_volume_stats, filter_volumes


def test_compute_volume_stats():
    stats = compute_volume_stats("v", np.array([4, 4, 4, 9, 2, 9]))

    assert stats.wss_blocks == 3
    assert stats.traffic_blocks == 6
    assert stats.update_wss_blocks == 2
    assert stats.update_traffic_blocks == 3
    assert stats.wss_bytes == 3 * BLOCK_SIZE


def _stats(volume_id: str, wss_gib: float, traffic_gib: float) -> VolumeStats:
    blocks_per_gib = GIB // BLOCK_SIZE
    return VolumeStats(
        volume_id=volume_id,
        wss_blocks=int(wss_gib * blocks_per_gib),
        traffic_blocks=int(traffic_gib * blocks_per_gib),
        update_wss_blocks=0,
        update_traffic_blocks=0,
    )


def test_filter_volumes_uses_strict_bounds():
    stats = [
        _stats("big", 20, 60),
        _stats("small", 5, 50),
        _stats("exact-wss", 10, 30),
        _stats("cold", 20, 40),
        _stats("warm", 20, 41),
    ]
    assert filter_volumes(stats) == ["big", "warm"]
    assert filter_volumes(stats, wss_min_bytes=4 * GIB, traffic_multiple=1.0) == ["big", "small", "exact-wss", "cold", "warm"]
