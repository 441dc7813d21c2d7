from __future__ import annotations

from collections.abc import Iterable

import numpy as np
from pydantic import BaseModel

from lsgc.core.units import BLOCK_SIZE, GIB


class VolumeStats(BaseModel):
    volume_id: str
    wss_blocks: int
    traffic_blocks: int
    update_wss_blocks: int
    update_traffic_blocks: int

    @property
    def wss_bytes(self) -> int:
        return self.wss_blocks * BLOCK_SIZE

    @property
    def traffic_bytes(self) -> int:
        return self.traffic_blocks * BLOCK_SIZE


def compute_volume_stats(volume_id: str, lbas: np.ndarray) -> VolumeStats:
    _, counts = np.unique(np.asarray(lbas, dtype=np.int64), return_counts=True)
    updated = counts > 1
    return VolumeStats(
        volume_id=volume_id,
        wss_blocks=int(counts.size),
        traffic_blocks=int(counts.sum()),
        update_wss_blocks=int(updated.sum()),
        update_traffic_blocks=int((counts[updated] - 1).sum()),
    )


def filter_volumes(
    stats: Iterable[VolumeStats],
    wss_min_bytes: int = 10 * GIB,
    traffic_multiple: float = 2.0,
) -> list[str]:
    """Volumes whose write WSS exceeds `wss_min_bytes` and whose traffic exceeds `traffic_multiple` x WSS."""
    return [
        item.volume_id
        for item in stats
        if item.wss_bytes > wss_min_bytes
        and item.traffic_bytes > traffic_multiple * item.wss_bytes
    ]
