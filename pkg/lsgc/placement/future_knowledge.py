"""
Future-knowledge oracle placement.

Needs the lifespan of every user write of the volume in advance. A block goes
to class ceil(t / s), where t is the number of bytes still to be written before
it is invalidated and s the segment size; anything beyond the last class, and
anything never invalidated, shares the last class.
"""

from __future__ import annotations

import math

import numpy as np

from lsgc.core.exceptions import AnnotationMissingError
from lsgc.core.segments import BlockMeta, Segment
from lsgc.core.units import BLOCK_SIZE

NEVER: int = -1


def fk_assign(bit_bytes: int | None, segment_bytes: int, k: int) -> int:
    if bit_bytes is None:
        return k
    return min(max(1, math.ceil(bit_bytes / segment_bytes)), k)


class FutureKnowledgePlacement:
    name = "fk"

    def __init__(self, lifespans: np.ndarray, segment_blocks: int, num_classes: int = 6):
        self.lifespans = lifespans
        self.segment_bytes = segment_blocks * BLOCK_SIZE
        self.num_classes = num_classes
        self.class_ids: tuple[int, ...] = tuple(range(1, num_classes + 1))

    def _invalidation_time(self, write_index: int) -> int | None:
        if not 0 <= write_index < len(self.lifespans):
            raise AnnotationMissingError(
                f"write {write_index} outside annotation of {len(self.lifespans)} writes"
            )
        lifespan = int(self.lifespans[write_index])
        return None if lifespan == NEVER else write_index + lifespan

    def _assign(self, write_index: int, now: int) -> int:
        invalidated_at = self._invalidation_time(write_index)
        if invalidated_at is None:
            return self.num_classes
        return fk_assign((invalidated_at - now) * BLOCK_SIZE, self.segment_bytes, self.num_classes)

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        return self._assign(now, now)

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        # residual bytes until invalidation
        return self._assign(block.last_user_write_time, now)

    def notify_reclaim(self, victim: Segment, now: int) -> None:
        return None
