"""
Ideal placement with unbounded open segments.

Every write is ranked by when it will be invalidated; the write with rank o
goes to group ceil(o / s). Each group then fills exactly one segment whose
blocks all die together. Writes that are never invalidated go to the overflow
group 0, which GC never collects.
"""

from __future__ import annotations

import numpy as np

from lsgc.core.exceptions import AnnotationMissingError
from lsgc.core.segments import BlockMeta, Segment

OVERFLOW_GROUP: int = 0


def ideal_assign(o: int | np.ndarray, s: int) -> int | np.ndarray:
    """Group ceil(o / s); works elementwise on order arrays."""
    return -(-o // s)


def invalidation_orders(lifespans: np.ndarray) -> np.ndarray:
    """1-based invalidation rank of every write; 0 for never-invalidated writes."""
    n = len(lifespans)
    invalidated = lifespans >= 0
    invalidated_at = np.flatnonzero(invalidated) + lifespans[invalidated]
    is_invalidation = np.zeros(n + 1, dtype=np.int64)
    is_invalidation[invalidated_at] = 1
    order_at = np.cumsum(is_invalidation)
    orders = np.zeros(n, dtype=np.int64)
    orders[invalidated] = order_at[invalidated_at]
    return orders


class IdealPlacement:
    name = "ideal"
    class_ids: tuple[int, ...] | None = None

    def __init__(self, lifespans: np.ndarray, segment_blocks: int):
        self.segment_blocks = segment_blocks
        orders = invalidation_orders(lifespans)
        self.groups = np.where(
            orders > 0, ideal_assign(orders, segment_blocks), OVERFLOW_GROUP
        ).astype(np.int64)

    def _group(self, write_index: int) -> int:
        if not 0 <= write_index < len(self.groups):
            raise AnnotationMissingError(
                f"write {write_index} outside annotation of {len(self.groups)} writes"
            )
        return int(self.groups[write_index])

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        return self._group(now)

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        return self._group(block.last_user_write_time)

    def notify_reclaim(self, victim: Segment, now: int) -> None:
        return None
