"""
FIFO recency index for SepBIT user writes.

Instead of remembering the last write time of every LBA, the index keeps a FIFO
of the most recent user-written LBAs together with the absolute insertion
position of each LBA's newest entry. The queue length follows the current
Class-1 lifespan estimate, so only LBAs written within roughly the last `ell`
user writes are tracked.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from lsgc.utils.loggable import Loggable

# Bytes per tracked LBA in the memory estimate (one 64-bit LBA)
BYTES_PER_ENTRY: int = 8


@dataclass(frozen=True)
class MemorySample:
    clock: int
    unique_lbas: int
    queue_length: int

    @property
    def memory_bytes(self) -> int:
        return self.unique_lbas * BYTES_PER_ENTRY


class RecencyIndex(Loggable):
    def __init__(self, target_capacity: float = math.inf):
        self._fifo: deque[tuple[int, int]] = deque()
        self.positions: dict[int, int] = {}
        self.inserted_total: int = 0
        self.dequeued_total: int = 0
        self.target_capacity: float = target_capacity

    def __len__(self) -> int:
        return len(self._fifo)

    def record_write(self, lba: int) -> None:
        """
        Enqueue `lba`. A queue above its target drops one entry per insert when
        steady and two while shrinking; a queue below its target only grows.
        """
        position = self.inserted_total
        self._fifo.append((lba, position))
        self.positions[lba] = position
        self.inserted_total += 1

        excess = len(self._fifo) - self.target_capacity
        if excess <= 0:
            return
        for _ in range(min(2, math.ceil(excess))):
            old_lba, old_position = self._fifo.popleft()
            self.dequeued_total += 1
            # a newer entry of the same LBA is still queued
            if self.positions.get(old_lba) == old_position:
                del self.positions[old_lba]

    def is_recent(self, lba: int, ell: float) -> bool:
        """True iff `lba` was last written at most `ell` inserts ago."""
        position = self.positions.get(lba)
        if position is None:
            return False
        return self.inserted_total - position <= ell

    def unique_lba_count(self) -> int:
        return len(self.positions)

    def retarget(self, target_capacity: float) -> None:
        self.logger.debug(
            f"retarget {self.target_capacity} -> {target_capacity} (queue {len(self._fifo)})"
        )
        self.target_capacity = target_capacity

    def covers(self, window: float) -> bool:
        """Whether every LBA written within the last `window` inserts is still queued."""
        if self.dequeued_total == 0:
            return True
        return len(self._fifo) >= window

    def sample(self, clock: int) -> MemorySample:
        return MemorySample(
            clock=clock,
            unique_lbas=self.unique_lba_count(),
            queue_length=len(self._fifo),
        )
