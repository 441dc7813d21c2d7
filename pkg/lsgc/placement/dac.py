"""
Dynamic data clustering by update temperature.

Each LBA carries a level; user writes promote it towards the hottest level and
GC writes demote it. The level is updated first and the block is placed at the
new level, so a first write lands at level 1.
"""

from __future__ import annotations

from lsgc.core.segments import BlockMeta, Segment
from lsgc.placement.base import WriteKind


def dac_classify(lba: int, kind: WriteKind, levels: dict[int, int], num_classes: int) -> int:
    level = levels.get(lba, 0)
    if kind == WriteKind.user:
        level = min(level + 1, num_classes - 1)
    else:
        level = max(level - 1, 0)
    levels[lba] = level
    return level


class DacPlacement:
    name = "dac"

    def __init__(self, num_classes: int = 6):
        self.num_classes = num_classes
        self.class_ids: tuple[int, ...] = tuple(range(num_classes))
        self.levels: dict[int, int] = {}

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        return dac_classify(lba, WriteKind.user, self.levels, self.num_classes)

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        return dac_classify(block.lba, WriteKind.gc, self.levels, self.num_classes)

    def notify_reclaim(self, victim: Segment, now: int) -> None:
        return None
