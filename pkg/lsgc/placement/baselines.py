"""Placement baselines that ignore block lifespans."""

from __future__ import annotations

from lsgc.core.segments import BlockMeta, Segment
from lsgc.placement.base import WriteKind


def nosep_classify(kind: WriteKind | None = None) -> int:
    return 0


def sepgc_classify(kind: WriteKind) -> int:
    return 0 if kind == WriteKind.user else 1


class NoSepPlacement:
    """All written blocks share one open segment."""

    name = "nosep"
    class_ids: tuple[int, ...] = (0,)

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        return nosep_classify(WriteKind.user)

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        return nosep_classify(WriteKind.gc)

    def notify_reclaim(self, victim: Segment, now: int) -> None:
        return None


class SepGcPlacement:
    """User-written blocks in class 0, GC-rewritten blocks in class 1."""

    name = "sepgc"
    class_ids: tuple[int, ...] = (0, 1)

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        return sepgc_classify(WriteKind.user)

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        return sepgc_classify(WriteKind.gc)

    def notify_reclaim(self, victim: Segment, now: int) -> None:
        return None
