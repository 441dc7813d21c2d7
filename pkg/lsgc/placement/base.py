from __future__ import annotations

from enum import StrEnum
from typing import Protocol

from lsgc.core.segments import BlockMeta, Segment


class WriteKind(StrEnum):
    user = "user"
    gc = "gc"


class PlacementScheme(Protocol):
    """
    Decides the class (open segment) of every written block.

    `class_ids` lists every label the scheme may return; `None` means the
    scheme opens segments on demand (ideal placement).
    """

    name: str
    class_ids: tuple[int, ...] | None

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        """`v` is the lifespan of the invalidated old version, `None` for a new LBA."""
        ...

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int: ...

    def notify_reclaim(self, victim: Segment, now: int) -> None: ...
