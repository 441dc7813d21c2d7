from __future__ import annotations

from lsgc.core.models import VolumeConfig
from lsgc.core.segments import Segment
from lsgc.engine.selection import SelectionPolicy
from lsgc.engine.volume import VolumeSim
from lsgc.placement.ideal import OVERFLOW_GROUP, IdealPlacement


class IdealVolumeSim(VolumeSim):
    """
    Ideal placement mode: GC runs whenever the sealed segments hold at least one
    segment's worth of invalid blocks, always greedily. Sealed overflow segments
    (never-invalidated writes) are parked outside the GC pool.
    """

    def __init__(
        self,
        config: VolumeConfig,
        placement: IdealPlacement,
        lba_space: int | None = None,
        keep_gc_log: bool = True,
    ):
        # one segment per GC operation
        config = config.model_copy(update={"gc_retrieval_bytes": config.segment_size})
        super().__init__(
            config,
            placement,
            selector=SelectionPolicy(),
            lba_space=lba_space,
            keep_gc_log=keep_gc_log,
        )
        self.overflow_segments: list[Segment] = []

    def _on_seal(self, segment: Segment) -> None:
        if segment.class_id == OVERFLOW_GROUP:
            self.overflow_segments.append(segment)
            return
        super()._on_seal(segment)

    def _should_collect(self) -> bool:
        return self.sealed_blocks - self.sealed_valid >= self.config.segment_blocks
