"""
Per-volume log-structured state machine.

User writes invalidate the previous version of their LBA and are appended to
the open segment of the class chosen by the placement scheme. Full segments
are sealed; once the garbage proportion of the sealed segments reaches the
threshold, GC reclaims victims and rewrites their valid blocks through the
placement scheme again.
"""

from __future__ import annotations

from collections.abc import Iterable

from lsgc.core.exceptions import (
    EmptyWorkloadError,
    LbaOutOfRangeError,
    SelectionError,
    SimulationError,
)
from lsgc.core.models import VolumeConfig
from lsgc.core.segments import BlockMeta, GcEvent, Segment, advance_clock
from lsgc.engine.selection import SelectionPolicy
from lsgc.placement.base import PlacementScheme
from lsgc.utils.loggable import Loggable


class VolumeSim(Loggable):
    def __init__(
        self,
        config: VolumeConfig,
        placement: PlacementScheme,
        selector: SelectionPolicy | None = None,
        lba_space: int | None = None,
        keep_gc_log: bool = True,
    ):
        self.config = config
        self.placement = placement
        self.selector = selector or SelectionPolicy()
        self.lba_space = lba_space
        self.keep_gc_log = keep_gc_log
        self._allowed_classes = (
            None if placement.class_ids is None else frozenset(placement.class_ids)
        )

        self.clock: int = 0
        self.open_segments: dict[int, Segment] = {}
        self.sealed_segments: dict[int, Segment] = {}
        self.lba_index: dict[int, tuple[Segment, int]] = {}
        self._next_segment_id: int = 0

        # running totals over sealed segments
        self.sealed_blocks: int = 0
        self.sealed_valid: int = 0

        self.user_blocks_written: int = 0
        self.gc_blocks_written: int = 0
        self.gc_op_count: int = 0
        self.gc_log: list[GcEvent] = []

    def garbage_proportion(self) -> float:
        if self.sealed_blocks == 0:
            return 0.0
        return (self.sealed_blocks - self.sealed_valid) / self.sealed_blocks

    def write_amplification(self) -> float:
        if self.user_blocks_written == 0:
            raise EmptyWorkloadError("write amplification undefined without user writes")
        return (self.user_blocks_written + self.gc_blocks_written) / self.user_blocks_written

    def user_write(self, lba: int) -> None:
        if self.lba_space is not None and not 0 <= lba < self.lba_space:
            raise LbaOutOfRangeError(lba, self.lba_space)
        now = self.clock
        v: int | None = None
        current = self.lba_index.get(lba)
        if current is not None:
            segment, slot = current
            old = self._invalidate(segment, slot)
            v = old.age(now)

        class_id = self._checked(self.placement.on_user_write(lba, v, now))
        self._append(BlockMeta(lba=lba, last_user_write_time=now), class_id)

        self.clock = advance_clock(self.clock)
        self.user_blocks_written += 1
        self.maybe_gc()

    def replay(self, lbas: Iterable[int]) -> None:
        for lba in lbas:
            self.user_write(int(lba))

    def _checked(self, class_id: int) -> int:
        if self._allowed_classes is not None and class_id not in self._allowed_classes:
            raise SimulationError(
                f"{self.placement.name} returned undeclared class {class_id}",
                code="BAD_CLASS",
            )
        return class_id

    def _invalidate(self, segment: Segment, slot: int) -> BlockMeta:
        block = segment.invalidate(slot)
        if segment.sealed:
            self.sealed_valid -= 1
        return block

    def _append(self, block: BlockMeta, class_id: int) -> None:
        segment = self.open_segments.get(class_id)
        if segment is None:
            segment = Segment(
                id=self._next_segment_id,
                class_id=class_id,
                capacity_blocks=self.config.segment_blocks,
            )
            self._next_segment_id += 1
            self.open_segments[class_id] = segment
        slot = segment.append(block, self.clock)
        self.lba_index[block.lba] = (segment, slot)
        if segment.is_full:
            segment.seal(self.clock)
            del self.open_segments[class_id]
            self._on_seal(segment)

    def _on_seal(self, segment: Segment) -> None:
        self.sealed_segments[segment.id] = segment
        self.sealed_blocks += segment.capacity_blocks
        self.sealed_valid += segment.valid_count

    def _gc_candidates(self) -> list[Segment]:
        return list(self.sealed_segments.values())

    def _should_collect(self) -> bool:
        return (
            self.sealed_valid < self.sealed_blocks
            and self.garbage_proportion() >= self.config.gp_threshold
        )

    def maybe_gc(self) -> int:
        ops = 0
        while self._should_collect():
            event = self.garbage_collect_once()
            ops += 1
            if event.reclaimed_blocks == 0:
                self.logger.warning(
                    f"GC at t={self.clock} reclaimed no invalid blocks; ending GC loop"
                )
                break
        return ops

    def _select_victims(self) -> list[Segment]:
        victims: list[Segment] = []
        collected = 0
        while collected < self.config.retrieval_blocks:
            candidates = self._gc_candidates()
            if not candidates:
                break
            victim = self.sealed_segments.pop(self.selector.select(candidates, self.clock))
            self.sealed_blocks -= victim.capacity_blocks
            self.sealed_valid -= victim.valid_count
            victims.append(victim)
            collected += victim.capacity_blocks
        return victims

    def garbage_collect_once(self) -> GcEvent:
        if not self._gc_candidates():
            raise SelectionError()
        victims = self._select_victims()
        now = self.clock
        rewritten_per_victim: list[int] = []
        for victim in victims:
            self.placement.notify_reclaim(victim, now)
            rewritten = 0
            for block in victim.valid_blocks():
                class_id = self._checked(
                    self.placement.on_gc_write(block, victim.class_id, now)
                )
                self._append(
                    BlockMeta(lba=block.lba, last_user_write_time=block.last_user_write_time),
                    class_id,
                )
                rewritten += 1
            self.gc_blocks_written += rewritten
            rewritten_per_victim.append(rewritten)

        event = GcEvent(
            victim_segment_ids=tuple(victim.id for victim in victims),
            victim_gp=tuple(victim.garbage_proportion for victim in victims),
            victim_rewritten=tuple(rewritten_per_victim),
            victim_reclaimed=tuple(victim.invalid_count for victim in victims),
            rewritten_blocks=sum(rewritten_per_victim),
            reclaimed_blocks=sum(victim.invalid_count for victim in victims),
            at_time=now,
        )
        self.gc_op_count += 1
        if self.keep_gc_log:
            self.gc_log.append(event)
        self.logger.debug(
            f"GC t={now} victims={event.victim_segment_ids} "
            f"rewritten={event.rewritten_blocks} reclaimed={event.reclaimed_blocks}"
        )
        return event
