"""
Metadata-only model of a log-structured volume.

The clock counts user-written blocks; GC rewrites never advance it. A block's
`last_user_write_time` is the clock value at the user write that created the
logical version and is carried unchanged through every GC rewrite.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from lsgc.core.exceptions import ClockOverflowError, SimulationError

MAX_CLOCK: int = (1 << 63) - 1


def advance_clock(clock: int) -> int:
    if clock >= MAX_CLOCK:
        raise ClockOverflowError()
    return clock + 1


@dataclass(slots=True, eq=False)
class BlockMeta:
    lba: int
    last_user_write_time: int
    valid: bool = True

    def age(self, now: int) -> int:
        return now - self.last_user_write_time


@dataclass(slots=True, eq=False)
class Segment:
    id: int
    class_id: int
    capacity_blocks: int
    creation_time: int | None = None
    seal_time: int | None = None
    blocks: list[BlockMeta] = field(default_factory=list)
    valid_count: int = 0

    @property
    def sealed(self) -> bool:
        return self.seal_time is not None

    @property
    def is_full(self) -> bool:
        return len(self.blocks) >= self.capacity_blocks

    @property
    def invalid_count(self) -> int:
        return len(self.blocks) - self.valid_count

    @property
    def garbage_proportion(self) -> float:
        return (self.capacity_blocks - self.valid_count) / self.capacity_blocks

    def append(self, block: BlockMeta, now: int) -> int:
        """Append `block` and return its slot."""
        if self.sealed or self.is_full:
            raise SimulationError(f"segment {self.id} is sealed")
        if self.creation_time is None:
            self.creation_time = now
        self.blocks.append(block)
        if block.valid:
            self.valid_count += 1
        return len(self.blocks) - 1

    def invalidate(self, slot: int) -> BlockMeta:
        block = self.blocks[slot]
        if not block.valid:
            raise SimulationError(f"block {slot} of segment {self.id} already invalid")
        block.valid = False
        self.valid_count -= 1
        return block

    def seal(self, now: int) -> None:
        if not self.is_full:
            raise SimulationError(f"segment {self.id} sealed before it is full")
        self.seal_time = now

    def valid_blocks(self) -> list[BlockMeta]:
        return [block for block in self.blocks if block.valid]


@dataclass(frozen=True)
class GcEvent:
    victim_segment_ids: tuple[int, ...]
    victim_gp: tuple[float, ...]
    victim_rewritten: tuple[int, ...]
    victim_reclaimed: tuple[int, ...]
    rewritten_blocks: int
    reclaimed_blocks: int
    at_time: int

    @property
    def total_blocks(self) -> int:
        return self.rewritten_blocks + self.reclaimed_blocks
