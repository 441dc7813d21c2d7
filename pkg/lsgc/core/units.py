"""
Unit conversions.

Every lifespan, age and threshold in the simulator is counted in user-written
4 KiB blocks; bytes only appear at the configuration and trace boundaries.
"""

from __future__ import annotations

import math

BLOCK_SIZE: int = 4096
MIB: int = 1 << 20
GIB: int = 1 << 30
BLOCKS_PER_GIB: int = GIB // BLOCK_SIZE


def bytes_to_blocks(num_bytes: int) -> int:
    """Whole blocks needed to cover `num_bytes`."""
    return math.ceil(num_bytes / BLOCK_SIZE)


def gib_to_blocks(gib: float) -> int:
    return round(gib * BLOCKS_PER_GIB)
