"""
GC victim selection over sealed segments.

Greedy ties go to the smallest segment id. Cost-Benefit ties go to the higher GP
first: segments sealed during the running GC operation all score 0.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

from lsgc.core.exceptions import SelectionError
from lsgc.core.models import SelectorKind
from lsgc.core.segments import Segment


def cost_benefit_score(segment: Segment, now: int) -> float:
    gp = segment.garbage_proportion
    if gp >= 1.0:
        return math.inf
    age = now - (segment.seal_time if segment.seal_time is not None else now)
    return gp * age / (1 - gp)


def greedy_select(sealed: Iterable[Segment]) -> int:
    best = min(sealed, key=lambda seg: (-seg.garbage_proportion, seg.id), default=None)
    if best is None:
        raise SelectionError()
    return best.id


def cost_benefit_select(sealed: Iterable[Segment], now: int) -> int:
    best = min(
        sealed,
        key=lambda seg: (-cost_benefit_score(seg, now), -seg.garbage_proportion, seg.id),
        default=None,
    )
    if best is None:
        raise SelectionError()
    return best.id


class SelectionPolicy:
    def __init__(self, kind: SelectorKind = SelectorKind.greedy):
        self.kind = SelectorKind(kind)

    def select(self, sealed: Iterable[Segment], now: int) -> int:
        if self.kind == SelectorKind.cost_benefit:
            return cost_benefit_select(sealed, now)
        return greedy_select(sealed)
