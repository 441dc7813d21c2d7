"""
SepBIT placement and its UW / GW ablations.

Classes 1-2 hold user-written blocks, split by whether the invalidated old
version lived shorter than `ell`, the windowed average lifespan of reclaimed
Class-1 segments. Class 3 receives GC rewrites out of Class 1; classes 4 and up
receive the remaining GC rewrites grouped by age against multiples of `ell`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass

from lsgc.core.exceptions import ConfigError
from lsgc.core.models import RecencyMode
from lsgc.core.segments import BlockMeta, Segment
from lsgc.placement.recency_index import MemorySample, RecencyIndex
from lsgc.utils.loggable import Loggable

PRESETS: dict[str, float] = {
    "default": 1.0,
    "method1": 1.0,
    "method2": 1.0,
    "half": 0.5,
    "double": 2.0,
    "gw": 1.0,
}


@dataclass
class LifespanWindow:
    """Sum of the last `size` lifespans; yields their mean each time the window fills."""

    size: int = 16
    total: int = 0
    count: int = 0

    def add(self, lifespan: int) -> float | None:
        self.total += lifespan
        self.count += 1
        if self.count < self.size:
            return None
        mean = self.total / self.size
        self.total = 0
        self.count = 0
        return mean


def age_multipliers(thresholds: str, age_classes: int) -> list[float]:
    """
    Multiples of `ell` that split non-Class-1 GC rewrites into `age_classes` classes.

    `method2` spaces them as 4^i; every other preset uses 16^(i/(c-1)), which is
    [4, 16] for three age classes. A comma list of numbers is taken verbatim.
    """
    if age_classes < 1:
        raise ConfigError("SepBIT needs at least one age class (num_classes >= 4)")
    preset = thresholds.strip().lower()
    if preset == "method2":
        return [4.0**i for i in range(1, age_classes)]
    if preset in PRESETS:
        if age_classes == 1:
            return []
        return [16.0 ** (i / (age_classes - 1)) for i in range(1, age_classes)]

    try:
        values = [float(item) for item in preset.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"unknown sepbit thresholds '{thresholds}'") from exc
    if any(value <= 0 for value in values) or values != sorted(set(values)):
        raise ConfigError("sepbit thresholds must be positive and strictly increasing")
    if len(values) != age_classes - 1:
        raise ConfigError(
            f"{len(values)} sepbit thresholds need num_classes={len(values) + 4}"
        )
    return values


def sepbit_user_class(v: int | None, ell: float) -> int:
    """Class 1 for short-lived predecessors; new LBAs count as infinitely long-lived."""
    if v is not None and v < ell:
        return 1
    return 2


def sepbit_gc_class(
    block: BlockMeta, origin_class: int, now: int, thresholds: list[float]
) -> int:
    if origin_class == 1:
        return 3
    return 4 + bisect_right(thresholds, block.age(now))


class SepBitPlacement(Loggable):
    name = "sepbit"

    def __init__(
        self,
        num_classes: int = 6,
        thresholds: str = "default",
        threshold_scale: float = 1.0,
        index: RecencyMode = RecencyMode.fifo,
        window: int = 16,
    ):
        preset = thresholds.strip().lower()
        self.thresholds = preset
        self.multipliers = age_multipliers(preset, num_classes - 3)
        if preset == "gw" and len(self.multipliers) != 2:
            raise ConfigError("the 'gw' thresholds need num_classes=6")
        self.scale = threshold_scale * PRESETS.get(preset, 1.0)
        self.class_ids: tuple[int, ...] = tuple(range(1, num_classes + 1))

        self.ell: float = math.inf
        self.class1_window = LifespanWindow(size=window)
        # reclaimed Class-3 / Class-4 lifespans for the 'gw' thresholds
        self.ell3: float = math.inf
        self.ell4: float = math.inf
        self._class3_window = LifespanWindow(size=window)
        self._class4_window = LifespanWindow(size=window)

        self.index_mode = RecencyMode(index)
        self.index: RecencyIndex | None = (
            RecencyIndex() if self.index_mode == RecencyMode.fifo else None
        )
        self.memory_samples: list[MemorySample] = []

    @property
    def user_threshold(self) -> float:
        return self.scale * self.ell

    @property
    def recent_window(self) -> float:
        """
        Largest integer lifespan still below `user_threshold`.

        Lifespans are whole blocks, so `v < threshold` and `v <= recent_window`
        select the same writes.
        """
        threshold = self.user_threshold
        if math.isinf(threshold):
            return math.inf
        return math.ceil(threshold) - 1

    def age_thresholds(self) -> list[float]:
        if self.thresholds == "gw" and math.isfinite(self.ell3) and math.isfinite(self.ell4):
            return [self.ell3, self.ell3 + self.ell4]
        return [self.scale * multiplier * self.ell for multiplier in self.multipliers]

    def is_short_lived(self, lba: int, v: int | None) -> bool:
        if self.index is None:
            return sepbit_user_class(v, self.user_threshold) == 1
        recent = self.index.is_recent(lba, self.recent_window)
        self.index.record_write(lba)
        return recent

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        return 1 if self.is_short_lived(lba, v) else 2

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        return sepbit_gc_class(block, origin_class, now, self.age_thresholds())

    def notify_reclaim(self, victim: Segment, now: int) -> None:
        if victim.creation_time is None:
            return
        lifespan = now - victim.creation_time
        if victim.class_id == 1:
            mean = self.class1_window.add(lifespan)
            if mean is not None:
                self._update_ell(mean, now)
        elif self.thresholds == "gw" and victim.class_id in (3, 4):
            window = self._class3_window if victim.class_id == 3 else self._class4_window
            mean = window.add(lifespan)
            if mean is not None and victim.class_id == 3:
                self.ell3 = mean
            elif mean is not None:
                self.ell4 = mean

    def _update_ell(self, mean: float, now: int) -> None:
        self.ell = mean
        if self.index is not None:
            self.index.retarget(self.user_threshold)
            self.memory_samples.append(self.index.sample(now))
        self.logger.info(f"{self.name}: ell={mean:.1f} blocks at t={now}")


class UserWritePlacement(SepBitPlacement):
    """Only user writes are split by lifespan; every GC rewrite lands in class 3."""

    name = "uw"

    def __init__(self, **kwargs):
        kwargs["num_classes"] = 6
        super().__init__(**kwargs)
        self.class_ids = (1, 2, 3)

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        return 3


class GcWritePlacement(SepBitPlacement):
    """
    Only GC rewrites are split, by age against the `ell` thresholds, into
    classes 2-4; every user write lands in class 1.
    """

    name = "gw"

    def __init__(self, **kwargs):
        kwargs["num_classes"] = 6
        kwargs["index"] = RecencyMode.exact
        super().__init__(**kwargs)
        self.class_ids = (1, 2, 3, 4)

    def on_user_write(self, lba: int, v: int | None, now: int) -> int:
        return 1

    def on_gc_write(self, block: BlockMeta, origin_class: int, now: int) -> int:
        return 2 + bisect_right(self.age_thresholds(), block.age(now))
