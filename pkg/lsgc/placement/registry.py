from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from lsgc.core.exceptions import AnnotationMissingError, ConfigError
from lsgc.core.models import SchemeId, SepBitOptions, VolumeConfig
from lsgc.placement.base import PlacementScheme
from lsgc.placement.baselines import NoSepPlacement, SepGcPlacement
from lsgc.placement.dac import DacPlacement
from lsgc.placement.future_knowledge import FutureKnowledgePlacement
from lsgc.placement.ideal import IdealPlacement
from lsgc.placement.sepbit import GcWritePlacement, SepBitPlacement, UserWritePlacement


@dataclass(frozen=True)
class SchemeContext:
    volume: VolumeConfig = field(default_factory=VolumeConfig)
    sepbit: SepBitOptions = field(default_factory=SepBitOptions)
    # per-write lifespans of the volume, -1 for never invalidated
    lifespans: np.ndarray | None = None

    def require_lifespans(self, scheme: str) -> np.ndarray:
        if self.lifespans is None:
            raise AnnotationMissingError(f"scheme '{scheme}' needs lifespan annotations")
        return self.lifespans


SchemeFactory = Callable[[SchemeContext], PlacementScheme]


@dataclass(frozen=True)
class SchemeEntry:
    id: SchemeId
    factory: SchemeFactory
    needs_annotation: bool = False


def _sepbit_kwargs(context: SchemeContext) -> dict:
    return {
        "thresholds": context.sepbit.thresholds,
        "threshold_scale": context.sepbit.threshold_scale,
        "index": context.sepbit.index,
        "window": context.sepbit.window,
    }


DEFAULT_ENTRIES: list[SchemeEntry] = [
    SchemeEntry(SchemeId.nosep, lambda context: NoSepPlacement()),
    SchemeEntry(SchemeId.sepgc, lambda context: SepGcPlacement()),
    SchemeEntry(
        SchemeId.sepbit,
        lambda context: SepBitPlacement(
            num_classes=context.volume.num_classes, **_sepbit_kwargs(context)
        ),
    ),
    SchemeEntry(SchemeId.uw, lambda context: UserWritePlacement(**_sepbit_kwargs(context))),
    SchemeEntry(SchemeId.gw, lambda context: GcWritePlacement(**_sepbit_kwargs(context))),
    SchemeEntry(SchemeId.dac, lambda context: DacPlacement(context.volume.num_classes)),
    SchemeEntry(
        SchemeId.fk,
        lambda context: FutureKnowledgePlacement(
            context.require_lifespans("fk"),
            segment_blocks=context.volume.segment_blocks,
            num_classes=context.volume.num_classes,
        ),
        needs_annotation=True,
    ),
    SchemeEntry(
        SchemeId.ideal,
        lambda context: IdealPlacement(
            context.require_lifespans("ideal"),
            segment_blocks=context.volume.segment_blocks,
        ),
        needs_annotation=True,
    ),
]


class SchemeRegistry:
    def __init__(self, entries: list[SchemeEntry] | None = None):
        self._entries: dict[str, SchemeEntry] = {}
        for entry in DEFAULT_ENTRIES if entries is None else entries:
            if entry.id in self._entries:
                msg = f"duplicate scheme id '{entry.id}'"
                raise ValueError(msg)
            self._entries[entry.id] = entry

    def list_schemes(self) -> list[str]:
        return list(self._entries)

    def get_entry(self, scheme: str) -> SchemeEntry:
        entry = self._entries.get(scheme)
        if entry is None:
            raise ConfigError(
                f"unknown scheme '{scheme}' (known: {', '.join(self._entries)})"
            )
        return entry

    def needs_annotation(self, scheme: str) -> bool:
        return self.get_entry(scheme).needs_annotation

    def create(self, scheme: str, context: SchemeContext) -> PlacementScheme:
        return self.get_entry(scheme).factory(context)
