from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel

from lsgc.analysis.empirical import collected_gp_distribution
from lsgc.core.config import FLAT_KEYS, load_run_config
from lsgc.core.exceptions import ConfigError, DataError, LsgcError
from lsgc.core.models import (
    AggregateResult,
    RunConfig,
    RunResult,
    SchemeId,
    VolumeResult,
    WorkloadKind,
)
from lsgc.core.segments import GcEvent
from lsgc.engine.ideal import IdealVolumeSim
from lsgc.engine.selection import SelectionPolicy
from lsgc.engine.volume import VolumeSim
from lsgc.placement.recency_index import MemorySample
from lsgc.placement.registry import SchemeContext, SchemeRegistry
from lsgc.utils.loggable import Loggable
from lsgc.workload.annotate import AnnotatedTrace, annotate_bits, load_annotation
from lsgc.workload.synthetic import gen_two_region, gen_zipf
from lsgc.workload.traces import TraceReader
from lsgc.workload.volumes import compute_volume_stats, filter_volumes

SYNTHETIC_VOLUME_ID = "synthetic"
MEMORY_WARMUP_FRACTION = 0.1
MIN_MEMORY_SAMPLES = 10


@dataclass(frozen=True)
class VolumeWorkload:
    volume_id: str
    lbas: np.ndarray
    annotation: AnnotatedTrace | None = None


@dataclass
class VolumeOutcome:
    result: VolumeResult
    gc_log: list[GcEvent] = field(default_factory=list)
    collected_gps: list[float] = field(default_factory=list)


class MemoryReport(BaseModel):
    status: str
    worst_unique_lbas: int | None = None
    snapshot_unique_lbas: int | None = None
    worst_reduction: float | None = None
    snapshot_reduction: float | None = None


def memory_report(
    samples: Sequence[MemorySample],
    final: MemorySample,
    wss_blocks: int,
    min_samples: int = MIN_MEMORY_SAMPLES,
) -> MemoryReport:
    """
    Worst case: most unique LBAs over the `ell`-update samples after the first 10%.
    Snapshot: `final`, taken when the volume's writes end. Reductions are relative
    to tracking the whole WSS.
    """
    if len(samples) < min_samples or wss_blocks <= 0:
        return MemoryReport(status="insufficient data")
    kept = samples[math.floor(MEMORY_WARMUP_FRACTION * len(samples)) :]
    worst = max(sample.unique_lbas for sample in kept)
    snapshot = final.unique_lbas
    return MemoryReport(
        status="ok",
        worst_unique_lbas=worst,
        snapshot_unique_lbas=snapshot,
        worst_reduction=1 - worst / wss_blocks,
        snapshot_reduction=1 - snapshot / wss_blocks,
    )


def top_traffic_share(lbas: np.ndarray, frac: float = 0.2) -> float | None:
    """Share of writes landing on the `frac` most written LBAs."""
    if lbas.size == 0:
        return None
    _, counts = np.unique(lbas, return_counts=True)
    top = math.floor(frac * counts.size)
    return float(np.sort(counts)[::-1][:top].sum() / lbas.size)


def run_volume(config: RunConfig, workload: VolumeWorkload) -> VolumeOutcome:
    """Replay one volume; module-level so worker processes can run it."""
    registry = SchemeRegistry()
    lifespans = workload.annotation.lifespans if workload.annotation is not None else None
    placement = registry.create(
        config.scheme,
        SchemeContext(volume=config.volume, sepbit=config.sepbit, lifespans=lifespans),
    )
    if config.scheme == SchemeId.ideal:
        sim: VolumeSim = IdealVolumeSim(config.volume, placement)
    else:
        sim = VolumeSim(config.volume, placement, SelectionPolicy(config.selector))

    sim.logger.info(
        f"volume {workload.volume_id}: {config.scheme} / {config.selector}, "
        f"{workload.lbas.size} writes"
    )
    sim.replay(workload.lbas.tolist())

    wss_blocks = int(np.unique(workload.lbas).size)
    collected_gps = [gp for event in sim.gc_log for gp in event.victim_gp]
    median_gp = collected_gp_distribution(sim.gc_log).median if collected_gps else None
    memory = MemoryReport(status="n/a")
    final_queue_length = None
    index = getattr(placement, "index", None)
    if index is not None:
        memory = memory_report(placement.memory_samples, index.sample(sim.clock), wss_blocks)
        final_queue_length = len(index)
        if memory.status != "ok":
            sim.logger.warning(
                f"volume {workload.volume_id}: {len(placement.memory_samples)} memory samples, "
                f"memory metrics marked '{memory.status}'"
            )

    result = VolumeResult(
        volume_id=workload.volume_id,
        scheme=str(config.scheme),
        selector=str(config.selector),
        user_blocks=sim.user_blocks_written,
        gc_blocks=sim.gc_blocks_written,
        wa=sim.write_amplification(),
        gc_op_count=sim.gc_op_count,
        median_collected_gp=median_gp,
        wss_blocks=wss_blocks,
        capacity_bytes=config.volume.capacity_bytes(wss_blocks),
        top20_traffic_share=top_traffic_share(workload.lbas),
        memory_status=memory.status,
        worst_unique_lbas=memory.worst_unique_lbas,
        snapshot_unique_lbas=memory.snapshot_unique_lbas,
        worst_reduction=memory.worst_reduction,
        snapshot_reduction=memory.snapshot_reduction,
        final_queue_length=final_queue_length,
    )
    sim.logger.info(f"volume {workload.volume_id}: WA {result.wa:.4f}, {result.gc_op_count} GC ops")
    return VolumeOutcome(
        result=result,
        gc_log=sim.gc_log if config.gc_log else [],
        collected_gps=collected_gps,
    )


def aggregate(
    results: Sequence[VolumeResult], collected_gps: Sequence[float] = ()
) -> AggregateResult | None:
    """
    Traffic-weighted WA, the median GP over every collected segment, and memory
    reductions as summed unique LBAs against the summed WSS of the volumes that
    have memory metrics.
    """
    user = sum(result.user_blocks for result in results)
    if user == 0:
        return None
    gc = sum(result.gc_blocks for result in results)
    summary = AggregateResult(
        volume_count=len(results),
        user_blocks=user,
        gc_blocks=gc,
        wa=(user + gc) / user,
        median_collected_gp=float(np.median(collected_gps)) if len(collected_gps) else None,
        wss_blocks=sum(result.wss_blocks for result in results),
    )
    measured = [result for result in results if result.memory_status == "ok"]
    memory_wss = sum(result.wss_blocks for result in measured)
    if not measured or memory_wss == 0:
        return summary
    worst = sum(result.worst_unique_lbas for result in measured)
    snapshot = sum(result.snapshot_unique_lbas for result in measured)
    return summary.model_copy(
        update={
            "memory_status": "ok",
            "worst_unique_lbas": worst,
            "snapshot_unique_lbas": snapshot,
            "worst_reduction": 1 - worst / memory_wss,
            "snapshot_reduction": 1 - snapshot / memory_wss,
        }
    )


class ReplayRunner(Loggable):
    def __init__(self, config: RunConfig, registry: SchemeRegistry | None = None):
        self.config = config
        self.registry = registry or SchemeRegistry()
        self.gc_logs: dict[str, list[GcEvent]] = {}

    def volume_streams(self) -> dict[str, np.ndarray]:
        workload = self.config.workload
        if workload.kind == WorkloadKind.zipf:
            return {SYNTHETIC_VOLUME_ID: gen_zipf(workload.synthetic)}
        if workload.kind == WorkloadKind.two_region:
            return {SYNTHETIC_VOLUME_ID: gen_two_region(workload.synthetic)}

        reader = TraceReader(workload.trace, workload.trace_format, workload.columns)
        streams = reader.volume_writes(workload.volumes or None)
        if workload.filter_volumes:
            kept = set(
                filter_volumes(
                    (compute_volume_stats(volume_id, lbas) for volume_id, lbas in streams.items()),
                    wss_min_bytes=workload.wss_min_bytes,
                    traffic_multiple=workload.traffic_multiple,
                )
            )
            dropped = sorted(set(streams) - kept)
            if dropped:
                self.logger.warning(f"dropped {len(dropped)} volumes by WSS/traffic filter")
            streams = {volume_id: lbas for volume_id, lbas in streams.items() if volume_id in kept}
        if not streams:
            raise DataError("the workload selects no volumes")
        return streams

    def _annotation(self, volume_id: str, lbas: np.ndarray) -> AnnotatedTrace | None:
        if not self.registry.needs_annotation(self.config.scheme):
            return None
        directory = self.config.workload.annotations
        if directory is None:
            return annotate_bits(lbas, volume_id=volume_id)
        annotation = load_annotation(directory, volume_id)
        if not np.array_equal(annotation.lbas, lbas):
            raise DataError(f"annotation for volume '{volume_id}' does not match its write stream")
        return annotation

    def workloads(self) -> list[VolumeWorkload]:
        return [
            VolumeWorkload(volume_id, lbas, self._annotation(volume_id, lbas))
            for volume_id, lbas in self.volume_streams().items()
        ]

    def replay(self) -> RunResult:
        workloads = self.workloads()
        if self.config.jobs > 1 and len(workloads) > 1:
            with ProcessPoolExecutor(max_workers=self.config.jobs) as pool:
                outcomes = list(
                    pool.map(run_volume, itertools.repeat(self.config), workloads)
                )
        else:
            outcomes = [run_volume(self.config, workload) for workload in workloads]

        outcomes.sort(key=lambda outcome: outcome.result.volume_id)
        self.gc_logs = {outcome.result.volume_id: outcome.gc_log for outcome in outcomes}
        results = [outcome.result for outcome in outcomes]
        summary = aggregate(
            results, [gp for outcome in outcomes for gp in outcome.collected_gps]
        )
        if summary is not None:
            self.logger.info(f"{summary.volume_count} volumes, overall WA {summary.wa:.4f}")
        return RunResult(
            run_config=self.config.model_dump(mode="json"),
            volumes=results,
            aggregate=summary,
        )


def parse_axes(axes: Sequence[str]) -> dict[str, list[str]]:
    """`key=v1,v2` items into an ordered axis map."""
    parsed: dict[str, list[str]] = {}
    for axis in axes:
        key, _, values = axis.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in FLAT_KEYS:
            raise ConfigError(f"unknown sweep axis '{key}'")
        items = [value.strip() for value in values.split(",") if value.strip()]
        if not items:
            raise ConfigError(f"sweep axis '{key}' has no values")
        parsed[key] = items
    return parsed


def sweep(
    axes: Mapping[str, Sequence[str]],
    config_file: Path | None = None,
    overrides: Mapping[str, Any] | None = None,
    environ: Mapping[str, str] | None = None,
    on_row: Callable[[dict[str, Any]], None] | None = None,
) -> list[dict[str, Any]]:
    """
    Replay every cell of the cartesian product of `axes`. One row per cell and
    volume; `on_row` sees each row as soon as it exists. A failing cell stops
    the sweep after the earlier rows have been handed out.
    """
    rows: list[dict[str, Any]] = []
    keys = list(axes)
    for cell in itertools.product(*(axes[key] for key in keys)):
        cell_values = dict(zip(keys, cell, strict=True))
        config = load_run_config(config_file, {**(overrides or {}), **cell_values}, environ)
        try:
            result = ReplayRunner(config).replay()
        except LsgcError:
            ReplayRunner.log().error(f"sweep cell {cell_values} failed")
            raise
        for volume in result.volumes:
            row = {**cell_values, **volume.model_dump()}
            rows.append(row)
            if on_row is not None:
                on_row(row)
    return rows
