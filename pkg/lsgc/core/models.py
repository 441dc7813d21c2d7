from __future__ import annotations

from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, Field, field_validator, model_validator

from lsgc.core.units import BLOCK_SIZE, GIB, MIB

SCHEMA_VERSION = "1.0"


class SchemeId(StrEnum):
    nosep = "nosep"
    sepgc = "sepgc"
    sepbit = "sepbit"
    uw = "uw"
    gw = "gw"
    dac = "dac"
    fk = "fk"
    ideal = "ideal"


class SelectorKind(StrEnum):
    greedy = "greedy"
    cost_benefit = "cost-benefit"


class WorkloadKind(StrEnum):
    zipf = "zipf"
    two_region = "two-region"
    trace = "trace"


class TraceFormat(StrEnum):
    native = "native-csv"
    alibaba = "alibaba"
    tencent = "tencent"


class RecencyMode(StrEnum):
    fifo = "fifo"
    exact = "exact"


class VolumeConfig(BaseModel):
    block_size: int = BLOCK_SIZE
    segment_size: int = 512 * MIB
    gp_threshold: float = 0.15
    gc_retrieval_bytes: int | None = None
    num_classes: int = 6

    @field_validator("block_size")
    @classmethod
    def validate_block_size(cls, value: int) -> int:
        if value != BLOCK_SIZE:
            msg = f"block_size is fixed at {BLOCK_SIZE} bytes"
            raise ValueError(msg)
        return value

    @field_validator("segment_size")
    @classmethod
    def validate_segment_size(cls, value: int) -> int:
        if value <= 0 or value % BLOCK_SIZE:
            msg = f"segment_size must be a positive multiple of {BLOCK_SIZE}"
            raise ValueError(msg)
        return value

    @field_validator("gp_threshold")
    @classmethod
    def validate_gp_threshold(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError("gp_threshold must lie in (0, 1)")
        return value

    @field_validator("num_classes")
    @classmethod
    def validate_num_classes(cls, value: int) -> int:
        if value < 1:
            raise ValueError("num_classes must be >= 1")
        return value

    @model_validator(mode="after")
    def fill_retrieval(self) -> VolumeConfig:
        if self.gc_retrieval_bytes is None:
            self.gc_retrieval_bytes = self.segment_size
        retrieval = self.gc_retrieval_bytes
        if retrieval <= 0 or (
            retrieval % self.segment_size and self.segment_size % retrieval
        ):
            msg = "gc_retrieval_bytes must be a multiple or a divisor of segment_size"
            raise ValueError(msg)
        return self

    @property
    def segment_blocks(self) -> int:
        return self.segment_size // self.block_size

    @property
    def retrieval_blocks(self) -> int:
        return max(1, (self.gc_retrieval_bytes or self.segment_size) // self.block_size)

    def capacity_bytes(self, wss_blocks: int) -> float:
        """Provisioned space for reporting only; GC is driven by the GP threshold."""
        return wss_blocks * self.block_size / (1 - self.gp_threshold)


class SyntheticSpec(BaseModel):
    wss_blocks: int = 1 << 17
    alpha: float = 1.0
    total_writes: int | None = None
    hot_fraction: float = 0.2
    churn_period_blocks: int = 512 * MIB // BLOCK_SIZE
    seed: int = 0

    @field_validator("wss_blocks", "churn_period_blocks")
    @classmethod
    def validate_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("value must be >= 1")
        return value

    @field_validator("alpha")
    @classmethod
    def validate_alpha(cls, value: float) -> float:
        if value < 0:
            raise ValueError("alpha must be >= 0")
        return value

    @field_validator("hot_fraction")
    @classmethod
    def validate_hot_fraction(cls, value: float) -> float:
        if not 0 < value < 1:
            raise ValueError("hot_fraction must lie in (0, 1)")
        return value

    @model_validator(mode="after")
    def fill_total_writes(self) -> SyntheticSpec:
        if self.total_writes is None:
            self.total_writes = 30 * self.wss_blocks
        if self.total_writes < 0:
            raise ValueError("total_writes must be >= 0")
        return self


class SepBitOptions(BaseModel):
    thresholds: str = "default"
    threshold_scale: float = 1.0
    index: RecencyMode = RecencyMode.fifo
    window: int = 16

    @field_validator("window")
    @classmethod
    def validate_window(cls, value: int) -> int:
        if value < 1:
            raise ValueError("window must be >= 1")
        return value

    @field_validator("threshold_scale")
    @classmethod
    def validate_scale(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("threshold_scale must be > 0")
        return value


class WorkloadSource(BaseModel):
    kind: WorkloadKind = WorkloadKind.two_region
    trace: Path | None = None
    trace_format: TraceFormat = TraceFormat.native
    columns: str | None = None
    annotations: Path | None = None
    volumes: list[str] = Field(default_factory=list)
    filter_volumes: bool = False
    wss_min_bytes: int = 10 * GIB
    traffic_multiple: float = 2.0
    synthetic: SyntheticSpec = Field(default_factory=SyntheticSpec)

    @model_validator(mode="after")
    def validate_trace_source(self) -> WorkloadSource:
        if self.kind == WorkloadKind.trace and self.trace is None:
            raise ValueError("workload 'trace' requires a trace path")
        return self


class RunConfig(BaseModel):
    scheme: SchemeId = SchemeId.sepbit
    selector: SelectorKind = SelectorKind.greedy
    volume: VolumeConfig = Field(default_factory=VolumeConfig)
    sepbit: SepBitOptions = Field(default_factory=SepBitOptions)
    workload: WorkloadSource = Field(default_factory=WorkloadSource)
    output_dir: Path | None = None
    gc_log: bool = False
    jobs: int = 1

    @field_validator("jobs")
    @classmethod
    def validate_jobs(cls, value: int) -> int:
        if value < 1:
            raise ValueError("jobs must be >= 1")
        return value


class VolumeResult(BaseModel):
    volume_id: str
    scheme: str
    selector: str
    user_blocks: int
    gc_blocks: int
    wa: float
    gc_op_count: int
    median_collected_gp: float | None = None
    wss_blocks: int = 0
    capacity_bytes: float | None = None
    top20_traffic_share: float | None = None
    memory_status: str = "n/a"
    worst_unique_lbas: int | None = None
    snapshot_unique_lbas: int | None = None
    worst_reduction: float | None = None
    snapshot_reduction: float | None = None
    final_queue_length: int | None = None


class AggregateResult(BaseModel):
    volume_count: int
    user_blocks: int
    gc_blocks: int
    wa: float
    # over the collected segments of every volume
    median_collected_gp: float | None = None
    wss_blocks: int = 0
    # memory sums cover the volumes with memory status "ok"
    memory_status: str = "n/a"
    worst_unique_lbas: int | None = None
    snapshot_unique_lbas: int | None = None
    worst_reduction: float | None = None
    snapshot_reduction: float | None = None


class RunResult(BaseModel):
    schema_version: str = SCHEMA_VERSION
    run_config: dict[str, Any] = Field(default_factory=dict)
    volumes: list[VolumeResult] = Field(default_factory=list)
    aggregate: AggregateResult | None = None
