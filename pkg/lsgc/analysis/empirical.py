"""
Lifespan statistics measured on annotated write streams.

Lifespans are held as float arrays with `inf` for "never invalidated" (u) and
"new LBA" (v), so threshold comparisons need no special cases.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel

from lsgc.core.exceptions import EmptyWorkloadError
from lsgc.core.segments import GcEvent
from lsgc.workload.annotate import NEVER, AnnotatedTrace

LIFESPAN_BUCKETS: tuple[float, ...] = (0.1, 0.2, 0.4, 0.8)
RARE_UPDATE_BUCKETS: tuple[float, ...] = (0.5, 1.0, 1.5, 2.0)
RANK_GROUPS: tuple[tuple[float, float], ...] = ((0.0, 0.01), (0.01, 0.05), (0.05, 0.10), (0.10, 0.20))
RARE_UPDATE_LIMIT = 4
UPDATE_NOTE = "update frequency counts the writes to an LBA after its first write"


@dataclass(frozen=True)
class LifespanRecord:
    b: int
    lba: int
    u: int | None
    v: int | None


def _as_float(values: np.ndarray) -> np.ndarray:
    result = values.astype(np.float64)
    result[values == NEVER] = math.inf
    return result


@dataclass(frozen=True)
class LifespanTable:
    lbas: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __len__(self) -> int:
        return len(self.lbas)

    @classmethod
    def from_trace(cls, trace: AnnotatedTrace) -> LifespanTable:
        return cls(lbas=trace.lbas, u=_as_float(trace.lifespans), v=_as_float(trace.prev_lifespans))

    @classmethod
    def from_records(cls, records: Iterable[LifespanRecord]) -> LifespanTable:
        records = sorted(records, key=lambda record: record.b)
        return cls(
            lbas=np.array([record.lba for record in records], dtype=np.int64),
            u=np.array([math.inf if record.u is None else record.u for record in records], dtype=np.float64),
            v=np.array([math.inf if record.v is None else record.v for record in records], dtype=np.float64),
        )

    def truncate(self, count: int) -> LifespanTable:
        """First `count` writes; lifespans still reach beyond them."""
        return LifespanTable(lbas=self.lbas[:count], u=self.u[:count], v=self.v[:count])


def empirical_cond_prob_user(table: LifespanTable, u0: float, v0: float) -> float:
    """Among user writes whose invalidated predecessor lived v <= v0, the share with u <= u0."""
    condition = table.v <= v0
    if not condition.any():
        raise EmptyWorkloadError(f"no user write invalidates a block with v <= {v0}")
    return float(np.mean(table.u[condition] <= u0))


def empirical_cond_prob_gc(table: LifespanTable, g0: float, r0: float) -> float:
    """Among blocks still alive at age g0 (u > g0), the share invalidated by age g0 + r0."""
    condition = table.u > g0
    if not condition.any():
        raise EmptyWorkloadError(f"no block outlives {g0} blocks")
    return float(np.mean(table.u[condition] <= g0 + r0))


class RankGroupCv(BaseModel):
    low: float
    high: float
    lbas: int
    cv: float | None = None


class ObservationReport(BaseModel):
    wss_blocks: int
    writes: int
    note: str = UPDATE_NOTE
    short_lifespan_share: dict[str, float]
    rank_group_cv: list[RankGroupCv]
    rare_update_lbas: int
    rare_update_share: dict[str, float | None]


def _bucket_shares(lifespans: np.ndarray, wss: int, fractions: Sequence[float]) -> dict[str, float | None]:
    if lifespans.size == 0:
        return {f"{fraction:g}": None for fraction in fractions}
    return {f"{fraction:g}": float(np.mean(lifespans < fraction * wss)) for fraction in fractions}


def observation_stats(table: LifespanTable, wss: int | None = None) -> ObservationReport:
    """
    - share of user writes whose lifespan is below 10/20/40/80% of the WSS
    - coefficient of variation of lifespans within update-frequency rank groups
      (top 1%, 1-5%, 5-10%, 10-20% of LBAs), never-invalidated writes excluded
    - lifespan shares below 0.5/1/1.5/2 x WSS for LBAs updated at most four times

    Never-invalidated writes count as living until the end of the stream except
    in the rank groups.
    """
    n = len(table)
    if n == 0:
        raise EmptyWorkloadError("observation statistics need at least one write")
    unique_lbas, inverse, counts = np.unique(table.lbas, return_inverse=True, return_counts=True)
    wss = int(unique_lbas.size) if wss is None else wss
    to_end = np.where(np.isinf(table.u), n - np.arange(n), table.u)

    updates = counts - 1
    # most updated first, ties by LBA
    ranked = np.lexsort((unique_lbas, -updates))
    rank_of = np.empty_like(ranked)
    rank_of[ranked] = np.arange(ranked.size)
    write_rank = rank_of[inverse]
    finite = np.isfinite(table.u)
    groups: list[RankGroupCv] = []
    for low, high in RANK_GROUPS:
        first, last = math.floor(low * unique_lbas.size), math.floor(high * unique_lbas.size)
        members = (write_rank >= first) & (write_rank < last) & finite
        lifespans = table.u[members]
        cv = None
        if lifespans.size and lifespans.mean() > 0:
            cv = float(lifespans.std() / lifespans.mean())
        groups.append(RankGroupCv(low=low, high=high, lbas=last - first, cv=cv))

    rare = updates[inverse] <= RARE_UPDATE_LIMIT
    return ObservationReport(
        wss_blocks=wss,
        writes=n,
        short_lifespan_share=_bucket_shares(to_end, wss, LIFESPAN_BUCKETS),
        rank_group_cv=groups,
        rare_update_lbas=int((updates <= RARE_UPDATE_LIMIT).sum()),
        rare_update_share=_bucket_shares(to_end[rare], wss, RARE_UPDATE_BUCKETS),
    )


class GpDistribution(BaseModel):
    victims: int
    median: float
    # (gp, share of victims with GP <= gp)
    cdf: list[tuple[float, float]]


def collected_gp_distribution(gc_log: Iterable[GcEvent]) -> GpDistribution:
    gps = np.array([gp for event in gc_log for gp in event.victim_gp], dtype=np.float64)
    if gps.size == 0:
        raise EmptyWorkloadError("no GC victims collected")
    values, counts = np.unique(gps, return_counts=True)
    cumulative = np.cumsum(counts) / gps.size
    return GpDistribution(
        victims=int(gps.size),
        median=float(np.median(gps)),
        cdf=[(float(value), float(share)) for value, share in zip(values, cumulative, strict=True)],
    )
