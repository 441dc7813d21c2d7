"""
Full-trace lifespan annotation.

For the write at index t to LBA X, `lifespan` is the distance to the next write
of X and `prev_lifespan` the distance from the previous one. Both use
`NEVER` (-1) when there is no such write: "never invalidated" and "new LBA".
"""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from lsgc.core.exceptions import AnnotationMissingError, DataError

NEVER: int = -1
SIDECAR_SUFFIX = ".npz"


@dataclass(frozen=True)
class AnnotatedWrite:
    lba: int
    write_index: int
    lifespan: int | None
    prev_lifespan: int | None


@dataclass(frozen=True)
class AnnotatedTrace:
    volume_id: str
    lbas: np.ndarray
    lifespans: np.ndarray
    prev_lifespans: np.ndarray

    def __len__(self) -> int:
        return len(self.lbas)

    def __getitem__(self, index: int) -> AnnotatedWrite:
        lifespan = int(self.lifespans[index])
        prev = int(self.prev_lifespans[index])
        return AnnotatedWrite(
            lba=int(self.lbas[index]),
            write_index=index,
            lifespan=None if lifespan == NEVER else lifespan,
            prev_lifespan=None if prev == NEVER else prev,
        )

    def __iter__(self) -> Iterator[AnnotatedWrite]:
        for index in range(len(self)):
            yield self[index]

    @property
    def wss_blocks(self) -> int:
        return int(np.unique(self.lbas).size)

    def save(self, directory: Path) -> Path:
        directory.mkdir(parents=True, exist_ok=True)
        path = sidecar_path(directory, self.volume_id)
        np.savez_compressed(
            path,
            lbas=self.lbas,
            lifespans=self.lifespans,
            prev_lifespans=self.prev_lifespans,
        )
        return path


def sidecar_path(directory: Path, volume_id: str) -> Path:
    return directory / f"{volume_id}{SIDECAR_SUFFIX}"


def annotate_bits(lbas: np.ndarray | list[int], volume_id: str = "0") -> AnnotatedTrace:
    lbas = np.asarray(lbas, dtype=np.int64)
    n = len(lbas)
    lifespans = np.full(n, NEVER, dtype=np.int64)
    prev_lifespans = np.full(n, NEVER, dtype=np.int64)
    if n:
        # stable sort keeps each LBA's writes in time order
        order = np.argsort(lbas, kind="stable")
        sorted_lbas = lbas[order]
        repeats = np.flatnonzero(sorted_lbas[1:] == sorted_lbas[:-1])
        earlier = order[repeats]
        later = order[repeats + 1]
        lifespans[earlier] = later - earlier
        prev_lifespans[later] = later - earlier
    return AnnotatedTrace(
        volume_id=volume_id,
        lbas=lbas,
        lifespans=lifespans,
        prev_lifespans=prev_lifespans,
    )


def load_annotation(directory: Path, volume_id: str) -> AnnotatedTrace:
    path = sidecar_path(directory, volume_id)
    if not path.is_file():
        raise AnnotationMissingError(f"no annotation sidecar for volume '{volume_id}' in {directory}")
    with np.load(path) as data:
        try:
            return AnnotatedTrace(
                volume_id=volume_id,
                lbas=data["lbas"].astype(np.int64),
                lifespans=data["lifespans"].astype(np.int64),
                prev_lifespans=data["prev_lifespans"].astype(np.int64),
            )
        except KeyError as exc:
            raise DataError(f"annotation sidecar {path} lacks {exc}") from exc
