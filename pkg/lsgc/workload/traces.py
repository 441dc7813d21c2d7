"""
Block I/O trace ingestion.

Only write requests are kept. Each request is split into one write per 4 KiB
block it touches: blocks offset // 4096 through (offset + length - 1) // 4096.

Supported layouts (column indexes are zero-based, `--columns` overrides them):

- `native-csv`: `timestamp_us,volume_id,opcode,offset_bytes,length_bytes`, opcode `W`/`R`.
- `alibaba`: `device_id,opcode,offset,length,timestamp`, bytes, opcode `W`/`R`, timestamp in us.
- `tencent`: `timestamp,offset,size,io_type,volume_id`, offset/size in 512-byte sectors,
  io_type `1` = write, timestamp in seconds.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, replace
from pathlib import Path
from typing import TextIO

import numpy as np

from lsgc.core.exceptions import ConfigError, DataError, TraceFormatError
from lsgc.core.models import TraceFormat
from lsgc.core.units import BLOCK_SIZE
from lsgc.utils.loggable import Loggable

SECTOR_SIZE = 512
NATIVE_HEADER = "timestamp_us,volume_id,opcode,offset_bytes,length_bytes"


@dataclass(frozen=True)
class WriteRecord:
    timestamp: int
    volume_id: str
    offset: int
    length: int

    def lbas(self) -> range:
        if self.length <= 0:
            return range(0)
        return range(self.offset // BLOCK_SIZE, (self.offset + self.length - 1) // BLOCK_SIZE + 1)


@dataclass(frozen=True)
class TraceLayout:
    timestamp: int
    volume: int
    opcode: int
    offset: int
    length: int
    write_opcodes: frozenset[str]
    read_opcodes: frozenset[str]
    unit_bytes: int = 1
    timestamp_scale: float = 1.0

    @property
    def width(self) -> int:
        return max(self.timestamp, self.volume, self.opcode, self.offset, self.length) + 1


LAYOUTS: dict[TraceFormat, TraceLayout] = {
    TraceFormat.native: TraceLayout(
        timestamp=0,
        volume=1,
        opcode=2,
        offset=3,
        length=4,
        write_opcodes=frozenset({"w", "write"}),
        read_opcodes=frozenset({"r", "read"}),
    ),
    TraceFormat.alibaba: TraceLayout(
        timestamp=4,
        volume=0,
        opcode=1,
        offset=2,
        length=3,
        write_opcodes=frozenset({"w", "write"}),
        read_opcodes=frozenset({"r", "read"}),
    ),
    TraceFormat.tencent: TraceLayout(
        timestamp=0,
        volume=4,
        opcode=3,
        offset=1,
        length=2,
        write_opcodes=frozenset({"1"}),
        read_opcodes=frozenset({"0"}),
        unit_bytes=SECTOR_SIZE,
        timestamp_scale=1e6,
    ),
}

_COLUMN_NAMES = ("timestamp", "volume", "opcode", "offset", "length")


def resolve_layout(trace_format: TraceFormat | str, columns: str | None = None) -> TraceLayout:
    """Layout for `trace_format`, with `columns` such as `volume=0,offset=2` overriding indexes."""
    try:
        layout = LAYOUTS[TraceFormat(trace_format)]
    except ValueError as exc:
        raise ConfigError(f"unknown trace format '{trace_format}'") from exc
    if not columns:
        return layout
    overrides: dict[str, int] = {}
    for item in columns.split(","):
        name, _, index = item.partition("=")
        name = name.strip()
        if name not in _COLUMN_NAMES or not index.strip().isdigit():
            raise ConfigError(
                f"bad column override '{item}' (expected name=index, names: {', '.join(_COLUMN_NAMES)})"
            )
        overrides[name] = int(index)
    return replace(layout, **overrides)


def _to_int(value: str, line_number: int, name: str) -> int:
    try:
        number = int(float(value)) if "." in value else int(value)
    except ValueError as exc:
        raise TraceFormatError(line_number, f"{name} '{value}' is not a number") from exc
    if number < 0:
        raise TraceFormatError(line_number, f"{name} must be >= 0")
    return number


def parse_trace(
    stream: Iterable[str],
    trace_format: TraceFormat | str = TraceFormat.native,
    columns: str | None = None,
) -> Iterator[WriteRecord]:
    """Yield the write requests of `stream` in file order."""
    layout = resolve_layout(trace_format, columns)
    reader = csv.reader(stream)
    for row in reader:
        line_number = reader.line_num
        fields = [field.strip() for field in row]
        if not any(fields) or fields[0].startswith("#"):
            continue
        if len(fields) < layout.width:
            raise TraceFormatError(
                line_number, f"expected at least {layout.width} fields, got {len(fields)}"
            )
        # a header is only tolerated on the first line
        if line_number == 1 and not fields[layout.offset].lstrip("-").replace(".", "").isdigit():
            continue

        opcode = fields[layout.opcode].lower()
        if opcode in layout.read_opcodes:
            continue
        if opcode not in layout.write_opcodes:
            raise TraceFormatError(line_number, f"unknown opcode '{fields[layout.opcode]}'")

        yield WriteRecord(
            timestamp=int(
                _to_int(fields[layout.timestamp], line_number, "timestamp")
                * layout.timestamp_scale
            ),
            volume_id=fields[layout.volume],
            offset=_to_int(fields[layout.offset], line_number, "offset") * layout.unit_bytes,
            length=_to_int(fields[layout.length], line_number, "length") * layout.unit_bytes,
        )


def serialize(records: Iterable[WriteRecord], stream: TextIO, header: bool = False) -> None:
    """Write `records` as native CSV."""
    writer = csv.writer(stream, lineterminator="\n")
    if header:
        writer.writerow(NATIVE_HEADER.split(","))
    for record in records:
        writer.writerow([record.timestamp, record.volume_id, "W", record.offset, record.length])


class TraceReader(Loggable):
    def __init__(
        self,
        path: Path,
        trace_format: TraceFormat | str = TraceFormat.native,
        columns: str | None = None,
    ):
        self.path = path
        self.trace_format = TraceFormat(trace_format)
        self.columns = columns

    def volume_writes(self, volumes: Iterable[str] | None = None) -> dict[str, np.ndarray]:
        """Per-volume block-write LBAs in trace order, volumes sorted by id."""
        if not self.path.is_file():
            raise DataError(f"trace file '{self.path}' does not exist")
        wanted = set(volumes) if volumes else None
        per_volume: dict[str, list[int]] = {}
        with open(self.path, encoding="utf-8", newline="") as stream:
            for record in parse_trace(stream, self.trace_format, self.columns):
                if wanted is not None and record.volume_id not in wanted:
                    continue
                per_volume.setdefault(record.volume_id, []).extend(record.lbas())
        self.logger.info(
            f"{self.path.name}: {len(per_volume)} volumes, "
            f"{sum(len(lbas) for lbas in per_volume.values())} block writes"
        )
        return {
            volume_id: np.asarray(per_volume[volume_id], dtype=np.int64)
            for volume_id in sorted(per_volume)
        }
