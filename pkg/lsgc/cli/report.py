"""
Result files. Contents depend only on the run configuration and its results,
so re-running an emitted `run_config.cfg` reproduces them byte for byte.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO

from lsgc.core.config import render_config_file
from lsgc.core.models import RunConfig, RunResult, VolumeResult
from lsgc.core.segments import GcEvent
from lsgc.utils.loggable import Loggable

RESULT_COLUMNS: list[str] = list(VolumeResult.model_fields)
GC_LOG_COLUMNS: list[str] = ["at_time", "victim_id", "victim_gp", "rewritten", "reclaimed"]
AGGREGATE_ID = "ALL"


def _cell(value: Any) -> Any:
    return "" if value is None else value


def write_rows(stream: TextIO, rows: Iterable[Mapping[str, Any]], columns: Sequence[str]) -> None:
    writer = csv.DictWriter(stream, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({column: _cell(row.get(column)) for column in columns})


def result_rows(result: RunResult) -> list[dict[str, Any]]:
    rows = [volume.model_dump() for volume in result.volumes]
    if result.aggregate is not None:
        rows.append({"volume_id": AGGREGATE_ID, **result.aggregate.model_dump()})
    return rows


def gc_log_rows(events: Iterable[GcEvent]) -> Iterable[dict[str, Any]]:
    for event in events:
        for victim_id, gp, rewritten, reclaimed in zip(
            event.victim_segment_ids,
            event.victim_gp,
            event.victim_rewritten,
            event.victim_reclaimed,
            strict=True,
        ):
            yield {
                "at_time": event.at_time,
                "victim_id": victim_id,
                "victim_gp": gp,
                "rewritten": rewritten,
                "reclaimed": reclaimed,
            }


class ResultWriter(Loggable):
    def __init__(self, output_dir: Path):
        self.output_dir = output_dir

    def write(
        self,
        config: RunConfig,
        result: RunResult,
        gc_logs: Mapping[str, list[GcEvent]] | None = None,
    ) -> list[Path]:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        written: list[Path] = []

        path = self.output_dir / "results.csv"
        with open(path, "w", encoding="utf-8", newline="") as stream:
            write_rows(stream, result_rows(result), RESULT_COLUMNS)
        written.append(path)

        path = self.output_dir / "results.json"
        path.write_text(result.model_dump_json(indent=2) + "\n", encoding="utf-8")
        written.append(path)

        path = self.output_dir / "run_config.cfg"
        path.write_text(render_config_file(config), encoding="utf-8")
        written.append(path)

        for volume_id, events in sorted((gc_logs or {}).items()):
            if not events:
                continue
            path = self.output_dir / f"gc_{volume_id}.csv"
            with open(path, "w", encoding="utf-8", newline="") as stream:
                write_rows(stream, gc_log_rows(events), GC_LOG_COLUMNS)
            written.append(path)

        self.logger.info(f"wrote {len(written)} result files to {self.output_dir}")
        return written
