"""
`lsgc` command line.

Every run flag maps to a flat configuration key, so `--config FILE`, `LSGC_<KEY>`
environment variables and flags describe the same settings (flags win).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Sequence
from contextlib import contextmanager
from pathlib import Path
from typing import Any

import numpy as np

from lsgc import __version__
from lsgc.analysis.empirical import (
    LifespanTable,
    empirical_cond_prob_gc,
    empirical_cond_prob_user,
    observation_stats,
)
from lsgc.analysis.zipf_math import DEFAULT_LBAS, probability_grid
from lsgc.cli.report import RESULT_COLUMNS, ResultWriter, result_rows, write_rows
from lsgc.cli.runner import ReplayRunner, parse_axes, sweep
from lsgc.core.config import load_run_config, parse_size
from lsgc.core.exceptions import ConfigError, EmptyWorkloadError, LsgcError
from lsgc.core.models import SchemeId, SelectorKind, SyntheticSpec, TraceFormat, WorkloadKind
from lsgc.core.units import BLOCK_SIZE
from lsgc.utils.loggable import Loggable
from lsgc.workload.annotate import annotate_bits
from lsgc.workload.synthetic import gen_two_region, gen_zipf
from lsgc.workload.traces import TraceReader, WriteRecord, serialize
from lsgc.workload.volumes import compute_volume_stats, filter_volumes

# (flag, flat key, help); values stay strings until RunConfig validation
RUN_FLAGS: list[tuple[str, str, str]] = [
    ("--scheme", "scheme", f"placement scheme: {'|'.join(SchemeId)}"),
    ("--selector", "selector", f"GC victim selection: {'|'.join(SelectorKind)}"),
    ("--segment-size", "segment_size", "segment size, e.g. 512MiB"),
    ("--gpt", "gp_threshold", "GC trigger garbage proportion, e.g. 0.15"),
    ("--gc-retrieval", "gc_retrieval_bytes", "bytes collected per GC operation"),
    ("--classes", "num_classes", "number of classes for sepbit, dac and fk"),
    ("--sepbit-thresholds", "sepbit_thresholds", "default|method1|method2|half|double|gw or multipliers like 4,16"),
    ("--sepbit-threshold-scale", "sepbit_threshold_scale", "scale applied to ell and all age thresholds"),
    ("--sepbit-index", "sepbit_index", "fifo|exact recency tracking"),
    ("--sepbit-window", "sepbit_window", "reclaimed Class-1 segments averaged per ell update"),
    ("--workload", "workload", f"{'|'.join(WorkloadKind)}"),
    ("--trace", "trace", "trace file (implies --workload trace)"),
    ("--format", "trace_format", f"trace layout: {'|'.join(TraceFormat)}"),
    ("--columns", "columns", "column index overrides, e.g. volume=0,offset=2"),
    ("--annotations", "annotations", "directory of .npz lifespan sidecars"),
    ("--volumes", "volumes", "comma-separated volume ids to replay"),
    ("--wss-min", "wss_min_bytes", "volume filter: minimum write working set"),
    ("--traffic-multiple", "traffic_multiple", "volume filter: minimum traffic / WSS"),
    ("--wss-blocks", "wss_blocks", "synthetic working set in 4 KiB blocks"),
    ("--alpha", "alpha", "synthetic Zipf skewness"),
    ("--total-writes", "total_writes", "synthetic stream length in blocks"),
    ("--hot-fraction", "hot_fraction", "two-region hot share of the WSS"),
    ("--churn-period", "churn_period_blocks", "two-region reshuffle period in blocks"),
    ("--seed", "seed", "synthetic RNG seed"),
    ("--output-dir", "output_dir", "directory for result files (stdout CSV when unset)"),
    ("--jobs", "jobs", "volumes replayed in parallel"),
]
RUN_SWITCHES: list[tuple[str, str, str]] = [
    ("--filter-volumes", "filter_volumes", "keep only volumes passing the WSS/traffic filter"),
    ("--gc-log", "gc_log", "write gc_<volume>.csv event logs"),
]


def _floats(value: str) -> list[float]:
    try:
        return [float(item) for item in value.split(",") if item.strip()]
    except ValueError as exc:
        raise ConfigError(f"'{value}' is not a comma-separated list of numbers") from exc


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="flat key=value run configuration")
    for flag, key, help_text in RUN_FLAGS:
        parser.add_argument(flag, dest=key, default=None, help=help_text)
    for flag, key, help_text in RUN_SWITCHES:
        parser.add_argument(flag, dest=key, action="store_const", const="true", default=None, help=help_text)


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    keys = [key for _, key, _ in RUN_FLAGS + RUN_SWITCHES]
    overrides = {key: getattr(args, key) for key in keys if getattr(args, key, None) is not None}
    if "trace" in overrides and "workload" not in overrides:
        overrides["workload"] = WorkloadKind.trace.value
    return overrides


@contextmanager
def _output(path: Path | None):
    if path is None:
        yield sys.stdout
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as stream:
        yield stream


def cmd_replay(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, _overrides(args))
    runner = ReplayRunner(config)
    result = runner.replay()
    if config.output_dir is None:
        write_rows(sys.stdout, result_rows(result), RESULT_COLUMNS)
    else:
        ResultWriter(config.output_dir).write(config, result, runner.gc_logs)
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    axes = parse_axes(args.axis or [])
    if not axes:
        raise ConfigError("sweep needs at least one --axis key=v1,v2")
    overrides = _overrides(args)
    base = load_run_config(args.config, overrides)
    columns = list(axes) + [column for column in RESULT_COLUMNS if column not in axes]
    target = None if base.output_dir is None else base.output_dir / "sweep.csv"

    rows: list[dict[str, Any]] = []
    try:
        sweep(axes, args.config, overrides, on_row=rows.append)
    finally:
        with _output(target) as stream:
            write_rows(stream, rows, columns)
    return 0


def cmd_math(args: argparse.Namespace) -> int:
    rows = list(
        probability_grid(
            args.kind,
            alphas=_floats(args.alpha),
            first_gib=_floats(args.first),
            second_gib=_floats(args.second) if args.second else [0.0],
            n=args.lbas,
        )
    )
    with _output(args.output) as stream:
        write_rows(stream, rows, list(rows[0]) if rows else ["kind"])
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, _overrides(args))
    spec: SyntheticSpec = config.workload.synthetic
    if config.workload.kind == WorkloadKind.zipf:
        lbas = gen_zipf(spec)
    else:
        lbas = gen_two_region(spec)
    records = (
        WriteRecord(timestamp=index, volume_id=args.volume_id, offset=int(lba) * BLOCK_SIZE, length=BLOCK_SIZE)
        for index, lba in enumerate(lbas)
    )
    with _output(args.output) as stream:
        serialize(records, stream, header=True)
    Loggable.log().info(f"generated {len(lbas)} writes over {spec.wss_blocks} blocks")
    return 0


def _trace_streams(args: argparse.Namespace) -> dict[str, np.ndarray]:
    volumes = [item.strip() for item in args.volumes.split(",")] if args.volumes else None
    return TraceReader(args.trace, args.format, args.columns).volume_writes(volumes)


def cmd_annotate(args: argparse.Namespace) -> int:
    for volume_id, lbas in _trace_streams(args).items():
        path = annotate_bits(lbas, volume_id=volume_id).save(args.out)
        Loggable.log().info(f"annotated {len(lbas)} writes of volume {volume_id} -> {path}")
    return 0


def cmd_filter(args: argparse.Namespace) -> int:
    stats = [compute_volume_stats(volume_id, lbas) for volume_id, lbas in _trace_streams(args).items()]
    kept = set(
        filter_volumes(stats, wss_min_bytes=parse_size(args.wss_min, "wss_min"), traffic_multiple=args.traffic_multiple)
    )
    rows = [{**item.model_dump(), "kept": item.volume_id in kept} for item in stats]
    columns = ["volume_id", "wss_blocks", "traffic_blocks", "update_wss_blocks", "update_traffic_blocks", "kept"]
    with _output(args.output) as stream:
        write_rows(stream, rows, columns)
    return 0


def _optional(compute: Callable[[], float]) -> float | None:
    try:
        return compute()
    except EmptyWorkloadError:
        return None


def cmd_stats(args: argparse.Namespace) -> int:
    config = load_run_config(args.config, _overrides(args))
    fractions = _floats(args.fractions)
    report: dict[str, Any] = {}
    for volume_id, lbas in ReplayRunner(config).volume_streams().items():
        table = LifespanTable.from_trace(annotate_bits(lbas, volume_id=volume_id))
        wss = int(np.unique(lbas).size)
        user_grid = [
            {"u0": u0, "v0": v0, "probability": _optional(lambda u0=u0, v0=v0: empirical_cond_prob_user(table, u0 * wss, v0 * wss))}
            for u0 in fractions
            for v0 in fractions
        ]
        gc_grid = [
            {"g0": g0, "r0": r0, "probability": _optional(lambda g0=g0, r0=r0: empirical_cond_prob_gc(table, g0 * wss, r0 * wss))}
            for g0 in fractions
            for r0 in fractions
        ]
        report[volume_id] = {
            "observations": observation_stats(table, wss).model_dump(),
            "user_write_probability": user_grid,
            "gc_write_probability": gc_grid,
        }
    with _output(args.output) as stream:
        json.dump(report, stream, indent=2)
        stream.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsgc",
        description="Garbage collection and data placement simulator for log-structured block storage",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    replay = commands.add_parser("replay", help="replay a workload through one scheme")
    _add_run_flags(replay)
    replay.set_defaults(handler=cmd_replay)

    sweep_parser = commands.add_parser("sweep", help="replay the cartesian product of parameter axes")
    _add_run_flags(sweep_parser)
    sweep_parser.add_argument("--axis", action="append", help="key=v1,v2 (repeatable)")
    sweep_parser.set_defaults(handler=cmd_sweep)

    math_parser = commands.add_parser("math", help="closed-form lifespan probabilities under Zipf writes")
    math_parser.add_argument("--kind", choices=["user", "gc", "traffic"], default="user")
    math_parser.add_argument("--alpha", default="0,0.2,0.4,0.6,0.8,1")
    math_parser.add_argument("--first", default="0.25,0.5,1,2,4", help="u0 / g0 in GiB, or top fractions for traffic")
    math_parser.add_argument("--second", default="0.25,0.5,1,2,4", help="v0 / r0 in GiB")
    math_parser.add_argument("--lbas", type=int, default=DEFAULT_LBAS, help="unique LBAs of the model")
    math_parser.add_argument("--output", type=Path, default=None)
    math_parser.set_defaults(handler=cmd_math)

    gen = commands.add_parser("gen", help="write a synthetic workload as native CSV")
    _add_run_flags(gen)
    gen.add_argument("--volume-id", default="synthetic")
    gen.add_argument("--output", type=Path, default=None)
    gen.set_defaults(handler=cmd_gen)

    for name, handler, help_text in [
        ("annotate", cmd_annotate, "write per-volume lifespan sidecars"),
        ("filter", cmd_filter, "report per-volume WSS/traffic and the volume filter verdict"),
    ]:
        command = commands.add_parser(name, help=help_text)
        command.add_argument("--trace", type=Path, required=True)
        command.add_argument("--format", default=TraceFormat.native.value, choices=list(TraceFormat))
        command.add_argument("--columns", default=None)
        command.add_argument("--volumes", default=None)
        command.set_defaults(handler=handler)
        if name == "annotate":
            command.add_argument("--out", type=Path, required=True)
        else:
            command.add_argument("--wss-min", default="10GiB")
            command.add_argument("--traffic-multiple", type=float, default=2.0)
            command.add_argument("--output", type=Path, default=None)

    stats = commands.add_parser("stats", help="lifespan observations and empirical probabilities (JSON)")
    _add_run_flags(stats)
    stats.add_argument("--fractions", default="0.1,0.25,0.5,1,2", help="u0/v0/g0/r0 as fractions of the WSS")
    stats.add_argument("--output", type=Path, default=None)
    stats.set_defaults(handler=cmd_stats)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except LsgcError as exc:
        Loggable.log().error(f"{exc.payload.code}: {exc.payload.message}")
        return exc.exit_code
