from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ErrorPayload:
    code: str
    message: str


class LsgcError(Exception):
    """Base error; `exit_code` is what the CLI returns when this escapes a command."""

    def __init__(self, exit_code: int, code: str, message: str):
        super().__init__(message)
        self.exit_code = exit_code
        self.payload = ErrorPayload(code=code, message=message)


class SimulationError(LsgcError):
    def __init__(self, message: str, code: str = "SIMULATION_ERROR"):
        super().__init__(exit_code=1, code=code, message=message)


class SelectionError(SimulationError):
    def __init__(self, message: str = "no GC victim available"):
        super().__init__(message=message, code="NO_VICTIM")


class ClockOverflowError(SimulationError):
    def __init__(self, message: str = "clock counter overflow"):
        super().__init__(message=message, code="CLOCK_OVERFLOW")


class ConfigError(LsgcError):
    def __init__(self, message: str, code: str = "CONFIG_ERROR"):
        super().__init__(exit_code=2, code=code, message=message)


class DataError(LsgcError):
    def __init__(self, message: str, code: str = "DATA_ERROR"):
        super().__init__(exit_code=3, code=code, message=message)


class TraceFormatError(DataError):
    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}", code="TRACE_FORMAT")
        self.line_number = line_number


class AnnotationMissingError(DataError):
    def __init__(self, message: str = "write has no lifespan annotation"):
        super().__init__(message, code="ANNOTATION_MISSING")


class EmptyWorkloadError(DataError):
    def __init__(self, message: str):
        super().__init__(message, code="EMPTY_WORKLOAD")


class LbaOutOfRangeError(DataError):
    def __init__(self, lba: int, lba_space: int):
        super().__init__(
            f"lba {lba} outside volume LBA space of {lba_space} blocks",
            code="LBA_OUT_OF_RANGE",
        )
