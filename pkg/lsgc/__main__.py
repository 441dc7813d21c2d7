from __future__ import annotations

import sys

from lsgc.cli.app import main as run_cli
from lsgc.core.config import load_settings
from lsgc.utils.loggable import Loggable


def main() -> None:
    try:
        settings = load_settings()
    except ValueError as exc:
        print(f"CONFIG_ERROR: {exc}", file=sys.stderr)
        raise SystemExit(2) from exc
    Loggable.setup_logs(
        log_path=settings.log_path,
        console_log_level=settings.log_level,
        file_log_level=settings.file_log_level,
    )
    raise SystemExit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
