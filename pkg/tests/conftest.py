import os

import pytest

from logs import LOGS_DIR
from lsgc.core.models import VolumeConfig
from lsgc.core.units import BLOCK_SIZE
from lsgc.utils.loggable import Loggable


@pytest.fixture(scope="session", autouse=True)
def logger():
    Loggable.setup_logs(log_path=LOGS_DIR / "tests.log")


@pytest.fixture(autouse=True)
def clean_lsgc_env(monkeypatch):
    """Keep `LSGC_*` variables of the calling shell out of the tests."""
    for key in list(os.environ):
        if key.startswith("LSGC_"):
            monkeypatch.delenv(key, raising=False)


@pytest.fixture
def small_volume() -> VolumeConfig:
    """Eight-block segments, default 15% GC trigger."""
    return VolumeConfig(segment_size=8 * BLOCK_SIZE)
