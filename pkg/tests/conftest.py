from __future__ import annotations
import os
from pathlib import Path

os.environ.setdefault("GRAPHPE_LOG_LEVEL", "WARNING")
os.environ.setdefault("GRAPHPE_LOG_JSON", "1")

import numpy as np
import pytest

from graphpe.config import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    """Drop cached Settings so monkeypatched env vars take effect."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def write_csv(tmp_path: Path):
    """Write text to a CSV file under tmp_path and return its path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
