from __future__ import annotations

from pathlib import Path

import pytest

from concierge.pipeline import Pipeline

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def demo_pipeline() -> Pipeline:
    return Pipeline.from_config_file(FIXTURES / "config.jsonl")
