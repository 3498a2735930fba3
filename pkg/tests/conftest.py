"""
Shared pytest configuration and fixtures for all tests.
"""
import json
import os
import sys
from math import asin
from pathlib import Path

import numpy as np
import pytest

# Add the project root to the Python path so ``src.`` imports resolve
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

os.environ.setdefault("ENVIRONMENT", "testing")

WEAK_THETA = asin(0.1)


@pytest.fixture(scope="session")
def project_root_path():
    """Provide the project root path."""
    return project_root


@pytest.fixture(scope="session")
def schemas_path():
    """Provide the directory of published report schemas."""
    return project_root / "schemas"


@pytest.fixture(scope="session")
def fixtures_path():
    return Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def sample_configs(fixtures_path):
    """Named configuration documents from fixtures/sample_configs.json."""
    with open(fixtures_path / "sample_configs.json", encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture
def write_config(tmp_path, sample_configs):
    """Write a named sample configuration to a temporary file and return its path."""

    def _write(name: str) -> str:
        path = tmp_path / f"{name}.json"
        path.write_text(json.dumps(sample_configs[name], indent=2), encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture
def weak_theta():
    """Marker angle with sin(theta) = 0.1."""
    return WEAK_THETA


@pytest.fixture
def default_config():
    from src.interferometer.config import NestedMziConfig

    return NestedMziConfig()


@pytest.fixture
def marked_config(default_config):
    """Equal weak markers on A, B and C."""
    from src.interferometer.config import equal_markers

    return default_config.with_markers(equal_markers(WEAK_THETA))


@pytest.fixture
def rng():
    return np.random.default_rng(20170817)
