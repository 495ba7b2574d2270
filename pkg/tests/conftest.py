"""Global test configuration and fixtures for pytest"""

import tempfile
from pathlib import Path

import pytest

from src.arrangement import Arrangement, builtin_arrangement
from src.config import ComputationSettings, LoggingSettings, LogderivConfig


def pytest_configure(config):
    """Configure pytest with custom markers"""
    config.addinivalue_line("markers", "load: mark test as load/performance test")


@pytest.fixture
def temp_dir():
    """Create temporary directory for test files"""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def test_config() -> LogderivConfig:
    """Basic test configuration"""
    return LogderivConfig(
        computation=ComputationSettings(grid_cap=10, default_dmax=4, df_search_limit=6),
        logging=LoggingSettings(level="DEBUG"),
    )


@pytest.fixture(scope="session")
def pappus() -> Arrangement:
    return builtin_arrangement("pappus")


@pytest.fixture(scope="session")
def nonpappus() -> Arrangement:
    return builtin_arrangement("nonpappus")


@pytest.fixture(scope="session")
def ziegler() -> Arrangement:
    return builtin_arrangement("ziegler")


@pytest.fixture(scope="session")
def ziegler2() -> Arrangement:
    return builtin_arrangement("ziegler2")


@pytest.fixture(scope="session")
def pencil() -> Arrangement:
    """Three lines through the origin: x = 0, y = 0, x - y = 0"""
    return Arrangement.from_coefficients([(1, 0, 0), (0, 1, 0), (1, -1, 0)], name="pencil")


@pytest.fixture(scope="session")
def builtins(pappus, nonpappus, ziegler, ziegler2):
    return {
        "pappus": pappus,
        "nonpappus": nonpappus,
        "ziegler": ziegler,
        "ziegler2": ziegler2,
    }


@pytest.fixture
def write_arrangement(temp_dir):
    """Write arrangement text to a file and return its path"""

    def _write(text: str, name: str = "arrangement.txt") -> Path:
        path = temp_dir / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
