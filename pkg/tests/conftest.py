"""Shared test fixtures and utilities for all tests."""

import logging
from pathlib import Path

import pytest

from noether_kit.config import AnalysisConfig
from noether_kit.symmetry import build_family
from noether_kit.trajectory import build_trajectory, smooth_arc
from noether_kit.variational import build_system

# Try to import tomllib (Python 3.11+) or fall back to tomli
try:
    import tomllib
except ImportError:
    try:
        import tomli as tomllib
    except ImportError:
        tomllib = None

CORPUS_DIR = Path(__file__).parent.parent / "noether_kit" / "corpus"

COUNTEREXAMPLE_L = "(v1^2 - 1)^2"


def pytest_configure(config):
    """Configure pytest with custom data."""
    repo_root = Path(__file__).parent.parent
    problems = sorted(CORPUS_DIR.glob("*.json"))
    config._problem_files = [(p, p.relative_to(repo_root)) for p in problems]

    root_pyproject = repo_root / "pyproject.toml"
    config._pyproject_files = [root_pyproject] if root_pyproject.exists() else []


@pytest.fixture(scope="session")
def repo_root():
    """Get repository root path."""
    return Path(__file__).parent.parent


@pytest.fixture(scope="session")
def corpus_dir():
    """Directory of the bundled problem files."""
    return CORPUS_DIR


@pytest.fixture(scope="session")
def all_pyproject_files(repo_root):
    """Get the repository pyproject.toml."""
    root_pyproject = repo_root / "pyproject.toml"
    return [root_pyproject] if root_pyproject.exists() else []


@pytest.fixture(scope="session")
def config():
    return AnalysisConfig()


@pytest.fixture(scope="session")
def counterexample():
    """The time-invariant nonsmooth problem L = (v1^2 - 1)^2 on [0, 1]."""
    return build_system(1, (0.0, 1.0), COUNTEREXAMPLE_L)


@pytest.fixture(scope="session")
def free_particle():
    return build_system(1, (0.0, 1.0), "v1^2/2")


@pytest.fixture(scope="session")
def oscillator():
    return build_system(1, (0.0, 6.283185307179586), "v1^2/2 - x1^2/2")


@pytest.fixture(scope="session")
def time_translation(counterexample):
    return build_family(counterexample, "t + s", ["x1"])


@pytest.fixture(scope="session")
def zigzag():
    return build_trajectory(1, (0.0, 1.0), [0, 0.5, 1], [["t"], ["1 - t"]], name="zigzag")


@pytest.fixture(scope="session")
def plateau():
    return build_trajectory(1, (0.0, 1.0), [0, "1/3", "2/3", 1], [["t"], ["1/3"], ["1 - t"]], name="plateau")


@pytest.fixture(scope="session")
def rest():
    return smooth_arc(1, (0.0, 1.0), ["0"], name="rest")


@pytest.fixture(autouse=True)
def reset_package_logger():
    """Undo configure_logging() so caplog sees package records in every test."""
    yield
    logger = logging.getLogger("noether_kit")
    logger.handlers.clear()
    logger.setLevel(logging.NOTSET)
    logger.propagate = True


# Make tomllib available to all tests
@pytest.fixture(scope="session")
def toml_parser():
    """Get TOML parser (tomllib or tomli)."""
    if tomllib is None:
        pytest.skip("No TOML parser available (need tomllib or tomli)")
    return tomllib
