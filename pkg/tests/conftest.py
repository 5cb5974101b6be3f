"""
pytest configuration for the negprob suite.
"""

import json

import pytest

from negprob.documents import SpaceDocument
from negprob.fixtures import fixture
from negprob.wigner import PhaseGrid, coherent_state, hermite_state, wigner_density


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )


@pytest.fixture
def piponi():
    return fixture("piponi")


@pytest.fixture
def schneider():
    return fixture("schneider")


@pytest.fixture
def hardy():
    return fixture("hardy")


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON-able object (or a document model) to a file and return its path"""
    def write(name, payload):
        path = tmp_path / name
        if isinstance(payload, SpaceDocument):
            path.write_text(payload.canonical_json())
        else:
            path.write_text(json.dumps(payload, indent=2))
        return str(path)
    return write


@pytest.fixture
def fixture_file(write_json):
    """Path to a fixture written as a SpaceDocument"""
    def make(name, state=None):
        return write_json(f"{name}.json", SpaceDocument.from_space(fixture(name, state).space))
    return make


# Phase-space states and their 256x256 fields are shared across the Wigner tests

@pytest.fixture(scope="session")
def gaussian():
    return hermite_state(0)


@pytest.fixture(scope="session")
def first_excited():
    return hermite_state(1)


@pytest.fixture(scope="session")
def default_grid():
    return PhaseGrid.default()


@pytest.fixture(scope="session")
def gaussian_field(gaussian, default_grid):
    return wigner_density(gaussian, default_grid)


@pytest.fixture(scope="session")
def excited_field(first_excited, default_grid):
    return wigner_density(first_excited, default_grid)


@pytest.fixture(scope="session")
def coherent():
    """Displaced Gaussian off both axes"""
    return coherent_state(1.0, 0.7)


@pytest.fixture(scope="session")
def coherent_grid():
    return PhaseGrid(-7.0, 9.0, 256, -7.3, 8.7, 256)


@pytest.fixture(scope="session")
def coherent_field(coherent, coherent_grid):
    return wigner_density(coherent, coherent_grid)
