import pytest

from gaptiles.grid import HeightTable


@pytest.fixture(scope="session")
def table():
    """One in-memory height table shared across the whole test session."""
    return HeightTable()
