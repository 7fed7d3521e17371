import pytest

from anss3.hopfalg import derive_structure_maps
from anss3.greek import Workbench


@pytest.fixture(scope="session")
def maps52():
    return derive_structure_maps(52, 5)


@pytest.fixture(scope="session")
def bench(maps52):
    """Shared medium window bench: big enough for the Greek-letter range."""
    return Workbench(maps52, 38, 8)
