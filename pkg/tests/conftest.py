import pytest

from quiverdef.corpus import corpus_get


@pytest.fixture(scope="session")
def d3r1222():
    return corpus_get("D3R", 1, 2, 2, 2).algebra(2)


@pytest.fixture(scope="session")
def d3r1222_p3():
    return corpus_get("D3R", 1, 2, 2, 2).algebra(3)


@pytest.fixture(scope="session")
def d3r1222_entry():
    return corpus_get("D3R", 1, 2, 2, 2)


@pytest.fixture(scope="session")
def table_modules(d3r1222_entry, d3r1222):
    return d3r1222_entry.modules(d3r1222)
