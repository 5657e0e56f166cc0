import os

import pytest

from zetasum.numctx import NumericContext
from zetasum.zeros import load_or_compute


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory):
    """Zeros cache shared by the whole session.  Point ZETASUM_TEST_CACHE at a
    persistent directory to skip the expensive zero searches across runs."""
    env = os.environ.get("ZETASUM_TEST_CACHE")
    if env:
        os.makedirs(env, exist_ok=True)
        return env
    return str(tmp_path_factory.mktemp("zeros-cache"))


@pytest.fixture(scope="session")
def ctx96():
    return NumericContext(96)


@pytest.fixture(scope="session")
def ctx128():
    return NumericContext(128)


@pytest.fixture(scope="session")
def ctx192():
    return NumericContext(192)


@pytest.fixture(scope="session")
def ctx256():
    return NumericContext(256)


@pytest.fixture(scope="session")
def store30_96(ctx96, cache_dir):
    return load_or_compute(30, ctx96, cache_dir)


@pytest.fixture(scope="session")
def store40_192(ctx192, cache_dir):
    return load_or_compute(40, ctx192, cache_dir)


@pytest.fixture(scope="session")
def store500_192(ctx192, cache_dir):
    return load_or_compute(500, ctx192, cache_dir)
