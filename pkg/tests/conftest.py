import functools
import random

import pytest

from clusteratlas import EnumerationLimits, enumerate_atlas, preset


def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        type=int,
        default=None,
        help="seed for the randomized tests (default: random, printed in the header)",
    )


def pytest_configure(config):
    seed = config.getoption("--seed")
    if seed is None:
        seed = random.SystemRandom().randrange(2**32)
    config._cluster_seed = seed


def pytest_report_header(config):
    return f"randomized tests: --seed {config._cluster_seed}"


@pytest.fixture
def seed(request):
    return request.config._cluster_seed


@pytest.fixture
def rng(seed):
    return random.Random(seed)


@functools.lru_cache(maxsize=None)
def atlas_for(name, max_depth=64, workers=1):
    return enumerate_atlas(preset(name), EnumerationLimits(max_depth=max_depth), workers=workers)


@pytest.fixture(scope="session")
def a2():
    return atlas_for("a2")


@pytest.fixture(scope="session")
def a3():
    return atlas_for("a3")
