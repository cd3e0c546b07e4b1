import random

import pytest

from symfano.schemas import fixture_path, read_json


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture
def fixture_data():
    def load(name):
        return read_json(fixture_path(name))

    return load


def pytest_addoption(parser):
    parser.addoption(
        "--property-cases",
        type=int,
        default=200,
        help="iterations per randomized property suite",
    )


@pytest.fixture
def property_cases(request):
    return request.config.getoption("--property-cases")
