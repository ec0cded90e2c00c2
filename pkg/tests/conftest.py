import pytest

import ksbound as kb


@pytest.fixture(scope="session")
def cabello18():
    return kb.load_catalog("cabello18")


@pytest.fixture(scope="session")
def kernaghan20():
    return kb.load_catalog("kernaghan20")


@pytest.fixture(scope="session")
def kp36():
    return kb.load_catalog("kernaghan-peres36")


@pytest.fixture(scope="session")
def catalog_sets(cabello18, kernaghan20, kp36):
    return (cabello18, kernaghan20, kp36)


@pytest.fixture
def triad():
    return kb.make_set(
        "triad",
        3,
        [("a", (1, 0, 0)), ("b", (0, 1, 0)), ("c", (0, 0, 1))],
        [("a", "b", "c")],
    )


@pytest.fixture
def two_triads():
    # two triads sharing the vector a
    return kb.make_set(
        "two-triads",
        3,
        [
            ("a", (1, 0, 0)),
            ("b", (0, 1, 0)),
            ("c", (0, 0, 1)),
            ("d", (0, 1, 1)),
            ("e", (0, 1, -1)),
        ],
        [("a", "b", "c"), ("a", "d", "e")],
    )
