from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from reebspace.generate import split_fan_mesh, toy_mesh
from reebspace.oracle import full_arrange_and_traverse
from reebspace.pipeline import singular_reeb_space

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

# vertex indices of the toy fan
A, B, V1, V2, V3, V4, V5 = range(7)


@pytest.fixture(scope="session")
def t7():
    return toy_mesh()


@pytest.fixture(scope="session")
def t7_singular(t7):
    return singular_reeb_space(t7)


@pytest.fixture(scope="session")
def t7_full(t7):
    return full_arrange_and_traverse(t7)


@pytest.fixture(scope="session")
def split_fan():
    return split_fan_mesh()
