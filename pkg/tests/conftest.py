import numpy as np
import pytest

from curved_rs import spacetimes
from curved_rs.identity_suite import sample_points


@pytest.fixture(scope="session")
def minkowski():
    return spacetimes.load_preset("minkowski_cartesian")


@pytest.fixture(scope="session")
def minkowski_spherical():
    return spacetimes.load_preset("minkowski_spherical")


@pytest.fixture(scope="session")
def schwarzschild():
    return spacetimes.load_preset("schwarzschild", M=1.0)


@pytest.fixture(scope="session")
def de_sitter():
    return spacetimes.load_preset("de_sitter_static", alpha=1.0)


@pytest.fixture(scope="session")
def anti_de_sitter():
    return spacetimes.load_preset("anti_de_sitter_static", alpha=1.0)


@pytest.fixture(scope="session")
def frw_dust():
    return spacetimes.load_preset("frw_dust", a0=1.0)


@pytest.fixture(scope="session")
def all_presets(minkowski, minkowski_spherical, schwarzschild, de_sitter,
                anti_de_sitter, frw_dust):
    return [minkowski, minkowski_spherical, schwarzschild, de_sitter,
            anti_de_sitter, frw_dust]


def points_of(spec, n=5, seed=1234):
    return sample_points(spec, n, seed)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(99)
