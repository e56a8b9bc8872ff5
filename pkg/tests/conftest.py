import math

import numpy as np
import pytest

from ugks1d import (
    KineticState,
    ModelParams,
    SpatialGrid,
    build_grid,
    init_nonequilibrium,
)


@pytest.fixture(scope="session")
def params():
    return ModelParams(a=1.0, theta=1.0, tau=1e-2)


@pytest.fixture(scope="session")
def vgrid(params):
    return build_grid(params)


@pytest.fixture(scope="session")
def sgrid():
    return SpatialGrid.from_length(64, 2.0 * math.pi)


@pytest.fixture(scope="session")
def small_sgrid():
    return SpatialGrid.from_length(8, 2.0 * math.pi)


def make_random_compatible_state(vgrid, sgrid, seed, amplitude=1.0):
    """Compatible state with noise in both u and the velocity structure."""
    rng = np.random.default_rng(seed)
    u = amplitude * rng.uniform(-1.0, 1.0, size=sgrid.I)
    p = amplitude * rng.uniform(-1.0, 1.0, size=(vgrid.size, sgrid.I))
    values = iter(u)
    return init_nonequilibrium(lambda _x: float(next(values)), p, vgrid, sgrid)


def make_state(f, u, time=0.0, step_index=0):
    return KineticState.from_arrays(f=f, u=u, time=time, step_index=step_index)
