import numpy as np
import pytest

from triwell.potentials import TrajectorySpec, TrapParams
from triwell.spectral import Grid1D, coupling_schedule


@pytest.fixture(scope="session")
def grid512():
    return Grid1D(n=512)


@pytest.fixture(scope="session")
def grid1024():
    return Grid1D(n=1024)


@pytest.fixture(scope="session")
def trap():
    return TrapParams()


@pytest.fixture(scope="session")
def fig1_traj():
    """The reference transport schedule: d 9 -> 1.5, t_r = 300, delay 120."""
    return TrajectorySpec.symmetric()


@pytest.fixture(scope="session")
def fig1_schedule(fig1_traj, grid512):
    return coupling_schedule(fig1_traj, grid=grid512, n_samples=241)


def grid_norm(psi, grid):
    return float(np.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx))
