import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")

from floquet_barrier.potentials import (
    DriveField,
    ParticleSpec,
    dt_reduced,
    rectangular_ev_nm,
    truncated_coulomb_mev_fm,
)
from floquet_barrier.solver import SolverSettings, solve_scattering

MU_E = 511e3  # electron mass used throughout the checks (511 keV)
L_NAT = 0.2 / 197.3269804


@pytest.fixture(scope="session")
def electron_511() -> ParticleSpec:
    return ParticleSpec(mass=MU_E, charge_factor=1.0)


@pytest.fixture(scope="session")
def rect6() -> "Rectangular":
    return rectangular_ev_nm(6.0, 0.2, 0.0)


@pytest.fixture(scope="session", autouse=True)
def warm_kernels(electron_511, rect6):
    """Compile the numba kernels once so timed assertions stay honest."""
    solve_scattering(
        1.0, rect6, DriveField(1e7, 0.12), electron_511, 2,
        SolverSettings(rel_tol=1e-6, abs_tol=1e-8),
    )
    solve_scattering(
        6e3, truncated_coulomb_mev_fm(), DriveField(0.0, 0.0), dt_reduced(), 0,
        SolverSettings(rel_tol=1e-6, abs_tol=1e-8, tail_tol=0.3),
    )
    from floquet_barrier import kernels

    dummy = np.zeros(1)
    kernels.shoot_static(
        0.0, -1.0, 1.0 + 0j, 1.0, 1.0, 1, dummy, dummy, 0.0, 1e-6, 1e-3,
        dummy, dummy, 1e-6, 1e-9, 100000,
    )
