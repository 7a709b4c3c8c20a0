"""Coupled Floquet-channel solver for tunneling through driven barriers."""

from .potentials import (
    DriveField,
    ParticleSpec,
    PotentialSpec,
    Rectangular,
    Tabulated,
    TruncatedCoulomb,
    dt_reduced,
    electron,
    evaluate,
    rectangular_ev_nm,
    to_natural_field,
    truncated_coulomb_mev_fm,
)
from .kh import FourierPotential, QuiverMotion, fourier_coefficients, kh_displacement
from .channels import ChannelGrid, build_grid, free_solutions
from .solver import (
    AdaptiveOutcome,
    ScatteringResult,
    SolverError,
    SolverSettings,
    adaptive_channel_count,
    relative_enhancement,
    solve_scattering,
    static_reference,
    time_averaged_transmission,
    total_transmission,
)
from .units import UnitContext

__version__ = "0.1.0"

__all__ = [
    "AdaptiveOutcome",
    "ChannelGrid",
    "DriveField",
    "FourierPotential",
    "ParticleSpec",
    "PotentialSpec",
    "QuiverMotion",
    "Rectangular",
    "ScatteringResult",
    "SolverError",
    "SolverSettings",
    "Tabulated",
    "TruncatedCoulomb",
    "UnitContext",
    "adaptive_channel_count",
    "build_grid",
    "dt_reduced",
    "electron",
    "evaluate",
    "fourier_coefficients",
    "free_solutions",
    "kh_displacement",
    "rectangular_ev_nm",
    "relative_enhancement",
    "solve_scattering",
    "static_reference",
    "time_averaged_transmission",
    "to_natural_field",
    "total_transmission",
    "truncated_coulomb_mev_fm",
]
