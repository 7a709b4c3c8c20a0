"""Floquet channel grid and step-matched free solutions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .potentials import ParticleSpec

THRESHOLD_NUDGE = 1e-12


@dataclass(frozen=True)
class ChannelGrid:
    """Channels n in [-N, N] with branch Im k >= 0.

    k_left[i] = sqrt(2 mu (E + n w)), k_right[i] = sqrt(2 mu (E + n w + V1)),
    i = n + N.  The incident channel n = 0 must be open on the left.
    """

    energy: float
    omega: float
    mass: float
    half_width: int
    v1: float
    k_left: np.ndarray
    k_right: np.ndarray
    open_left: np.ndarray
    open_right: np.ndarray
    threshold_regularized: bool
    requested_energy: float

    @property
    def n_channels(self) -> int:
        return 2 * self.half_width + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    def index_of(self, n: int) -> int:
        if abs(n) > self.half_width:
            raise ValueError(f"channel {n} outside |n| <= {self.half_width}")
        return n + self.half_width


def build_grid(
    energy: float, omega: float, particle: ParticleSpec, v1: float, half_width: int
) -> ChannelGrid:
    """Channel grid with threshold regularization.

    An energy landing exactly on a channel threshold (E + n w = 0 or
    E + n w + V1 = 0) is nudged by +1e-12 w so the matching constants
    C_n = -i/(k_n + k_n^R) and flux factors stay finite; the result is
    flagged threshold_regularized.
    """
    if not (energy > 0):
        raise ValueError(f"incident energy must be positive, got {energy}")
    if half_width < 0:
        raise ValueError("channel half-width must be >= 0")
    if half_width > 0 and not (omega > 0):
        raise ValueError("omega must be positive for a multi-channel grid")

    ns = np.arange(-half_width, half_width + 1)
    scale = omega if omega > 0 else energy
    e_eff = energy
    regularized = False
    for _ in range(4):
        left = e_eff + ns * omega
        right = left + v1
        tol = THRESHOLD_NUDGE * scale
        if np.min(np.abs(left)) < tol or np.min(np.abs(right)) < tol:
            e_eff = e_eff + THRESHOLD_NUDGE * scale
            regularized = True
        else:
            break
    left = e_eff + ns * omega
    right = left + v1
    two_mu = 2.0 * particle.mass
    k_left = np.sqrt((two_mu * left).astype(complex))
    k_right = np.sqrt((two_mu * right).astype(complex))
    return ChannelGrid(
        energy=e_eff,
        omega=omega,
        mass=particle.mass,
        half_width=half_width,
        v1=v1,
        k_left=k_left,
        k_right=k_right,
        open_left=left > 0,
        open_right=right > 0,
        threshold_regularized=regularized,
        requested_energy=energy,
    )


def matching_constant(grid: ChannelGrid, n: int) -> complex:
    i = grid.index_of(n)
    return -1j / (grid.k_left[i] + grid.k_right[i])


def free_solutions(grid: ChannelGrid, n: int, y: float) -> Tuple[complex, complex]:
    """(phi1, phi2) for channel n at position y; step sits at the origin.

    phi2 carries unit transmission e^{i k^R y} on the right, phi1 unit
    outgoing e^{-i k y} on the left; both are C1 across the step.
    """
    i = grid.index_of(n)
    k = grid.k_left[i]
    kr = grid.k_right[i]
    with np.errstate(over="ignore", invalid="ignore"):
        if y < 0:
            phi1 = np.exp(-1j * k * y)
            phi2 = 0.5 * (1 + kr / k) * np.exp(1j * k * y) + 0.5 * (
                1 - kr / k
            ) * np.exp(-1j * k * y)
        else:
            phi2 = np.exp(1j * kr * y)
            phi1 = 0.5 * (1 - k / kr) * np.exp(1j * kr * y) + 0.5 * (
                1 + k / kr
            ) * np.exp(-1j * kr * y)
    return complex(phi1), complex(phi2)
