"""Particle, drive and barrier specifications.

Potentials follow one incidence convention: the wave always arrives from the
left, the left asymptotic level is 0 and the right asymptotic level is -V1.
The truncated Coulomb barrier is therefore mirrored: large separation r maps
to x -> -inf and the nuclear region r < r0 sits at x -> +inf on level -V1,
with the barrier peak alpha/r0 at x = r0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .units import field_si_to_natural

ELECTRON_MASS_EV = 510998.95
DT_REDUCED_MASS_EV = 1.13e9
DT_CHARGE_FACTOR = 0.2  # q_eff = q (m_T - m_D)/(m_T + m_D), close to q/5
COULOMB_STRENGTH_MEV_FM = 1.43996  # e^2 / (4 pi eps0) for unit charges


@dataclass(frozen=True)
class ParticleSpec:
    """Tunneling particle: mass (eV) and drive coupling in units of e."""

    mass: float
    charge_factor: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0):
            raise ValueError(f"mass must be positive, got {self.mass}")
        if not math.isfinite(self.charge_factor):
            raise ValueError("charge_factor must be finite")


def electron() -> ParticleSpec:
    return ParticleSpec(mass=ELECTRON_MASS_EV, charge_factor=1.0)


def dt_reduced() -> ParticleSpec:
    """Deuterium-tritium relative motion: reduced mass, effective charge."""
    return ParticleSpec(mass=DT_REDUCED_MASS_EV, charge_factor=DT_CHARGE_FACTOR)


@dataclass(frozen=True)
class DriveField:
    """Oscillating field: peak strength in V/m, photon energy in eV."""

    amplitude_si: float
    frequency: float

    def __post_init__(self):
        if self.amplitude_si < 0:
            raise ValueError("amplitude_si must be >= 0")
        if self.amplitude_si != 0 and not (self.frequency > 0):
            raise ValueError("frequency must be > 0 for a nonzero field")


def to_natural_field(drive: DriveField, particle: ParticleSpec) -> float:
    """q * E0 in eV^2."""
    return field_si_to_natural(drive.amplitude_si, particle.charge_factor)


@dataclass(frozen=True)
class Rectangular:
    """Barrier of height V0 on (0, L), level -V1 for x >= L. Natural units."""

    height: float
    length: float
    offset: float = 0.0

    def __post_init__(self):
        if not (self.length > 0):
            raise ValueError("length must be positive")


@dataclass(frozen=True)
class TruncatedCoulomb:
    """Mirrored truncated Coulomb: alpha/(2 r0 - x) for x <= r0, -V1 beyond.

    strength alpha is dimensionless in natural units (energy * length),
    inner_radius r0 in 1/eV, depth V1 in eV.
    """

    strength: float
    inner_radius: float
    depth: float = 0.0

    def __post_init__(self):
        if not (self.strength > 0):
            raise ValueError("strength must be positive")
        if not (self.inner_radius > 0):
            raise ValueError("inner_radius must be positive")


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear barrier from (position, energy) samples.

    The first sample must carry the left asymptotic level 0; the last sample
    defines the right level -V1. Outside the sample range the nearer
    asymptotic level applies.
    """

    samples: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        if len(self.samples) < 2:
            raise ValueError("Tabulated potential needs at least 2 samples")
        xs = [s[0] for s in self.samples]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("sample positions must be strictly increasing")
        if self.samples[0][1] != 0.0:
            raise ValueError("first sample must sit on the left asymptotic level 0")


PotentialSpec = Union[Rectangular, TruncatedCoulomb, Tabulated]


def rectangular_ev_nm(height_ev: float, length_nm: float, offset_ev: float = 0.0) -> Rectangular:
    """Rectangular barrier from eV/nm inputs."""
    from .units import nm_to_natural

    return Rectangular(height=height_ev, length=nm_to_natural(length_nm), offset=offset_ev)


def truncated_coulomb_mev_fm(
    strength_mev_fm: float = COULOMB_STRENGTH_MEV_FM,
    inner_radius_fm: float = 3.89,
    depth_ev: float = 0.0,
) -> TruncatedCoulomb:
    """Truncated Coulomb barrier from MeV*fm / fm inputs."""
    from .units import fm_to_natural, mev_fm_to_natural

    return TruncatedCoulomb(
        strength=mev_fm_to_natural(strength_mev_fm),
        inner_radius=fm_to_natural(inner_radius_fm),
        depth=depth_ev,
    )


def offset_v1(potential: PotentialSpec) -> float:
    """Right asymptotic level is -V1; returns V1."""
    if isinstance(potential, Rectangular):
        return potential.offset
    if isinstance(potential, TruncatedCoulomb):
        return potential.depth
    return -potential.samples[-1][1]


def step_position(potential: PotentialSpec) -> float:
    """Position where the right asymptotic level -V1 is reached."""
    if isinstance(potential, Rectangular):
        return potential.length
    if isinstance(potential, TruncatedCoulomb):
        return potential.inner_radius
    return potential.samples[-1][0]


def support_interval(potential: PotentialSpec) -> Tuple[float, float]:
    """Interval outside which the potential equals its asymptotic levels.

    The Coulomb tail is soft; its lower edge is handled by the solver's
    tail-cutoff policy, so -inf is returned here.
    """
    if isinstance(potential, Rectangular):
        return (0.0, potential.length)
    if isinstance(potential, TruncatedCoulomb):
        return (-math.inf, potential.inner_radius)
    return (potential.samples[0][0], potential.samples[-1][0])


def evaluate(potential: PotentialSpec, x: float) -> float:
    """Potential value at x (natural units), pure and deterministic."""
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if isinstance(potential, Rectangular):
        if x <= 0.0:
            return 0.0
        if x < potential.length:
            return potential.height
        return -potential.offset
    if isinstance(potential, TruncatedCoulomb):
        if x > potential.inner_radius:
            return -potential.depth
        return potential.strength / (2.0 * potential.inner_radius - x)
    xs = np.array([s[0] for s in potential.samples])
    vs = np.array([s[1] for s in potential.samples])
    if x <= xs[0]:
        return float(vs[0])
    if x >= xs[-1]:
        return float(vs[-1])
    return float(np.interp(x, xs, vs))


@dataclass(frozen=True)
class SolverPotential:
    """Potential re-expressed in solver coordinates (step at the origin).

    W(z) = V(z) + V1*Theta(z) vanishes at both infinities; kind selects the
    kernel evaluation path.  Piecewise-constant data uses edges/values with
    values[0] the leftmost level.
    """

    kind: str  # "piecewise" | "coulomb" | "tabulated"
    v1: float
    shift: float  # solver z = user x - shift
    pc_edges: Tuple[float, ...] = ()
    pc_values: Tuple[float, ...] = ()
    alpha: float = 0.0
    r0: float = 0.0
    tab_x: Tuple[float, ...] = ()
    tab_v: Tuple[float, ...] = ()


def to_solver_potential(potential: PotentialSpec) -> SolverPotential:
    v1 = offset_v1(potential)
    shift = step_position(potential)
    if isinstance(potential, Rectangular):
        return SolverPotential(
            kind="piecewise",
            v1=v1,
            shift=shift,
            pc_edges=(-potential.length, 0.0),
            pc_values=(0.0, potential.height, -v1),
        )
    if isinstance(potential, TruncatedCoulomb):
        return SolverPotential(
            kind="coulomb",
            v1=v1,
            shift=shift,
            alpha=potential.strength,
            r0=potential.inner_radius,
        )
    xs = tuple(s[0] - shift for s in potential.samples)
    vs = tuple(s[1] for s in potential.samples)
    return SolverPotential(kind="tabulated", v1=v1, shift=shift, tab_x=xs, tab_v=vs)


def solver_value(sp: SolverPotential, z: float) -> float:
    """Bare potential V(z) in solver coordinates."""
    if sp.kind == "piecewise":
        i = int(np.searchsorted(np.array(sp.pc_edges), z, side="right"))
        return sp.pc_values[i]
    if sp.kind == "coulomb":
        if z > 0.0:
            return -sp.v1
        return sp.alpha / (sp.r0 - z)
    xs = np.array(sp.tab_x)
    vs = np.array(sp.tab_v)
    if z <= xs[0]:
        return float(vs[0])
    if z >= xs[-1]:
        return float(vs[-1])
    return float(np.interp(z, xs, vs))


def localized_value(sp: SolverPotential, z: float) -> float:
    """W(z) = V(z) + V1*Theta(z); vanishes at both infinities."""
    return solver_value(sp, z) + (sp.v1 if z > 0.0 else 0.0)
