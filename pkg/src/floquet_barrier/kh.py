"""Kramers-Henneberger displacement and temporal Fourier modes.

In the oscillating frame the barrier sweeps back and forth along the classical
quiver trajectory chi(t) = chi0*cos(omega*t).  The localized dynamic potential

    W(x, t) = V(x - chi(t)) + V1 * Theta(x - x_step)

vanishes at both spatial infinities; its Fourier modes W_n(x) feed the channel
couplings.  For a cosine drive every W_n is real and W_{-n} = W_n.

Two evaluation paths: piecewise-constant barriers use the closed form built
from the arccos crossing times of each edge; smooth/tabulated barriers use
Gauss-Legendre panels split at those crossing times (a swept discontinuity
makes plain uniform quadrature useless at tight tolerances).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .potentials import (
    DriveField,
    ParticleSpec,
    PotentialSpec,
    SolverPotential,
    solver_value,
    step_position,
    to_natural_field,
    to_solver_potential,
)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


class FourierConvergenceError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""

    def __init__(self, achieved: float, requested: float):
        super().__init__(
            f"Fourier coefficient quadrature reached {achieved:.3e}, "
            f"requested {requested:.3e}"
        )
        self.achieved = achieved
        self.requested = requested


@dataclass(frozen=True)
class QuiverMotion:
    """Classical quiver amplitude (1/eV) and drive frequency (eV)."""

    chi0: float
    omega: float

    @classmethod
    def from_drive(cls, drive: DriveField, particle: ParticleSpec) -> "QuiverMotion":
        f = to_natural_field(drive, particle)
        if f == 0.0:
            return cls(chi0=0.0, omega=drive.frequency)
        return cls(chi0=f / (particle.mass * drive.frequency**2), omega=drive.frequency)


def kh_displacement(quiver: QuiverMotion, t: float) -> float:
    """chi(t) = chi0 * cos(omega t)."""
    return quiver.chi0 * math.cos(quiver.omega * t)


def localized_dynamic_potential(
    potential: PotentialSpec, quiver: QuiverMotion, x: float, t: float
) -> float:
    """W(x, t); periodic in t, zero at both spatial infinities."""
    from .potentials import evaluate, offset_v1

    v1 = offset_v1(potential)
    step = v1 if x > step_position(potential) else 0.0
    return evaluate(potential, x - kh_displacement(quiver, t)) + step


def _potential_breakpoints(sp: SolverPotential) -> np.ndarray:
    if sp.kind == "piecewise":
        return np.asarray(sp.pc_edges)
    if sp.kind == "coulomb":
        return np.array([0.0])
    return np.asarray(sp.tab_x)


def _pc_coefficients(sp: SolverPotential, chi0: float, z: float, n_max: int) -> np.ndarray:
    """Closed-form W_n(z), n = 0..n_max, for a piecewise-constant barrier."""
    edges = np.asarray(sp.pc_edges)
    values = np.asarray(sp.pc_values)
    out = np.zeros(n_max + 1)
    if chi0 <= 0.0:
        out[0] = solver_value(sp, z) + (sp.v1 if z > 0.0 else 0.0)
        return out
    # phi_i: where the sweep crosses edge i; monotone increasing with i
    f = np.arccos(np.clip((z - edges) / chi0, -1.0, 1.0))
    bounds = np.concatenate(([0.0], f, [np.pi]))
    n = np.arange(1, n_max + 1)
    s_hi = np.sin(np.outer(n, bounds[1:]))
    s_lo = np.sin(np.outer(n, bounds[:-1]))
    out[1:] = (s_hi - s_lo) @ values / (n * np.pi)
    out[0] = values @ (bounds[1:] - bounds[:-1]) / np.pi
    if z > 0.0:
        out[0] += sp.v1
    return out


def _swept_quad(
    sp: SolverPotential, chi0: float, z: float, n_max: int, panel_factor: int = 1
) -> np.ndarray:
    """Panel Gauss-Legendre W_n(z), n = 0..n_max, split at edge crossings."""
    out = np.zeros(n_max + 1)
    if chi0 <= 0.0:
        out[0] = solver_value(sp, z) + (sp.v1 if z > 0.0 else 0.0)
        return out
    breaks = _potential_breakpoints(sp)
    f = np.arccos(np.clip((z - breaks) / chi0, -1.0, 1.0))
    bounds = np.unique(np.concatenate(([0.0], f, [np.pi])))
    nodes = []
    weights = []
    per_period = 6.0 * np.pi / max(n_max, 1)
    for a, b in zip(bounds[:-1], bounds[1:]):
        w = b - a
        if w <= 1e-15:
            continue
        panels = panel_factor * max(2, int(np.ceil(w / per_period)) + 1)
        sub = a + w * (np.arange(panels) / panels)
        half = w / panels / 2.0
        for s in sub:
            nodes.append(s + half + half * _GL_NODES)
            weights.append(half * _GL_WEIGHTS)
    phi = np.concatenate(nodes)
    wq = np.concatenate(weights)
    zeta = z - chi0 * np.cos(phi)
    g = _value_vec(sp, zeta)
    cosmat = np.cos(np.outer(np.arange(n_max + 1), phi))
    out = (cosmat * wq) @ g / np.pi
    if z > 0.0:
        out[0] += sp.v1
    return out


def _value_vec(sp: SolverPotential, zeta: np.ndarray) -> np.ndarray:
    """Vectorized bare potential V(zeta) in solver coordinates."""
    if sp.kind == "piecewise":
        idx = np.searchsorted(np.asarray(sp.pc_edges), zeta, side="right")
        return np.asarray(sp.pc_values)[idx]
    if sp.kind == "coulomb":
        return np.where(zeta > 0.0, -sp.v1, sp.alpha / (sp.r0 - np.minimum(zeta, 0.0)))
    return np.interp(zeta, np.asarray(sp.tab_x), np.asarray(sp.tab_v))


def coefficients_real_batch(
    sp: SolverPotential, chi0: float, zs: np.ndarray, n_max: int, panel_factor: int = 1
) -> np.ndarray:
    """W_n(z) for many z at once: shape (len(zs), n_max + 1).

    Positions whose sweep window [z - chi0, z + chi0] contains no potential
    breakpoint share one smooth panel decomposition of [0, pi] and are
    evaluated as a single matrix product; edge-straddling positions fall back
    to the per-position split quadrature.
    """
    zs = np.asarray(zs, dtype=float)
    out = np.empty((zs.shape[0], n_max + 1))
    if chi0 <= 0.0:
        g = _value_vec(sp, zs)
        out[:] = 0.0
        out[:, 0] = g + np.where(zs > 0.0, sp.v1, 0.0)
        return out
    if sp.kind == "piecewise":
        for i, z in enumerate(zs):
            out[i] = _pc_coefficients(sp, chi0, float(z), n_max)
        return out
    breaks = _potential_breakpoints(sp)
    straddles = np.zeros(zs.shape[0], dtype=bool)
    for c in breaks:
        straddles |= np.abs(zs - c) < chi0
    smooth = ~straddles
    if np.any(smooth):
        per_period = 6.0 * np.pi / max(n_max, 1)
        panels = panel_factor * max(2, int(np.ceil(np.pi / per_period)) + 1)
        half = np.pi / panels / 2.0
        starts = np.pi * np.arange(panels) / panels
        phi = (starts[:, None] + half + half * _GL_NODES[None, :]).ravel()
        wq = np.tile(half * _GL_WEIGHTS, panels)
        zeta = zs[smooth, None] - chi0 * np.cos(phi)[None, :]
        g = _value_vec(sp, zeta.ravel()).reshape(zeta.shape)
        cosmat = np.cos(np.outer(phi, np.arange(n_max + 1)))
        out[smooth] = g @ (cosmat * wq[:, None]) / np.pi
        out[smooth, 0] += np.where(zs[smooth] > 0.0, sp.v1, 0.0)
    for i in np.where(straddles)[0]:
        out[i] = _swept_quad(sp, chi0, float(zs[i]), n_max, panel_factor)
    return out


def coefficients_real(
    sp: SolverPotential, chi0: float, z: float, n_max: int, panel_factor: int = 1
) -> np.ndarray:
    """W_n(z) for n = 0..n_max in solver coordinates (real for cosine drive)."""
    if sp.kind == "piecewise":
        return _pc_coefficients(sp, chi0, z, n_max)
    return _swept_quad(sp, chi0, z, n_max, panel_factor)


def fourier_coefficients(
    potential: PotentialSpec,
    quiver: QuiverMotion,
    x: float,
    n_max: int,
    tol: float = 1e-10,
) -> np.ndarray:
    """W_n(x) for n in [-n_max, n_max] as a complex array.

    Raises FourierConvergenceError when the quadrature error estimate exceeds
    `tol` (relative to the coefficient scale).
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    sp = to_solver_potential(potential)
    z = x - sp.shift
    if sp.kind == "piecewise":
        half = _pc_coefficients(sp, quiver.chi0, z, n_max)
    else:
        half = _swept_quad(sp, quiver.chi0, z, n_max, panel_factor=1)
        refined = _swept_quad(sp, quiver.chi0, z, n_max, panel_factor=2)
        scale = max(np.max(np.abs(refined)), 1.0)
        err = float(np.max(np.abs(refined - half))) / scale
        if err > tol:
            raise FourierConvergenceError(err, tol)
        half = refined
    full = np.concatenate((half[:0:-1], half)).astype(complex)
    return full


@dataclass(frozen=True)
class FourierPotential:
    """Harmonic decomposition of the displaced barrier, up to |n| <= n_max."""

    potential: PotentialSpec
    quiver: QuiverMotion
    n_max: int

    def coefficients(self, x: float, tol: float = 1e-10) -> np.ndarray:
        return fourier_coefficients(self.potential, self.quiver, x, self.n_max, tol)

    def coefficient(self, n: int, x: float) -> complex:
        if abs(n) > self.n_max:
            raise ValueError(f"|n| must be <= {self.n_max}")
        return complex(self.coefficients(x)[self.n_max + n])


def dump_coefficients_csv(
    fp: FourierPotential, xs: np.ndarray, path: str, tol: float = 1e-10
) -> None:
    """Diagnostic CSV of (x, n, Re W_n, Im W_n)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,n,re_wn,im_wn\n")
        for x in xs:
            coeffs = fp.coefficients(x, tol)
            for i, n in enumerate(range(-fp.n_max, fp.n_max + 1)):
                fh.write(
                    f"{format(x, '.17g')},{n},"
                    f"{format(coeffs[i].real, '.17g')},{format(coeffs[i].imag, '.17g')}\n"
                )
