"""Backward integration of the coupled quasi-amplitudes and result extraction.

Strategy selection: the equations are always the same, but the representation
changes with the problem scale.

* rescaled      — V1 = 0, any domain length: integrates diag-phase-rescaled
                  variables whose closed-channel entries stay bounded.
* raw           — V1 != 0, short support: the step-matched basis verbatim.
* rescaled-step — V1 != 0 with a long soft tail: the step-matched basis
                  grows like exp(kappa |y|) for closed channels, so the right
                  region [0, y_max] runs raw and the left region runs in
                  rescaled variables after absorbing the step reflection
                  diag(b) into the reflected amplitude (an exact change of
                  variables of the same equations).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import kernels
from .channels import ChannelGrid, build_grid
from .kh import QuiverMotion
from .potentials import (
    DriveField,
    ParticleSpec,
    PotentialSpec,
    SolverPotential,
    to_solver_potential,
)
from .tables import CoefficientTable, build_coefficient_table

_RAW_EXPONENT_LIMIT = 250.0


class SolverError(RuntimeError):
    def __init__(self, message, position=None, channel_pair=None):
        if position is not None:
            message += f" at y = {position:.6e}"
        if channel_pair is not None:
            message += f" (worst channel pair n={channel_pair[0]}, l={channel_pair[1]})"
        super().__init__(message)
        self.position = position
        self.channel_pair = channel_pair


@dataclass(frozen=True)
class SolverSettings:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    tail_tol: float = 1e-3
    cache_tol: float = 1e-9
    adaptive_target: float = 1e-6
    max_channels: int = 64
    max_steps: int = 50_000_000
    harmonic_cutoff: Optional[int] = None  # defaults to the channel half-width

    def as_dict(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_tol": self.abs_tol,
            "tail_tol": self.tail_tol,
            "cache_tol": self.cache_tol,
            "adaptive_target": self.adaptive_target,
            "max_channels": self.max_channels,
            "harmonic_cutoff": self.harmonic_cutoff,
        }


@dataclass
class AmplitudeMatrices:
    """rho/tau at position y.

    `scaled` marks the rescaled representation, whose diagonal phase factors
    are anchored at the integration start y_ref.
    """

    rho: np.ndarray
    tau: np.ndarray
    y: float
    y_ref: float
    scaled: bool
    n_steps: int


@dataclass(frozen=True, eq=False)
class ScatteringResult:
    energy: float
    requested_energy: float
    omega: float
    mass: float
    v1: float
    half_width: int
    n_max: int
    strategy: str
    threshold_regularized: bool
    channel_index: np.ndarray
    open_left: np.ndarray
    open_right: np.ndarray
    t_matrix: np.ndarray
    r_matrix: np.ndarray
    transmitted: np.ndarray
    reflected: np.ndarray
    total_transmission: float
    total_reflection: float
    unitarity_deficit: float
    rel_tol: float
    abs_tol: float
    input_hash: str
    n_steps: int
    extra: dict = field(default_factory=dict)

    def transmitted_probability(self, n: int) -> float:
        return float(self.transmitted[n + self.half_width])

    def reflected_probability(self, n: int) -> float:
        return float(self.reflected[n + self.half_width])


def total_transmission(result: ScatteringResult) -> float:
    return result.total_transmission


def relative_enhancement(assisted: ScatteringResult, static: ScatteringResult) -> float:
    """Assisted / static total transmission; inf sentinel when static is 0."""
    if static.total_transmission == 0.0:
        return math.inf
    return assisted.total_transmission / static.total_transmission


def _input_hash(payload: dict) -> str:
    canon = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=repr)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _potential_payload(sp: SolverPotential) -> dict:
    return {
        "kind": sp.kind,
        "v1": sp.v1,
        "pc_edges": list(sp.pc_edges),
        "pc_values": list(sp.pc_values),
        "alpha": sp.alpha,
        "r0": sp.r0,
        "tab_x": list(sp.tab_x),
        "tab_v": list(sp.tab_v),
    }


def integration_window(sp: SolverPotential, chi0: float, energy: float, tail_tol: float):
    """Support of the localized coupling W (solver coordinates)."""
    if sp.kind == "piecewise":
        lo = min(sp.pc_edges) - chi0
        hi = max(sp.pc_edges) + chi0
    elif sp.kind == "coulomb":
        hi = chi0
        lo = min(sp.r0 - sp.alpha / (tail_tol * energy), -chi0)
    else:
        lo = sp.tab_x[0] - chi0
        hi = sp.tab_x[-1] + chi0
    if hi <= lo:
        hi = lo + 1e-12 * max(abs(lo), 1.0)
    return lo, hi


def _dummy_table(n_max: int) -> CoefficientTable:
    z = np.zeros((2, n_max + 1))
    return CoefficientTable(
        y=np.array([0.0, 1.0]), values=z, slope_r=z, slope_l=z,
        bounds=np.array([0.0, 1.0]),
    )


def _kernel_potential_args(sp: SolverPotential, n_max: int, table: Optional[CoefficientTable]):
    if table is None:
        return (
            kernels.POT_PIECEWISE,
            np.asarray(sp.pc_edges, dtype=float),
            np.asarray(sp.pc_values, dtype=float),
            _dummy_table(n_max),
        )
    return (
        kernels.POT_TABLE,
        np.zeros(1),
        np.zeros(2),
        table,
    )


def integrate_channels(
    grid: ChannelGrid,
    sp: SolverPotential,
    chi0: float,
    n_max: int,
    y_min: float,
    y_max: float,
    rel_tol: float,
    abs_tol: float,
    mode: int,
    table: Optional[CoefficientTable] = None,
    max_steps: int = 50_000_000,
) -> AmplitudeMatrices:
    """Integrate d(rho, tau)/dy backward from (0, 0) at y_max down to y_min.

    In rescaled mode with V1 != 0 the run is split in two exactly equivalent
    phases: the short right region [0, y_max] in the raw step basis, then the
    left region in the rescaled plane-wave variables (the step reflection
    diag(b) moves into the reflected amplitude at the switch, which is what
    keeps closed-channel entries bounded over long tails).
    """
    n = grid.n_channels
    kl = grid.k_left.astype(np.complex128)
    kr = grid.k_right.astype(np.complex128)
    cvec = -1j / (kl + kr)
    al = 0.5 * (1.0 + kr / kl)
    bl = 0.5 * (1.0 - kr / kl)
    cr = 0.5 * (1.0 - kl / kr)
    dr = 0.5 * (1.0 + kl / kr)
    pot_kind, edges, vals, tab = _kernel_potential_args(sp, n_max, table)
    if table is not None:
        breakpoints = tuple(table.bounds)
    else:
        from .tables import _segment_bounds

        breakpoints = tuple(_segment_bounds(sp, chi0, y_min, y_max, 1.0))
    shared = (
        rel_tol, abs_tol,
    )
    kernel_args = (
        kl, kr, cvec, al, bl, cr, dr, pot_kind, chi0, edges, vals, sp.v1,
        tab.y, tab.values, tab.slope_r, tab.slope_l, 2.0 * grid.mass, n_max,
        max_steps,
    )

    def run(a, b, state, mode_run, y_ref):
        status, y_stop, worst, n_steps = kernels.integrate_rho_tau(
            a, b, state, *shared, mode_run, *kernel_args,
            breakpoints=breakpoints, y_ref=y_ref,
        )
        if status != kernels.STATUS_OK:
            names = {
                kernels.STATUS_STEP_UNDERFLOW: "step size underflow",
                kernels.STATUS_NONFINITE: "non-finite amplitudes",
                kernels.STATUS_MAX_STEPS: "step budget exhausted",
            }
            rem = worst % (n * n)
            pair = (rem // n - grid.half_width, rem % n - grid.half_width)
            raise SolverError(names[status], position=y_stop, channel_pair=pair)
        return y_stop, n_steps

    state = np.zeros((2, n, n), dtype=np.complex128)
    two_phase = mode == kernels.MODE_RESCALED and grid.v1 != 0.0
    if not two_phase:
        y_stop, n_steps = run(y_max, y_min, state, mode, y_max)
        return AmplitudeMatrices(
            rho=state[0],
            tau=state[1],
            y=y_stop,
            y_ref=y_max,
            scaled=(mode == kernels.MODE_RESCALED),
            n_steps=n_steps,
        )
    if y_max <= 0.0 or y_min >= 0.0:
        raise SolverError("two-phase integration expects the step inside the domain")
    _, steps1 = run(y_max, 0.0, state, kernels.MODE_RAW, y_max)
    # absorb the step reflection into the reflected amplitude: rho~ = b + rho
    state[0] += np.diag(bl)
    y_stop, steps2 = run(0.0, y_min, state, kernels.MODE_RESCALED, 0.0)
    # back to the raw convention on open channels (closed entries stay in the
    # bounded integration scaling; they carry no flux)
    expo = np.where(grid.open_left, 1j * kl * y_stop, 0.0)
    phase = np.exp(expo)
    state[0] *= np.outer(phase, phase)
    state[1] *= phase[None, :]
    state[0] -= np.diag(bl)
    return AmplitudeMatrices(
        rho=state[0],
        tau=state[1],
        y=y_stop,
        y_ref=0.0,
        scaled=False,
        n_steps=steps1 + steps2,
    )


def _physical_amplitudes(amps: AmplitudeMatrices, grid: ChannelGrid):
    """Unit-incident-flux amplitude matrices (T_phys, R_phys).

    T_phys[n, l] multiplies e^{i k_n^R y} on the right, R_phys[n, l]
    multiplies e^{-i k_n y} on the left, for a unit incident wave e^{i k_l y}.
    Entries touching closed channels are reported in the integration scaling
    when the rescaled representation was used (open-channel physics is exact
    either way; closed channels carry no flux).
    """
    n = grid.n_channels
    rho = amps.rho.copy()
    tau = amps.tau.copy()
    if amps.scaled:
        # undo the anchored diagonal phases on open channels (unit modulus);
        # closed channels stay in the integration scaling and carry no flux
        expo = np.where(grid.open_left, 1j * grid.k_left * (amps.y - amps.y_ref), 0.0)
        safe = np.exp(expo)
        rho *= np.outer(safe, safe)
        tau *= safe[None, :]
    t_mat = np.eye(n, dtype=complex) + tau
    a = 0.5 * (1.0 + grid.k_right / grid.k_left)
    b = 0.5 * (1.0 - grid.k_right / grid.k_left)
    t_phys = t_mat / a[None, :]
    r_phys = (np.diag(b) + rho) / a[None, :]
    return t_phys, r_phys


def _result_from_amplitudes(
    t_phys, r_phys, grid, n_max, strategy, rel_tol, abs_tol, input_hash, n_steps, extra
) -> ScatteringResult:
    i0 = grid.index_of(0)
    k0 = grid.k_left[i0].real
    t_prob = np.where(
        grid.open_right,
        np.abs(t_phys[:, i0]) ** 2 * grid.k_right.real / k0,
        0.0,
    )
    r_prob = np.where(
        grid.open_left,
        np.abs(r_phys[:, i0]) ** 2 * grid.k_left.real / k0,
        0.0,
    )
    t_tot = float(np.sum(t_prob))
    r_tot = float(np.sum(r_prob))
    return ScatteringResult(
        energy=grid.energy,
        requested_energy=grid.requested_energy,
        omega=grid.omega,
        mass=grid.mass,
        v1=grid.v1,
        half_width=grid.half_width,
        n_max=n_max,
        strategy=strategy,
        threshold_regularized=grid.threshold_regularized,
        channel_index=grid.indices,
        open_left=grid.open_left.copy(),
        open_right=grid.open_right.copy(),
        t_matrix=t_phys,
        r_matrix=r_phys,
        transmitted=t_prob,
        reflected=r_prob,
        total_transmission=t_tot,
        total_reflection=r_tot,
        unitarity_deficit=abs(1.0 - t_tot - r_tot),
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        input_hash=input_hash,
        n_steps=n_steps,
        extra=extra,
    )


def extract_result(
    amps: AmplitudeMatrices,
    grid: ChannelGrid,
    n_max: int = 0,
    strategy: str = "raw",
    rel_tol: float = 0.0,
    abs_tol: float = 0.0,
    input_hash: str = "",
    extra: Optional[dict] = None,
) -> ScatteringResult:
    t_phys, r_phys = _physical_amplitudes(amps, grid)
    return _result_from_amplitudes(
        t_phys, r_phys, grid, n_max, strategy, rel_tol, abs_tol, input_hash,
        amps.n_steps, dict(extra or {}),
    )


def _pick_strategy(sp: SolverPotential, grid: ChannelGrid, lo: float, hi: float) -> str:
    if grid.v1 == 0.0:
        return "rescaled"
    kappa_l = float(np.max(np.abs(grid.k_left.imag)))
    kappa_r = float(np.max(np.abs(grid.k_right.imag)))
    if max(2.0 * kappa_l * abs(lo), 2.0 * kappa_r * max(hi, 0.0)) < _RAW_EXPONENT_LIMIT:
        return "raw"
    expo_r = 2.0 * kappa_r * max(hi, 0.0)
    if expo_r >= _RAW_EXPONENT_LIMIT:
        raise SolverError(
            f"closed-channel growth exp({expo_r:.0f}) on the exit side is not "
            "representable; reduce the channel count or the sweep amplitude"
        )
    return "rescaled-step"


def solve_scattering(
    energy: float,
    potential: PotentialSpec,
    drive: DriveField,
    particle: ParticleSpec,
    half_width: int,
    settings: SolverSettings = SolverSettings(),
    n_max: Optional[int] = None,
) -> ScatteringResult:
    """One full scattering solve at fixed channel half-width N."""
    sp = to_solver_potential(potential)
    quiver = QuiverMotion.from_drive(drive, particle)
    if n_max is None:
        n_max = settings.harmonic_cutoff if settings.harmonic_cutoff is not None else half_width
    n_max = min(n_max, 2 * half_width) if half_width > 0 else 0
    grid = build_grid(energy, quiver.omega, particle, sp.v1, half_width)
    lo, hi = integration_window(sp, quiver.chi0, grid.energy, settings.tail_tol)
    strategy = _pick_strategy(sp, grid, lo, hi)
    input_hash = _input_hash(
        {
            "energy": energy,
            "potential": _potential_payload(sp),
            "drive": [drive.amplitude_si, drive.frequency],
            "particle": [particle.mass, particle.charge_factor],
            "half_width": half_width,
            "n_max": n_max,
            "settings": settings.as_dict(),
        }
    )
    table = None
    if sp.kind != "piecewise":
        table = build_coefficient_table(
            sp, quiver.chi0, n_max, lo, hi, mirror=False, tol=settings.cache_tol
        )
    mode = kernels.MODE_RAW if strategy == "raw" else kernels.MODE_RESCALED
    pad = 1e-9 * (hi - lo)
    amps = integrate_channels(
        grid, sp, quiver.chi0, n_max, lo - pad, hi + pad,
        settings.rel_tol, settings.abs_tol, mode, table, settings.max_steps,
    )
    return extract_result(
        amps, grid, n_max, strategy, settings.rel_tol, settings.abs_tol, input_hash,
        extra={"window": (lo, hi), "chi0": quiver.chi0},
    )


def static_reference(
    energy: float,
    potential: PotentialSpec,
    particle: ParticleSpec,
    settings: SolverSettings = SolverSettings(),
) -> ScatteringResult:
    """Field-free single-channel solve."""
    off = DriveField(amplitude_si=0.0, frequency=0.0)
    return solve_scattering(energy, potential, off, particle, 0, settings)


def time_averaged_transmission(
    energy: float,
    potential: PotentialSpec,
    drive: DriveField,
    particle: ParticleSpec,
    settings: SolverSettings = SolverSettings(),
) -> ScatteringResult:
    """Keep only the period-averaged potential (zeroth harmonic)."""
    res = solve_scattering(energy, potential, drive, particle, 0, settings, n_max=0)
    return replace(res, strategy="time-averaged")


@dataclass(frozen=True)
class AdaptiveOutcome:
    result: ScatteringResult
    converged: bool
    half_width: int
    history: tuple


def adaptive_channel_count(
    energy: float,
    potential: PotentialSpec,
    drive: DriveField,
    particle: ParticleSpec,
    settings: SolverSettings = SolverSettings(),
    target_deficit: Optional[float] = None,
) -> AdaptiveOutcome:
    """Smallest N (step 4) with deficit below target and total transmission
    stable under N -> N + 4; capped at settings.max_channels.
    """
    target = settings.adaptive_target if target_deficit is None else target_deficit
    if not (target > 0):
        raise ValueError("target deficit must be positive")
    quiver = QuiverMotion.from_drive(drive, particle)
    if quiver.chi0 == 0.0:
        res = solve_scattering(energy, potential, drive, particle, 0, settings)
        return AdaptiveOutcome(result=res, converged=True, half_width=0, history=((0, res.unitarity_deficit, res.total_transmission),))

    history = []
    prev = None
    for n in range(4, settings.max_channels + 1, 4):
        res = solve_scattering(energy, potential, drive, particle, n, settings)
        history.append((n, res.unitarity_deficit, res.total_transmission))
        if prev is not None:
            rel = abs(res.total_transmission - prev.total_transmission) / max(
                abs(prev.total_transmission), 1e-300
            )
            if prev.unitarity_deficit < target and rel < target:
                return AdaptiveOutcome(
                    result=prev, converged=True, half_width=prev.half_width,
                    history=tuple(history),
                )
        prev = res
    best = prev
    return AdaptiveOutcome(
        result=best, converged=False, half_width=best.half_width, history=tuple(history)
    )
