"""Single solves, parameter sweeps and result assembly."""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cache import ResultCache, disabled_cache
from .potentials import (
    DriveField,
    ParticleSpec,
    PotentialSpec,
    Rectangular,
    Tabulated,
    TruncatedCoulomb,
    offset_v1,
)
from .records import (
    CHANNEL_RANGE,
    SCHEMA_VERSION,
    ResultRecord,
    error_record,
    input_hash_for,
)
from .solver import (
    ScatteringResult,
    SolverError,
    SolverSettings,
    adaptive_channel_count,
    relative_enhancement,
    solve_scattering,
    static_reference,
    time_averaged_transmission,
)

AXES = ("energy", "omega", "field", "length", "offset")


@dataclass(frozen=True)
class ChannelPolicy:
    mode: str = "adaptive"  # adaptive | fixed
    fixed_n: int = 16
    target: float = 1e-6

    def __post_init__(self):
        if self.mode not in ("adaptive", "fixed"):
            raise ValueError("channel policy mode must be adaptive or fixed")


@dataclass(frozen=True)
class SolveSpec:
    energy: float
    potential: PotentialSpec
    drive: DriveField
    particle: ParticleSpec
    settings: SolverSettings = SolverSettings()
    channels: ChannelPolicy = ChannelPolicy()
    n_max: Optional[int] = None
    time_averaged: bool = False


def _potential_columns(potential: PotentialSpec) -> dict:
    if isinstance(potential, Rectangular):
        return {
            "potential_kind": "rectangular",
            "barrier_height_ev": potential.height,
            "barrier_length": potential.length,
            "coulomb_strength": None,
            "inner_radius": None,
            "offset_v1_ev": potential.offset,
        }
    if isinstance(potential, TruncatedCoulomb):
        return {
            "potential_kind": "truncated_coulomb",
            "barrier_height_ev": None,
            "barrier_length": None,
            "coulomb_strength": potential.strength,
            "inner_radius": potential.inner_radius,
            "offset_v1_ev": potential.depth,
        }
    return {
        "potential_kind": "tabulated",
        "barrier_height_ev": None,
        "barrier_length": potential.samples[-1][0] - potential.samples[0][0],
        "coulomb_strength": None,
        "inner_radius": None,
        "offset_v1_ev": offset_v1(potential),
    }


def _inputs_payload(spec: SolveSpec) -> dict:
    pot = _potential_columns(spec.potential)
    if isinstance(spec.potential, Tabulated):
        pot["samples"] = [list(s) for s in spec.potential.samples]
    return {
        "schema_version": SCHEMA_VERSION,
        "energy_ev": spec.energy,
        "omega_ev": spec.drive.frequency,
        "field_v_per_m": spec.drive.amplitude_si,
        "mass_ev": spec.particle.mass,
        "charge_factor": spec.particle.charge_factor,
        "channel_policy": [spec.channels.mode, spec.channels.fixed_n, spec.channels.target],
        "n_max": spec.n_max,
        "time_averaged_requested": spec.time_averaged,
        "settings": spec.settings.as_dict(),
        **pot,
    }


def _solve_assisted(spec: SolveSpec) -> Tuple[ScatteringResult, Optional[bool]]:
    if spec.channels.mode == "fixed":
        # a zero-amplitude drive couples nothing: one channel is exact and the
        # recorded enhancement is exactly 1
        n = spec.channels.fixed_n if spec.drive.amplitude_si != 0.0 else 0
        res = solve_scattering(
            spec.energy,
            spec.potential,
            spec.drive,
            spec.particle,
            n,
            spec.settings,
            n_max=spec.n_max,
        )
        return res, None
    out = adaptive_channel_count(
        spec.energy,
        spec.potential,
        spec.drive,
        spec.particle,
        spec.settings,
        target_deficit=spec.channels.target,
    )
    return out.result, out.converged


def run_solve(
    spec: SolveSpec,
    cache: Optional[ResultCache] = None,
    axis: str = "energy",
    axis_value: Optional[float] = None,
) -> ResultRecord:
    """Assisted + static reference solve, relative enhancement, one record."""
    cache = cache or disabled_cache()
    inputs = _inputs_payload(spec)
    key = input_hash_for(inputs)
    hit = cache.get(key)
    if hit is not None:
        return hit
    t0 = time.perf_counter()
    assisted, converged = _solve_assisted(spec)
    static = static_reference(spec.energy, spec.potential, spec.particle, spec.settings)
    tavg = None
    if spec.time_averaged:
        tavg = time_averaged_transmission(
            spec.energy, spec.potential, spec.drive, spec.particle, spec.settings
        )
    enh = relative_enhancement(assisted, static)
    payload = dict(inputs)
    payload.update(
        {
            "axis": axis,
            "axis_value": spec.energy if axis_value is None else axis_value,
            "input_hash": key,
            "half_width": assisted.half_width,
            "strategy": assisted.strategy,
            "threshold_regularized": assisted.threshold_regularized,
            "adaptive_converged": converged,
            "unitarity_deficit": assisted.unitarity_deficit,
            "total_transmission": assisted.total_transmission,
            "total_reflection": assisted.total_reflection,
            "static_transmission": static.total_transmission,
            "time_averaged_transmission": None if tavg is None else tavg.total_transmission,
            "relative_enhancement": enh if math.isfinite(enh) else None,
            "enhancement_infinite": not math.isfinite(enh),
            "error": None,
        }
    )
    for n in CHANNEL_RANGE:
        if abs(n) <= assisted.half_width:
            payload[f"t_{'m' if n < 0 else 'p'}{abs(n)}"] = assisted.transmitted_probability(n)
            payload[f"r_{'m' if n < 0 else 'p'}{abs(n)}"] = assisted.reflected_probability(n)
        else:
            payload[f"t_{'m' if n < 0 else 'p'}{abs(n)}"] = 0.0
            payload[f"r_{'m' if n < 0 else 'p'}{abs(n)}"] = 0.0
    record = ResultRecord(payload=payload, wall_time_s=time.perf_counter() - t0)
    cache.put(key, record)
    return record


@dataclass(frozen=True)
class SweepConfig:
    base: SolveSpec
    axis: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"
    point_timeout_s: float = 300.0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        if self.count < 2:
            raise ValueError("count must be >= 2")
        if not (self.start < self.stop):
            raise ValueError("start must be < stop")
        if self.spacing not in ("linear", "log"):
            raise ValueError("spacing must be linear or log")
        if self.spacing == "log" and self.start <= 0:
            raise ValueError("log spacing requires positive endpoints")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def apply_axis(spec: SolveSpec, axis: str, value: float) -> SolveSpec:
    if axis == "energy":
        return replace(spec, energy=float(value))
    if axis == "omega":
        return replace(spec, drive=DriveField(spec.drive.amplitude_si, float(value)))
    if axis == "field":
        return replace(spec, drive=DriveField(float(value), spec.drive.frequency))
    if axis == "length":
        if not isinstance(spec.potential, Rectangular):
            raise ValueError("length axis needs a rectangular barrier")
        return replace(spec, potential=replace(spec.potential, length=float(value)))
    if axis == "offset":
        if isinstance(spec.potential, Rectangular):
            return replace(spec, potential=replace(spec.potential, offset=float(value)))
        if isinstance(spec.potential, TruncatedCoulomb):
            return replace(spec, potential=replace(spec.potential, depth=float(value)))
        raise ValueError("offset axis needs a rectangular or Coulomb barrier")
    raise ValueError(f"unknown axis {axis}")


def run_sweep(
    config: SweepConfig,
    jobs: int = 0,
    cache: Optional[ResultCache] = None,
) -> List[ResultRecord]:
    """All sweep points, parallel workers, deterministic axis order.

    Per-point failures become error records instead of aborting the sweep.
    """
    cache = cache or disabled_cache()
    values = config.values()

    def one(value: float) -> ResultRecord:
        spec = apply_axis(config.base, config.axis, value)
        try:
            rec = run_solve(spec, cache, axis=config.axis, axis_value=float(value))
            if rec.wall_time_s > config.point_timeout_s:
                rec.payload["timeout_exceeded"] = True
            return rec
        except (SolverError, ValueError, RuntimeError) as exc:
            return error_record(
                config.axis, float(value), _inputs_payload(spec), str(exc)
            )

    workers = jobs if jobs > 0 else min(32, (len(values) + 1))
    if workers <= 1:
        return [one(v) for v in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, values))


def sweep_failed(records: Sequence[ResultRecord]) -> bool:
    return any(r.payload.get("error") for r in records)
