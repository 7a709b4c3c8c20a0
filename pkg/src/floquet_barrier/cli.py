"""Command line front end.

Subcommands: solve, sweep, figure, oracle, resonances.  Configuration comes
from a TOML file (see README for the schema); every output record embeds the
schema version.  Exit codes: 0 success, 1 physics/solver failure, 2 bad
configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .cache import CACHE_ENV, ResultCache, disabled_cache
from .kh import FourierPotential, QuiverMotion, dump_coefficients_csv
from .potentials import (
    DriveField,
    ParticleSpec,
    Rectangular,
    Tabulated,
    TruncatedCoulomb,
    dt_reduced,
    electron,
)
from .records import write_csv
from .resonance import ResonanceConfig, find_resonances, write_spectra_csv
from .solver import SolverError, SolverSettings
from .sweep import ChannelPolicy, SolveSpec, SweepConfig, run_solve, run_sweep, sweep_failed
from .figures_data import FIGURE_IDS, figure_dataset
from .units import fm_to_natural, nm_to_natural, mev_fm_to_natural
from . import oracles


class ConfigError(ValueError):
    pass


def _parse_particle(cfg: dict) -> ParticleSpec:
    if "preset" in cfg:
        presets = {"electron": electron, "dt_reduced": dt_reduced}
        if cfg["preset"] not in presets:
            raise ConfigError(f"unknown particle preset {cfg['preset']!r}")
        return presets[cfg["preset"]]()
    try:
        return ParticleSpec(
            mass=float(cfg["mass_ev"]), charge_factor=float(cfg.get("charge_factor", 1.0))
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [particle] section: {exc}") from exc


def _parse_drive(cfg: dict) -> DriveField:
    try:
        return DriveField(
            amplitude_si=float(cfg["amplitude_v_per_m"]),
            frequency=float(cfg["frequency_ev"]),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [drive] section: {exc}") from exc


def _parse_potential(cfg: dict):
    kind = cfg.get("kind")
    try:
        if kind == "rectangular":
            return Rectangular(
                height=float(cfg["height_ev"]),
                length=nm_to_natural(float(cfg["length_nm"])),
                offset=float(cfg.get("offset_ev", 0.0)),
            )
        if kind == "truncated_coulomb":
            return TruncatedCoulomb(
                strength=mev_fm_to_natural(float(cfg.get("strength_mev_fm", 1.43996))),
                inner_radius=fm_to_natural(float(cfg["inner_radius_fm"])),
                depth=float(cfg.get("depth_ev", 0.0)),
            )
        if kind == "tabulated":
            units = cfg.get("units", "nm_ev")
            if units not in ("nm_ev", "fm_ev"):
                raise ConfigError("tabulated units must be nm_ev or fm_ev")
            conv = nm_to_natural if units == "nm_ev" else fm_to_natural
            samples = tuple((conv(float(x)), float(v)) for x, v in cfg["samples"])
            return Tabulated(samples=samples)
    except ConfigError:
        raise
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [potential] section: {exc}") from exc
    raise ConfigError(f"unknown potential kind {kind!r}")


def _parse_settings(cfg: dict, tol_override=None) -> SolverSettings:
    kw = {}
    for key in ("rel_tol", "abs_tol", "tail_tol", "cache_tol", "adaptive_target"):
        if key in cfg:
            kw[key] = float(cfg[key])
    for key in ("max_channels", "max_steps"):
        if key in cfg:
            kw[key] = int(cfg[key])
    if "harmonic_cutoff" in cfg and cfg["harmonic_cutoff"] != "auto":
        kw["harmonic_cutoff"] = int(cfg["harmonic_cutoff"])
    if tol_override is not None:
        kw["rel_tol"] = tol_override
        kw["abs_tol"] = tol_override * 1e-2
    return SolverSettings(**kw)


def _parse_channels(cfg: dict) -> ChannelPolicy:
    ch = cfg.get("channels", "adaptive")
    if ch == "adaptive":
        return ChannelPolicy(
            mode="adaptive", target=float(cfg.get("adaptive_target", 1e-6))
        )
    try:
        return ChannelPolicy(mode="fixed", fixed_n=int(ch))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"channels must be 'adaptive' or an integer: {ch!r}") from exc


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        return tomllib.loads(p.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML: {exc}") from exc


def _spec_from_config(cfg: dict, tol_override=None) -> SolveSpec:
    for section in ("particle", "drive", "potential", "solve"):
        if section not in cfg:
            raise ConfigError(f"missing [{section}] section")
    solve = cfg["solve"]
    try:
        energy = float(solve["energy_ev"])
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [solve] section: {exc}") from exc
    n_max = solve.get("harmonic_cutoff")
    return SolveSpec(
        energy=energy,
        potential=_parse_potential(cfg["potential"]),
        drive=_parse_drive(cfg["drive"]),
        particle=_parse_particle(cfg["particle"]),
        settings=_parse_settings(solve, tol_override),
        channels=_parse_channels(solve),
        n_max=None if n_max in (None, "auto") else int(n_max),
        time_averaged=bool(solve.get("time_averaged", False)),
    )


def _make_cache(args, out_dir: Path) -> ResultCache:
    if getattr(args, "no_cache", False):
        return disabled_cache()
    import os

    directory = os.environ.get(CACHE_ENV) or str(out_dir / ".cache")
    return ResultCache(directory=directory, enabled=True)


def _cmd_solve(args) -> int:
    cfg = _load_config(args.config)
    spec = _spec_from_config(cfg, args.tol)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache = _make_cache(args, out_dir)
    record = run_solve(spec, cache)
    (out_dir / "solve.json").write_text(record.to_json(), encoding="utf-8")
    write_csv([record], str(out_dir / "solve.csv"))
    if args.dump_fourier:
        quiver = QuiverMotion.from_drive(spec.drive, spec.particle)
        n_max = spec.n_max if spec.n_max is not None else 16
        fp = FourierPotential(spec.potential, quiver, n_max)
        from .potentials import step_position, support_interval

        lo, hi = support_interval(spec.potential)
        if not math.isfinite(lo):
            lo = -10 * step_position(spec.potential) - 2 * quiver.chi0
        xs = np.linspace(lo - quiver.chi0, hi + quiver.chi0, 201)
        dump_coefficients_csv(fp, xs, args.dump_fourier)
    print(record.to_json())
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    if "sweep" not in cfg:
        raise ConfigError("missing [sweep] section")
    sw = cfg["sweep"]
    try:
        sweep_cfg = SweepConfig(
            base=_spec_from_config(cfg, args.tol),
            axis=sw["axis"],
            start=float(sw["start"]),
            stop=float(sw["stop"]),
            count=int(sw["count"]),
            spacing=sw.get("spacing", "linear"),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad [sweep] section: {exc}") from exc
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cache = _make_cache(args, out_dir)
    records = run_sweep(sweep_cfg, jobs=args.jobs, cache=cache)
    write_csv(records, str(out_dir / "sweep.csv"))
    with open(out_dir / "sweep.jsonl", "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
    if sweep_failed(records):
        print("sweep finished with failed points", file=sys.stderr)
        return 1
    return 0


def _cmd_figure(args) -> int:
    out_dir = Path(args.out)
    cache = _make_cache(args, out_dir)
    try:
        paths = figure_dataset(
            args.id, str(out_dir), points=args.points, jobs=args.jobs, cache=cache
        )
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    for p in paths:
        print(p)
    return 0


def _cmd_resonances(args) -> int:
    cfg = _load_config(args.config)
    spec = _spec_from_config(cfg, None)
    rc = cfg.get("resonances", {})
    config = ResonanceConfig(
        thetas=tuple(rc.get("thetas", (0.10, 0.15, 0.20))),
        channel_half_width=int(rc.get("channel_half_width", 4)),
        grid_points=int(rc.get("grid_points", 420)),
        x_min=rc.get("x_min"),
        x_max=rc.get("x_max"),
    )
    report = find_resonances(spec.potential, spec.drive, spec.particle, config)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_spectra_csv(report, str(out_dir / "resonances.csv"))
    summary = {
        "schema_version": "floquet-barrier/1",
        "omega_ev": spec.drive.frequency,
        "thetas": list(report.thetas),
        "resonances": [
            {
                "re_ev": r.energy.real,
                "im_ev": r.energy.imag,
                "stability_ev": r.stability,
                "ray_distance_ev": r.ray_distance,
                "ambiguous": r.ambiguous,
            }
            for r in report.resonances
        ],
    }
    (out_dir / "resonances.json").write_text(
        json.dumps(summary, sort_keys=True, indent=1), encoding="utf-8"
    )
    print(json.dumps(summary["resonances"]))
    return 0


def _cmd_oracle(args) -> int:
    mu = args.mass_ev
    if args.name == "static-rect":
        res = oracles.static_rectangular(
            args.energy_ev, args.height_ev, nm_to_natural(args.length_nm),
            args.offset_ev, mu,
        )
        out = {
            "transmission": res.transmission,
            "reflection": res.reflection,
            "r_re": res.r_amplitude.real,
            "r_im": res.r_amplitude.imag,
            "t_re": res.t_amplitude.real,
            "t_im": res.t_amplitude.imag,
        }
    elif args.name == "quiver-rect":
        drive = DriveField(args.field_v_per_m, args.omega_ev)
        part = ParticleSpec(mu, args.charge_factor)
        sol = oracles.quivering_rectangular(
            args.energy_ev, args.height_ev, nm_to_natural(args.length_nm),
            args.offset_ev, drive, part, args.modes,
        )
        out = {
            "total_transmission": sol.total_transmission,
            "probability_sum": sol.probability_sum,
            "residual": sol.residual,
            "digits": sol.digits,
        }
    elif args.name == "perturbative":
        part = ParticleSpec(mu, args.charge_factor)
        quiver = QuiverMotion.from_drive(DriveField(args.field_v_per_m, args.omega_ev), part)
        res = oracles.perturbative_sidebands(
            args.energy_ev, args.height_ev, nm_to_natural(args.length_nm),
            quiver.chi0, args.omega_ev, mu, args.regime,
        )
        out = {
            "upper": res.upper,
            "lower": res.lower,
            "current_ratio": res.current_ratio,
            "l_max_upper": res.l_max_upper,
            "l_max_lower": res.l_max_lower,
            "regime_valid": res.regime_valid,
        }
    elif args.name == "opaque":
        drive = DriveField(args.field_v_per_m, args.omega_ev)
        part = ParticleSpec(mu, args.charge_factor)
        res = oracles.opaque_barrier(
            args.energy_ev, args.height_ev, nm_to_natural(args.length_nm),
            drive, part, args.modes,
        )
        out = {
            "traversal_time": res.traversal_time,
            "currents": {int(m): float(j) for m, j in zip(res.orders, res.currents)},
        }
    elif args.name == "wkb":
        pot = TruncatedCoulomb(
            strength=mev_fm_to_natural(args.strength_mev_fm),
            inner_radius=fm_to_natural(args.inner_radius_fm),
            depth=args.offset_ev,
        )
        out = {"gamow_exponent": oracles.wkb_gamow(pot, args.energy_ev, mu)}
    elif args.name == "static-coulomb":
        res = oracles.static_coulomb(
            args.energy_ev,
            mev_fm_to_natural(args.strength_mev_fm),
            fm_to_natural(args.inner_radius_fm),
            args.offset_ev,
            mu,
        )
        out = {
            "transmission": res.transmission,
            "reflection": res.reflection,
            "flux_error": res.flux_error,
        }
    else:  # pragma: no cover - argparse restricts choices
        return 2
    if args.csv:
        from .records import CSV_COLUMNS, _fmt

        row = {c: "" for c in CSV_COLUMNS}
        row.update(
            {
                "schema_version": "floquet-barrier/1",
                "axis": "oracle",
                "axis_value": _fmt(args.energy_ev),
                "energy_ev": _fmt(args.energy_ev),
                "mass_ev": _fmt(mu),
                "total_transmission": _fmt(out.get("transmission", out.get("total_transmission"))),
                "total_reflection": _fmt(out.get("reflection")),
            }
        )
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(CSV_COLUMNS) + "\n")
            fh.write(",".join(row[c] for c in CSV_COLUMNS) + "\n")
    print(json.dumps(out, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquet-barrier",
        description="Transmission through driven potential barriers (coupled Floquet channels)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config=True):
        if config:
            p.add_argument("--config", required=True, help="TOML configuration file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--jobs", type=int, default=0, help="worker threads (0 = auto)")
        p.add_argument("--no-cache", action="store_true", help="disable the result cache")
        p.add_argument("--tol", type=float, default=None, help="override solver rel_tol")

    p = sub.add_parser("solve", help="single solve from a config file")
    common(p)
    p.add_argument("--dump-fourier", default=None, help="write W_n(x) diagnostic CSV")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="parameter sweep from a config file")
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("figure", help="emit the dataset behind a named figure")
    p.add_argument("--id", required=True, help=f"figure id ({', '.join(FIGURE_IDS)})")
    p.add_argument("--points", type=int, default=None, help="override points per scan")
    common(p, config=False)
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("resonances", help="complex-scaling resonance map")
    common(p)
    p.set_defaults(func=_cmd_resonances)

    p = sub.add_parser("oracle", help="run an analytic/semi-analytic reference")
    p.add_argument(
        "name",
        choices=["static-rect", "quiver-rect", "perturbative", "opaque", "wkb", "static-coulomb"],
    )
    p.add_argument("--energy-ev", type=float, required=True)
    p.add_argument("--mass-ev", type=float, default=510998.95)
    p.add_argument("--charge-factor", type=float, default=1.0)
    p.add_argument("--height-ev", type=float, default=6.0)
    p.add_argument("--length-nm", type=float, default=0.2)
    p.add_argument("--offset-ev", type=float, default=0.0)
    p.add_argument("--omega-ev", type=float, default=0.12)
    p.add_argument("--field-v-per-m", type=float, default=0.0)
    p.add_argument("--modes", type=int, default=12)
    p.add_argument("--regime", choices=["transparent", "opaque"], default="opaque")
    p.add_argument("--strength-mev-fm", type=float, default=1.43996)
    p.add_argument("--inner-radius-fm", type=float, default=3.89)
    p.add_argument("--csv", default=None, help="also write a schema-aligned CSV row")
    p.set_defaults(func=_cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (SolverError, RuntimeError, ValueError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
