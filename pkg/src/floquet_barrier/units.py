"""Unit system and conversions.

Everything internal works in natural units (hbar = c = 1): energies in eV,
lengths in 1/eV, times in 1/eV.  User-facing quantities (nm, fm, V/m, keV,
MeV) are converted at the boundary with hbar*c.
"""

from __future__ import annotations

from dataclasses import dataclass

# hbar * c, CODATA. The same number serves both unit systems.
HBARC_EV_NM = 197.3269804
HBARC_MEV_FM = 197.3269804
HBARC_EV_M = HBARC_EV_NM * 1e-9


@dataclass(frozen=True)
class UnitContext:
    """Conversion constants bundled for provenance in output records."""

    hbar_c_ev_nm: float = HBARC_EV_NM
    hbar_c_mev_fm: float = HBARC_MEV_FM


def nm_to_natural(x_nm: float) -> float:
    """nm -> 1/eV."""
    return x_nm / HBARC_EV_NM


def natural_to_nm(x: float) -> float:
    """1/eV -> nm."""
    return x * HBARC_EV_NM


def fm_to_natural(x_fm: float) -> float:
    """fm -> 1/eV (via hbar*c in MeV*fm and MeV -> eV)."""
    return x_fm / HBARC_MEV_FM * 1e-6


def natural_to_fm(x: float) -> float:
    """1/eV -> fm."""
    return x * HBARC_MEV_FM * 1e6


def mev_fm_to_natural(a: float) -> float:
    """Coulomb strength MeV*fm -> dimensionless (natural units)."""
    return a * 1e6 / (HBARC_MEV_FM * 1e6)


def field_si_to_natural(amplitude_v_per_m: float, charge_factor: float) -> float:
    """q*E0 in eV^2 from a field strength in V/m.

    An elementary charge in a 1 V/m field gains 1 eV per meter; the meter
    converts with hbar*c.
    """
    return charge_factor * amplitude_v_per_m * HBARC_EV_M
