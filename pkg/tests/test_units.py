import math

from hypothesis import given, strategies as st

from floquet_barrier.potentials import DriveField, ParticleSpec, to_natural_field
from floquet_barrier.units import (
    HBARC_EV_NM,
    HBARC_MEV_FM,
    UnitContext,
    fm_to_natural,
    natural_to_fm,
    natural_to_nm,
    nm_to_natural,
)

ELEMENTARY_CHARGE = 1.602176634e-19
ELECTRON_KG = 9.1093837015e-31
HBAR_SI = 1.054571817e-34
EV_J = 1.602176634e-19


def test_unit_context_constants():
    ctx = UnitContext()
    assert ctx.hbar_c_ev_nm == 197.3269804
    assert ctx.hbar_c_mev_fm == 197.3269804
    assert HBARC_EV_NM == HBARC_MEV_FM


def test_zero_field_maps_to_zero():
    drive = DriveField(0.0, 0.0)
    assert to_natural_field(drive, ParticleSpec(511e3, 1.0)) == 0.0


def test_natural_field_value():
    drive = DriveField(4.8e8, 0.12)
    f = to_natural_field(drive, ParticleSpec(511e3, 1.0))
    assert math.isclose(f, 94.7169506, rel_tol=1e-6)


def test_natural_field_critical_strength():
    drive = DriveField(1.3e18, 6e3)
    f = to_natural_field(drive, ParticleSpec(1.13e9, 1.0))
    assert math.isclose(f, 2.5652507e11, rel_tol=1e-6)


def test_quiver_amplitude_matches_si_oracle():
    """chi0 = q E/(mu w^2) computed fully in SI units must agree."""
    e0 = 4.8e8
    mass_ev = 511e3
    omega_ev = 0.12
    drive = DriveField(e0, omega_ev)
    from floquet_barrier.kh import QuiverMotion

    chi0 = QuiverMotion.from_drive(drive, ParticleSpec(mass_ev, 1.0)).chi0
    omega_si = omega_ev * EV_J / HBAR_SI
    mass_kg = mass_ev * EV_J / (2.99792458e8) ** 2
    chi0_si_m = ELEMENTARY_CHARGE * e0 / (mass_kg * omega_si**2)
    assert math.isclose(natural_to_nm(chi0), chi0_si_m * 1e9, rel_tol=1e-5)
    assert math.isclose(natural_to_nm(chi0), 2.54, rel_tol=2e-3)


@given(
    amp=st.floats(0, 1e18, allow_nan=False),
    q=st.floats(-3, 3, allow_nan=False),
    scale=st.floats(0.1, 10),
)
def test_natural_field_linear(amp, q, scale):
    if q == 0.0:
        return
    p1 = ParticleSpec(511e3, q)
    d1 = DriveField(amp, 1.0)
    base = to_natural_field(d1, p1)
    assert math.isclose(
        to_natural_field(DriveField(amp * scale, 1.0), p1), base * scale,
        rel_tol=1e-12, abs_tol=1e-300,
    )
    assert math.isclose(
        to_natural_field(d1, ParticleSpec(511e3, q * scale)), base * scale,
        rel_tol=1e-12, abs_tol=1e-300,
    )


def test_length_round_trip():
    assert math.isclose(natural_to_nm(nm_to_natural(0.37)), 0.37, rel_tol=1e-15)
    assert math.isclose(natural_to_fm(fm_to_natural(3.89)), 3.89, rel_tol=1e-15)
    # 1 fm in natural units: 1/(197.3269804 MeV)
    assert math.isclose(fm_to_natural(1.0), 1.0 / (197.3269804e6), rel_tol=1e-12)
