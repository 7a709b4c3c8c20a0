import math

import pytest
from hypothesis import given, strategies as st

from floquet_barrier.potentials import (
    Rectangular,
    Tabulated,
    TruncatedCoulomb,
    evaluate,
    offset_v1,
    rectangular_ev_nm,
    step_position,
    to_solver_potential,
    truncated_coulomb_mev_fm,
    localized_value,
)
from floquet_barrier.units import fm_to_natural, nm_to_natural


def test_rectangular_inside_value():
    pot = rectangular_ev_nm(6.0, 0.2, 0.0)
    assert evaluate(pot, nm_to_natural(0.1)) == 6.0


def test_rectangular_piecewise_boundaries():
    pot = rectangular_ev_nm(6.0, 0.2, 1.5)
    assert evaluate(pot, 0.0) == 0.0
    assert evaluate(pot, -1.0) == 0.0
    assert evaluate(pot, pot.length) == -1.5
    assert evaluate(pot, pot.length * 10) == -1.5


def test_coulomb_peak_near_paper_value():
    pot = truncated_coulomb_mev_fm(1.44, 3.89, 0.0)
    peak = evaluate(pot, pot.inner_radius)
    assert math.isclose(peak, 370.18e3, rel_tol=1e-3)
    # paper quotes roughly 375 keV for the DT system
    assert abs(peak - 375e3) / 375e3 < 0.02


def test_asymptotic_levels():
    pots = [
        rectangular_ev_nm(6.0, 0.2, 0.7),
        truncated_coulomb_mev_fm(depth_ev=2e3),
        Tabulated(samples=((0.0, 0.0), (1.0, 5.0), (2.0, -0.3))),
    ]
    for pot in pots:
        v1 = offset_v1(pot)
        far = step_position(pot)
        assert math.isclose(evaluate(pot, far + 1e4 * (abs(far) + 1)), -v1, rel_tol=1e-12)
        assert abs(evaluate(pot, -1e6 * (abs(far) + 1))) < 1e-9 * max(abs(v1), 1.0)


def test_rectangular_midpoint_symmetry():
    pot = rectangular_ev_nm(6.0, 0.2, 0.0)
    for x in (-0.3 * pot.length, 0.2 * pot.length, 0.5 * pot.length, 1.7 * pot.length):
        assert evaluate(pot, x) == evaluate(pot, pot.length - x)


def test_evaluate_deterministic():
    pot = truncated_coulomb_mev_fm()
    x = fm_to_natural(7.7)
    values = {evaluate(pot, x) for _ in range(32)}
    assert len(values) == 1


def test_tabulated_validation():
    with pytest.raises(ValueError):
        Tabulated(samples=((0.0, 0.0),))
    with pytest.raises(ValueError):
        Tabulated(samples=((0.0, 0.0), (0.0, 1.0)))
    with pytest.raises(ValueError):
        Tabulated(samples=((0.0, 0.5), (1.0, 1.0)))


def test_tabulated_interpolation():
    pot = Tabulated(samples=((0.0, 0.0), (2.0, 4.0), (4.0, -1.0)))
    assert math.isclose(evaluate(pot, 1.0), 2.0)
    assert math.isclose(evaluate(pot, 3.0), 1.5)
    assert evaluate(pot, -5.0) == 0.0
    assert evaluate(pot, 9.0) == -(-evaluate(pot, 4.0))


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        Rectangular(height=6.0, length=-1.0)
    with pytest.raises(ValueError):
        TruncatedCoulomb(strength=-1.0, inner_radius=1.0)
    with pytest.raises(ValueError):
        TruncatedCoulomb(strength=1.0, inner_radius=0.0)
    with pytest.raises(ValueError):
        evaluate(Rectangular(height=1.0, length=1.0), math.inf)


def test_solver_coordinates_step_at_origin():
    pot = rectangular_ev_nm(6.0, 0.2, 0.8)
    sp = to_solver_potential(pot)
    assert sp.v1 == 0.8
    # W localized: vanishes on both sides
    assert localized_value(sp, -10 * pot.length) == 0.0
    assert localized_value(sp, 10 * pot.length) == 0.0
    assert localized_value(sp, -0.5 * pot.length) == 6.0

    spc = to_solver_potential(truncated_coulomb_mev_fm(depth_ev=1e3))
    r0 = spc.r0
    assert math.isclose(localized_value(spc, -r0), spc.alpha / (2 * r0), rel_tol=1e-12)
    assert localized_value(spc, 1e-6 * r0) == 0.0


@given(x=st.floats(-5.0, 5.0, allow_nan=False))
def test_solver_value_matches_user_frame(x):
    pot = Rectangular(height=3.0, length=1.25, offset=0.5)
    sp = to_solver_potential(pot)
    shifted = evaluate(pot, x)
    # boundary points differ only in which side the (measure-zero) edge joins
    if min(abs(x - 0.0), abs(x - pot.length)) > 1e-9:
        assert shifted == pytest.approx(
            localized_value(sp, x - pot.length) - (sp.v1 if x - pot.length > 0 else 0.0)
        )
