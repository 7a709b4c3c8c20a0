import math

import numpy as np
import pytest

from floquet_barrier.potentials import (
    DriveField,
    ParticleSpec,
    dt_reduced,
    rectangular_ev_nm,
    truncated_coulomb_mev_fm,
)
from floquet_barrier.solver import (
    SolverSettings,
    adaptive_channel_count,
    relative_enhancement,
    solve_scattering,
    static_reference,
    time_averaged_transmission,
    total_transmission,
)

MU = 511e3


def test_unitarity_small_drive(electron_511, rect6):
    res = solve_scattering(0.28, rect6, DriveField(1e8, 0.12), electron_511, 10)
    assert res.unitarity_deficit < 1e-7
    assert np.all(res.transmitted >= 0) and np.all(res.reflected >= 0)
    # closed channels carry no probability
    assert np.all(res.transmitted[~res.open_right] == 0)
    assert np.all(res.reflected[~res.open_left] == 0)


def test_threshold_energy_flagged(electron_511, rect6):
    res = solve_scattering(0.24, rect6, DriveField(1e8, 0.12), electron_511, 4)
    assert res.threshold_regularized
    assert res.unitarity_deficit < 1e-6


def test_enhancement_identity_without_field(electron_511, rect6):
    assisted = solve_scattering(0.4, rect6, DriveField(0.0, 0.12), electron_511, 0)
    static = static_reference(0.4, rect6, electron_511)
    assert relative_enhancement(assisted, static) == pytest.approx(1.0, rel=1e-12)
    assert total_transmission(assisted) == assisted.total_transmission


def test_enhancement_infinite_sentinel(electron_511, rect6):
    static = static_reference(0.4, rect6, electron_511)
    from dataclasses import replace

    fake_zero = replace(static, total_transmission=0.0)
    assert math.isinf(relative_enhancement(static, fake_zero))


def test_time_averaged_equals_static_without_field(electron_511, rect6):
    tavg = time_averaged_transmission(0.4, rect6, DriveField(0.0, 0.12), electron_511)
    static = static_reference(0.4, rect6, electron_511)
    assert tavg.total_transmission == pytest.approx(static.total_transmission, rel=1e-12)
    assert tavg.strategy == "time-averaged"


def test_time_averaged_close_to_static_for_tiny_quiver(electron_511, rect6):
    """chi0 much smaller than the barrier: the period-averaged barrier is a
    second-order-in-chi0 deformation."""
    drive = DriveField(1e5, 0.12)  # chi0 ~ 3e-3 L
    tavg = time_averaged_transmission(0.4, rect6, drive, electron_511)
    static = static_reference(0.4, rect6, electron_511)
    rel = abs(tavg.total_transmission - static.total_transmission) / static.total_transmission
    assert rel < 1e-4


def test_adaptive_zero_field_returns_zero_channels(electron_511, rect6):
    out = adaptive_channel_count(0.4, rect6, DriveField(0.0, 0.12), electron_511)
    assert out.half_width == 0 and out.converged


def test_adaptive_reports_within_cap(electron_511, rect6):
    settings = SolverSettings(max_channels=12, adaptive_target=1e-5)
    out = adaptive_channel_count(0.28, rect6, DriveField(5e7, 0.12), electron_511, settings)
    assert out.result.unitarity_deficit < 1e-5
    assert out.half_width <= 12
    assert len(out.history) >= 1


def test_adaptive_determinism(electron_511, rect6):
    settings = SolverSettings(max_channels=16)
    a = adaptive_channel_count(0.31, rect6, DriveField(8e7, 0.12), electron_511, settings)
    b = adaptive_channel_count(0.31, rect6, DriveField(8e7, 0.12), electron_511, settings)
    assert a.half_width == b.half_width
    assert a.result.total_transmission == b.result.total_transmission


def test_tolerance_refinement_consistency(electron_511, rect6):
    """Halving rel_tol moves the answer by less than ten times the global
    error estimate (step count x tolerance) of the looser run."""
    drive = DriveField(2e8, 0.12)
    loose = solve_scattering(0.28, rect6, drive, electron_511, 8,
                             SolverSettings(rel_tol=1e-7, abs_tol=1e-9))
    tight = solve_scattering(0.28, rect6, drive, electron_511, 8,
                             SolverSettings(rel_tol=5e-8, abs_tol=5e-10))
    change = abs(loose.total_transmission - tight.total_transmission)
    budget = 10.0 * loose.n_steps * 1e-7 * loose.total_transmission
    assert change < budget


def test_sideband_probabilities_positive_at_fig3_point(electron_511, rect6):
    res = solve_scattering(0.28, rect6, DriveField(6e8, 0.12), electron_511, 20, n_max=40)
    assert res.transmitted_probability(1) > 0
    assert res.transmitted_probability(-1) > 0
    assert res.unitarity_deficit < 1e-6


@pytest.mark.slow
def test_two_phase_strategy_deep_well():
    """V1 = 17.6 MeV truncated Coulomb forces the step-rescaled solve."""
    part = dt_reduced()
    pot = truncated_coulomb_mev_fm(depth_ev=17.6e6)
    drive = DriveField(7e16, 6e3)
    settings = SolverSettings(rel_tol=1e-9, abs_tol=1e-11)
    res = solve_scattering(8e3, pot, drive, part, 8, settings)
    assert res.strategy == "rescaled-step"
    assert res.unitarity_deficit < 1e-6
    static = static_reference(8e3, pot, part, settings)
    assert static.strategy == "raw"  # single open channel, no closed growth
    enh = relative_enhancement(res, static)
    assert 1.0 < enh < 2.0


@pytest.mark.slow
def test_adaptive_consistent_with_paper_channel_count():
    """Weak-drive Coulomb case: adaptive N lands in the band around the
    16-channel half-width used for the frequency-scan figure (+-8)."""
    part = dt_reduced()
    pot = truncated_coulomb_mev_fm()
    drive = DriveField(2e16, 3e3)
    settings = SolverSettings(
        rel_tol=1e-10, abs_tol=1e-12, adaptive_target=1e-6, max_channels=32
    )
    out = adaptive_channel_count(6e3, pot, drive, part, settings)
    assert out.converged
    assert 8 <= out.half_width <= 24
    assert out.result.unitarity_deficit < 1e-6
