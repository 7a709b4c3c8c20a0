"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` (the whole gate takes a
desk-scale coffee break; the heavy items are marked slow as well).
"""

import math
import os
import time

import numpy as np
import pytest

from floquet_barrier.figures_data import FIG7_RESONANCE_CONFIG
from floquet_barrier.oracles import (
    quivering_rectangular,
    static_coulomb,
    static_rectangular,
    wkb_gamow,
)
from floquet_barrier.potentials import (
    DriveField,
    ParticleSpec,
    dt_reduced,
    rectangular_ev_nm,
    truncated_coulomb_mev_fm,
)
from floquet_barrier.resonance import find_resonances
from floquet_barrier.solver import (
    SolverSettings,
    adaptive_channel_count,
    relative_enhancement,
    solve_scattering,
    static_reference,
    time_averaged_transmission,
)
from floquet_barrier.units import nm_to_natural

ELECTRON = ParticleSpec(511e3, 1.0)
DT = dt_reduced()
RECT6 = rectangular_ev_nm(6.0, 0.2, 0.0)
COULOMB = truncated_coulomb_mev_fm()
CSET = SolverSettings(rel_tol=1e-10, abs_tol=1e-12)

pytestmark = pytest.mark.acceptance


def report(num, ok, detail):
    print(f"\n[ACCEPTANCE {num:>2}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_01_static_reduction():
    """Floquet solver at zero field vs the closed form, 50 energies x 3 offsets."""
    tight = SolverSettings(rel_tol=1e-11, abs_tol=1e-13)
    energies = np.linspace(0.05, 5.95, 50)
    t0 = time.perf_counter()
    worst = 0.0
    off = DriveField(0.0, 0.0)
    for v1 in (0.0, 1.0, -1.0):
        pot = rectangular_ev_nm(6.0, 0.2, v1)
        for energy in energies:
            res = solve_scattering(float(energy), pot, off, ELECTRON, 0, tight)
            ref = static_rectangular(float(energy), 6.0, pot.length, v1, 511e3)
            worst = max(worst, abs(res.total_reflection - ref.reflection) / max(ref.reflection, 1e-300))
            if ref.transmission > 0:
                worst = max(worst, abs(res.total_transmission - ref.transmission) / ref.transmission)
    elapsed = time.perf_counter() - t0
    report(
        1,
        worst < 1e-8 and elapsed < 30.0,
        f"static reduction worst rel err {worst:.2e} (target 1e-8), {elapsed:.1f} s (target 30 s)",
    )


@pytest.mark.slow
def test_criterion_02_unitarity_scan():
    """Adaptive N keeps the unitarity deficit below 1e-6 on a 50-point scan."""
    settings = SolverSettings(max_channels=16, adaptive_target=1e-6)
    drive = DriveField(6.0e8, 0.12)
    energies = np.linspace(0.02, 0.60, 50)
    t0 = time.perf_counter()
    worst = 0.0
    for energy in energies:
        out = adaptive_channel_count(float(energy), RECT6, drive, ELECTRON, settings)
        worst = max(worst, out.result.unitarity_deficit)
    elapsed = time.perf_counter() - t0
    report(
        2,
        worst < 1e-6 and elapsed < 300.0,
        f"worst deficit {worst:.2e} (target 1e-6), {elapsed:.0f} s (target 300 s)",
    )


@pytest.mark.slow
def test_criterion_03_cross_oracle():
    """Quasi-amplitude solver vs Bessel junction matching at matched count.

    Both truncations approach the same limit (verified to 10 digits on the
    oracle side), but the solver's channel-Galerkin error at feasible counts
    exceeds the 1e-3 target at these parameters; see the decisions ledger.
    """
    count = int(os.environ.get("FB_CROSS_ORACLE_COUNT", "144"))
    energy = 0.28
    drive = DriveField(6.0e8, 0.12)
    sol = quivering_rectangular(energy, 6.0, RECT6.length, 0.0, drive, ELECTRON, count)
    res = solve_scattering(energy, RECT6, drive, ELECTRON, count, n_max=2 * count)
    rel = abs(res.total_transmission - sol.total_transmission) / sol.total_transmission
    report(
        3,
        rel < 1e-3,
        f"matched count {count}: solver {res.total_transmission:.6e} vs junction "
        f"{sol.total_transmission:.6e} (psum-1 {sol.probability_sum-1:.1e}), rel diff {rel:.2e} (target 1e-3)",
    )


@pytest.mark.slow
def test_criterion_04_resonance_cusps():
    """Local enhancement extrema within one 2 meV step of w and 2w."""
    drive = DriveField(6.0e8, 0.12)
    energies = np.arange(0.06, 0.301, 0.002)
    enh = []
    for energy in energies:
        assisted = solve_scattering(float(energy), RECT6, drive, ELECTRON, 20, n_max=40)
        static = static_reference(float(energy), RECT6, ELECTRON)
        enh.append(assisted.total_transmission / static.total_transmission)
    enh = np.array(enh)
    extrema = [
        float(energies[i])
        for i in range(1, len(energies) - 1)
        if (enh[i] - enh[i - 1]) * (enh[i + 1] - enh[i]) < 0
    ]
    near1 = any(abs(e - 0.12) <= 0.002 + 1e-12 for e in extrema)
    near2 = any(abs(e - 0.24) <= 0.002 + 1e-12 for e in extrema)
    report(
        4,
        near1 and near2,
        f"extrema near w: {near1}, near 2w: {near2} (found at {[f'{e:.3f}' for e in extrema]})",
    )


@pytest.mark.slow
def test_criterion_05_sideband_crossover_and_slopes():
    """Sideband crossover in L and the opaque-limit decay constants.

    Note: at Fig. 3's parameters the quiver amplitude (3.2 nm) exceeds every
    scanned barrier width, violating the opaque approximation's own validity
    condition L >> chi0; the measured behavior is reported as-is.
    """
    drive = DriveField(6.0e8, 0.12)
    lengths_nm = np.linspace(0.05, 0.5, 16)
    pp, pm = [], []
    for lnm in lengths_nm:
        pot = rectangular_ev_nm(6.0, float(lnm), 0.0)
        res = solve_scattering(0.28, pot, drive, ELECTRON, 20, n_max=40)
        pp.append(res.transmitted_probability(1))
        pm.append(res.transmitted_probability(-1))
    pp, pm = np.array(pp), np.array(pm)
    diff = pp - pm
    crossover = bool(np.any(diff[:-1] * diff[1:] < 0))
    sel = lengths_nm >= 0.36
    lnat = nm_to_natural(1.0) * lengths_nm[sel]
    slope_p = float(np.polyfit(lnat, np.log(pp[sel]), 1)[0])
    slope_m = float(np.polyfit(lnat, np.log(pm[sel]), 1)[0])
    ref_p = -2.0 * math.sqrt(2 * 511e3 * (6.0 - 0.28 - 0.12))
    ref_m = -2.0 * math.sqrt(2 * 511e3 * (6.0 - 0.28))
    ok_p = abs(slope_p - ref_p) / abs(ref_p) < 0.05
    ok_m = abs(slope_m - ref_m) / abs(ref_m) < 0.05
    report(
        5,
        crossover and ok_p and ok_m,
        f"crossover {crossover}; slopes {slope_p:.0f}/{slope_m:.0f} vs {ref_p:.0f}/{ref_m:.0f} "
        f"(rel {abs(slope_p-ref_p)/abs(ref_p):.2f}, {abs(slope_m-ref_m)/abs(ref_m):.2f}, target 0.05)",
    )


@pytest.mark.slow
def test_criterion_06_perturbative_scaling():
    """log-log slope 2.0 +- 0.1 in the decade below 1e16 V/m; super-quadratic
    local slope above 1e17 V/m."""
    fields_low = np.geomspace(1e15, 1e16, 4)
    enh_low = []
    for field in fields_low:
        assisted = solve_scattering(2e3, COULOMB, DriveField(float(field), 2e3), DT, 8, CSET)
        static = static_reference(2e3, COULOMB, DT, CSET)
        enh_low.append(assisted.total_transmission / static.total_transmission - 1.0)
    slope_low = float(np.polyfit(np.log(fields_low), np.log(enh_low), 1)[0])
    fields_hi = np.array([1e17, 1.6e17])
    enh_hi = []
    for field in fields_hi:
        assisted = solve_scattering(2e3, COULOMB, DriveField(float(field), 2e3), DT, 28, CSET)
        static = static_reference(2e3, COULOMB, DT, CSET)
        enh_hi.append(assisted.total_transmission / static.total_transmission - 1.0)
    slope_hi = float(np.diff(np.log(enh_hi))[0] / np.diff(np.log(fields_hi))[0])
    report(
        6,
        abs(slope_low - 2.0) <= 0.1 and slope_hi > 2.5,
        f"low-field slope {slope_low:.3f} (target 2.0 +- 0.1), "
        f"local slope at >=1e17: {slope_hi:.2f} (target > 2.5)",
    )


@pytest.mark.slow
def test_criterion_07_time_averaged_ordering():
    """Lower half of the frequency scan: time-averaged < static < full."""
    scan = [3e3, 5e3, 8e3, 11e3]
    lower = [w for w in scan if w <= scan[0] + 0.5 * (scan[-1] - scan[0])]
    ok = True
    details = []
    for omega in scan:
        drive = DriveField(2e16, float(omega))
        full = solve_scattering(6e3, COULOMB, drive, DT, 16, CSET)
        if omega in lower:
            static = static_reference(6e3, COULOMB, DT, CSET)
            tavg = time_averaged_transmission(6e3, COULOMB, drive, DT, CSET)
            good = tavg.total_transmission < static.total_transmission < full.total_transmission
            ok = ok and good
            details.append(f"w={omega:.0f}: {tavg.total_transmission:.3e} < "
                           f"{static.total_transmission:.3e} < {full.total_transmission:.3e} -> {good}")
    report(7, ok, "; ".join(details))


@pytest.mark.slow
def test_criterion_08_coulomb_resonance_peak():
    """Local enhancement maximum within one grid step of E = w = 6 keV."""
    drive = DriveField(1.8e17, 6e3)
    energies = np.arange(4.8e3, 7.3e3, 0.4e3)
    enh = []
    for energy in energies:
        assisted = solve_scattering(float(energy), COULOMB, drive, DT, 12, CSET)
        static = static_reference(float(energy), COULOMB, DT, CSET)
        enh.append(assisted.total_transmission / static.total_transmission)
    enh = np.array(enh)
    peaks = [
        float(energies[i])
        for i in range(1, len(energies) - 1)
        if enh[i] > enh[i - 1] and enh[i] > enh[i + 1]
    ]
    ok = any(abs(p - 6e3) <= 0.4e3 + 1e-9 for p in peaks)
    report(8, ok, f"enhancement peaks at {peaks} (grid step 400 eV about 6000 eV); "
                  f"curve: {[f'{v:.2f}' for v in enh]}")


@pytest.mark.slow
def test_criterion_09_complex_scaling_resonances():
    """Theta-stable isolated points within 0.2 keV of 0, w and 2w."""
    report_obj = find_resonances(COULOMB, DriveField(3e16, 6e3), DT, FIG7_RESONANCE_CONFIG)
    anchors = (0.0, 6e3, 12e3)
    res = report_obj.resonances
    ok_exist = len(res) >= 2
    ok_near = all(min(abs(r.energy.real - a) for a in anchors) <= 0.2e3 for r in res)
    ok_stable = all(r.stability < report_obj.stability_threshold for r in res)
    per_anchor = {
        a: sum(1 for r in res if abs(r.energy.real - a) <= 0.2e3) for a in anchors
    }
    ok_pairs = per_anchor[6e3] >= 1 and per_anchor[12e3] >= 1
    report(
        9,
        ok_exist and ok_near and ok_stable and ok_pairs,
        f"{len(res)} classified, per-anchor counts {per_anchor}, all within 0.2 keV: {ok_near}, "
        f"theta-stable: {ok_stable}",
    )


@pytest.mark.slow
def test_criterion_10_deep_well_enhancement():
    """V1 = 17.6 MeV: relative enhancement minus one within [0.02, 0.50]."""
    pot = truncated_coulomb_mev_fm(depth_ev=17.6e6)
    drive = DriveField(7e16, 6e3)
    settings = SolverSettings(rel_tol=1e-9, abs_tol=1e-11)
    values = []
    ok = True
    for energy in (2e3, 5e3, 8e3, 11e3, 14e3):
        assisted = solve_scattering(float(energy), pot, drive, DT, 8, settings)
        static = static_reference(float(energy), pot, DT, settings)
        excess = relative_enhancement(assisted, static) - 1.0
        values.append(f"E={energy:.0f}: {excess:.3f}")
        ok = ok and 0.02 <= excess <= 0.50
    report(10, ok, "; ".join(values))


def test_criterion_11_wkb_consistency():
    """Static Coulomb ln T vs the Gamow exponent within 10% over 2..20 keV."""
    worst = 0.0
    for energy in np.linspace(2e3, 20e3, 10):
        res = static_coulomb(float(energy), COULOMB.strength, COULOMB.inner_radius, 0.0, DT.mass)
        gamow = wkb_gamow(COULOMB, float(energy), DT.mass)
        worst = max(worst, abs(math.log(res.transmission) - gamow) / abs(gamow))
    report(11, worst < 0.10, f"worst |ln T - Gamow|/|Gamow| = {worst:.3f} (target 0.10)")
