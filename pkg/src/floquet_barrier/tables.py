"""Adaptive spatial cache of Fourier coefficients.

Table-driven potentials (truncated Coulomb, tabulated) are sampled on an
error-refined grid and interpolated with cubic Hermite polynomials inside the
integration kernel.  Kink positions (edge-sweep boundaries c +- chi0 and the
potential breakpoints themselves) are grid segment boundaries with one-sided
slopes, so the interpolant is exact about them.  Outside the table range the
kernel reads W = 0; the table range therefore doubles as the segment window
for composed solves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kh import coefficients_real_batch
from .potentials import SolverPotential


@dataclass(frozen=True)
class CoefficientTable:
    y: np.ndarray
    values: np.ndarray
    slope_r: np.ndarray
    slope_l: np.ndarray
    bounds: np.ndarray  # segment boundaries incl. window ends (kinks/jumps)

    @property
    def n_points(self) -> int:
        return self.y.shape[0]


def _segment_bounds(sp: SolverPotential, chi0: float, lo: float, hi: float, sign: float):
    if sp.kind == "piecewise":
        breaks = np.asarray(sp.pc_edges)
    elif sp.kind == "coulomb":
        breaks = np.array([0.0])
    else:
        breaks = np.asarray(sp.tab_x)
    pts = [lo, hi]
    for c in breaks:
        for q in (c - chi0, c, c + chi0):
            t = sign * q
            if lo < t < hi:
                pts.append(t)
    return np.unique(np.array(pts))


def _seed_nodes(a: float, b: float) -> np.ndarray:
    if a < 0 and b < 0 and a / b > 50.0:
        return -np.geomspace(-b, -a, 49)[::-1]
    if a > 0 and b > 0 and b / a > 50.0:
        return np.geomspace(a, b, 49)
    return np.linspace(a, b, 17)


def _fd_slopes(y: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Weighted one-sided slope average on a non-uniform grid."""
    m = np.empty_like(f)
    h = np.diff(y)
    d = (f[1:] - f[:-1]) / h[:, None]
    m[0] = d[0]
    m[-1] = d[-1]
    if y.shape[0] > 2:
        w0 = h[1:][:, None]
        w1 = h[:-1][:, None]
        m[1:-1] = (d[:-1] * w0 + d[1:] * w1) / (w0 + w1)
    return m


def _hermite_mid(y, f, m):
    """Interpolated values at interval midpoints."""
    h = np.diff(y)[:, None]
    # t = 1/2: h00 = h01 = 1/2, h10 = -h11 = 1/8
    return 0.5 * (f[:-1] + f[1:]) + 0.125 * h * (m[:-1] - m[1:])


def build_coefficient_table(
    sp: SolverPotential,
    chi0: float,
    n_max: int,
    lo: float,
    hi: float,
    mirror: bool = False,
    tol: float = 1e-9,
    panel_factor: int = 1,
    max_points: int = 200_000,
) -> CoefficientTable:
    """W_n samples over [lo, hi] (table coordinates), refined until the cubic
    Hermite midpoint error is below tol * (coefficient scale).

    With mirror=True the table holds W_n(-z), i.e. the space-reflected channel
    couplings used for right-incidence segment solves.
    """
    if not (hi > lo):
        raise ValueError("empty table window")
    sign = -1.0 if mirror else 1.0

    def evaluate(zs: np.ndarray) -> np.ndarray:
        return coefficients_real_batch(sp, chi0, sign * zs, n_max, panel_factor)

    bounds = _segment_bounds(sp, chi0, lo, hi, sign)
    keep = np.concatenate(([True], np.diff(bounds) > 1e-14 * (hi - lo)))
    bounds = bounds[keep]
    seg_nodes = []
    seg_vals = []
    scale = 0.0
    for a, b in zip(bounds[:-1], bounds[1:]):
        ys = np.unique(_seed_nodes(a, b))
        fs = evaluate(ys)
        scale = max(scale, float(np.max(np.abs(fs))))
        seg_nodes.append(ys)
        seg_vals.append(fs)
    tol_abs = tol * max(scale, 1e-300)

    for s in range(len(seg_nodes)):
        ys, fs = seg_nodes[s], seg_vals[s]
        for _ in range(48):
            ms = _fd_slopes(ys, fs)
            mids = 0.5 * (ys[:-1] + ys[1:])
            approx = _hermite_mid(ys, fs, ms)
            direct = evaluate(mids)
            err = np.max(np.abs(approx - direct), axis=1)
            bad = np.where(err > tol_abs)[0]
            if bad.size == 0 or ys.size + bad.size > max_points:
                break
            order = np.argsort(np.concatenate((ys, mids[bad])))
            ys = np.concatenate((ys, mids[bad]))[order]
            fs = np.concatenate((fs, direct[bad]))[order]
        seg_nodes[s], seg_vals[s] = ys, fs

    ms0 = _fd_slopes(seg_nodes[0], seg_vals[0])
    y_all = [seg_nodes[0]]
    v_all = [seg_vals[0]]
    sr_all = [ms0.copy()]
    sl_all = [ms0.copy()]
    for s in range(1, len(seg_nodes)):
        ms = _fd_slopes(seg_nodes[s], seg_vals[s])
        # shared boundary node keeps the left slope of the previous segment;
        # its right slope comes from this segment (one-sided about kinks)
        sr_all[-1][-1] = ms[0]
        y_all.append(seg_nodes[s][1:])
        v_all.append(seg_vals[s][1:])
        sr_all.append(ms[1:].copy())
        sl_all.append(ms[1:].copy())
    y = np.concatenate(y_all)
    values = np.vstack(v_all)
    slope_r = np.vstack(sr_all)
    slope_l = np.vstack(sl_all)
    return CoefficientTable(
        y=y, values=values, slope_r=slope_r, slope_l=slope_l, bounds=bounds
    )
