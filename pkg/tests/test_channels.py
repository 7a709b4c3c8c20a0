import math

import numpy as np
import pytest

from floquet_barrier.channels import (
    ChannelGrid,
    build_grid,
    free_solutions,
    matching_constant,
)
from floquet_barrier.potentials import ParticleSpec

MU = 511e3
ELECTRON = ParticleSpec(MU, 1.0)
DT = ParticleSpec(1.13e9, 0.2)


def test_open_channel_classification_fig3_parameters():
    grid = build_grid(0.28, 0.12, ELECTRON, 0.0, 3)
    open_set = {int(n) for n, o in zip(grid.indices, grid.open_left) if o}
    assert open_set == {-2, -1, 0, 1, 2, 3}
    assert not grid.open_left[grid.index_of(-3)]
    assert not grid.threshold_regularized


def test_threshold_channel_regularized():
    grid = build_grid(0.12, 0.12, ELECTRON, 0.0, 2)
    assert grid.threshold_regularized
    # nudged by +1e-12 w: channel -1 ends up barely open with finite momentum
    k = grid.k_left[grid.index_of(-1)]
    assert abs(k) > 0
    assert grid.energy > 0.12


def test_paper_channel_count():
    grid = build_grid(6e3, 6e3, DT, 0.0, 16)
    assert grid.n_channels == 33


def test_branch_rule_upper_half_plane():
    grid = build_grid(0.28, 0.12, ELECTRON, -0.7, 6)
    assert np.all(grid.k_left.imag >= 0)
    assert np.all(grid.k_right.imag >= 0)
    closed = ~grid.open_left
    assert np.all(grid.k_left.imag[closed] > 0)
    assert np.all(np.abs(grid.k_left.real[closed]) < 1e-9 * np.abs(grid.k_left.imag[closed]))


def test_invalid_grid_inputs():
    with pytest.raises(ValueError):
        build_grid(-1.0, 0.12, ELECTRON, 0.0, 2)
    with pytest.raises(ValueError):
        build_grid(0.0, 0.12, ELECTRON, 0.0, 2)
    with pytest.raises(ValueError):
        build_grid(1.0, 0.12, ELECTRON, 0.0, -1)
    with pytest.raises(ValueError):
        build_grid(1.0, 0.0, ELECTRON, 0.0, 2)


def test_free_solutions_reduce_to_plane_waves():
    grid = build_grid(0.28, 0.12, ELECTRON, 0.0, 2)
    k = grid.k_left[grid.index_of(1)]
    for y in (-0.7, 0.0, 1.3):
        phi1, phi2 = free_solutions(grid, 1, y)
        assert phi1 == pytest.approx(np.exp(-1j * k * y), rel=1e-14)
        assert phi2 == pytest.approx(np.exp(1j * k * y), rel=1e-14)


def test_free_solutions_continuity_at_step():
    grid = build_grid(0.9, 0.12, ELECTRON, 0.6, 3)
    eps = 1e-9
    kmax = float(np.max(np.abs(grid.k_right)))
    for n in range(-3, 4):
        for fn in (lambda y, n=n: free_solutions(grid, n, y)[0],
                   lambda y, n=n: free_solutions(grid, n, y)[1]):
            left, right = fn(-eps), fn(eps)
            # a C1 function still moves by ~|phi'| 2 eps across the stencil
            assert abs(left - right) < 5 * kmax * eps * max(abs(left), 1.0)
            dl = (fn(-eps) - fn(-3 * eps)) / (2 * eps)
            dr = (fn(3 * eps) - fn(eps)) / (2 * eps)
            assert abs(dl - dr) < 1e-4 * max(abs(dl), 1.0)


def test_closed_channel_decay_directions():
    """Branch Im k >= 0 makes phi1 decay leftward and phi2 decay rightward.

    (The left-decaying behavior is what the outgoing Green's function needs;
    phi2's leftward continuation grows, it is the unit-transmission state.)
    """
    grid = build_grid(0.1, 0.12, ELECTRON, 0.0, 3)
    n = -2  # deeply closed
    mags1 = [abs(free_solutions(grid, n, y)[0]) for y in (-0.1, -0.2, -0.3)]
    assert mags1[0] > mags1[1] > mags1[2]
    mags2 = [abs(free_solutions(grid, n, y)[1]) for y in (0.1, 0.2, 0.3)]
    assert mags2[0] > mags2[1] > mags2[2]


def test_matching_constant():
    grid = build_grid(0.9, 0.12, ELECTRON, 0.6, 1)
    i = grid.index_of(0)
    c = matching_constant(grid, 0)
    assert c == pytest.approx(-1j / (grid.k_left[i] + grid.k_right[i]))
    g0 = build_grid(0.9, 0.12, ELECTRON, 0.0, 1)
    assert matching_constant(g0, 0) == pytest.approx(
        1.0 / (2j * g0.k_left[g0.index_of(0)])
    )


def test_index_bounds():
    grid = build_grid(0.9, 0.12, ELECTRON, 0.0, 2)
    with pytest.raises(ValueError):
        grid.index_of(3)
