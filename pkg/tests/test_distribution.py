"""Tests for path distributions, their moments, and the energy-density map."""

from __future__ import annotations

import math

import numpy as np
import pytest

import pathspectra as ps
from pathspectra.distribution import (
    PathDistribution,
    moments,
    spatial_average,
    stationary_grids,
    time_average,
    to_energy_density,
)
from pathspectra.errors import DegenerateDistributionError, DomainError
from pathspectra.quadrature import GridBundle

FREE = ps.free_line()
K1 = ps.EigenstateSpec(system=FREE, quantum_number=1.0)
HO = ps.harmonic_oscillator()
T32 = 32.0 * math.pi


def _synthetic(p, values, state=K1, T=100.0) -> PathDistribution:
    g = GridBundle(
        p_c_grid=np.asarray(p, dtype=float),
        x_f_grid=np.array([0.0, 1.0]),
        T_samples=(T,),
        hbar_mass=1.0,
    )
    return PathDistribution(
        p_c_grid=g.p_c_grid,
        values=np.asarray(values, dtype=np.complex128),
        state=state,
        T=T,
        time_averaged=False,
        normalization_N=1.0,
        grids=g,
    )


# ------------------------------------------------------------ stationary_grids

def test_stationary_grids_free_line_structure():
    g = stationary_grids(K1, 1.0e3)
    h = math.sqrt(1.0 / 1.0e3)
    steps = np.diff(g.p_c_grid)
    assert np.max(np.abs(steps - h / 10.0)) < 1e-12
    # centred on hbar*k = 1 with the tail-budget margin on both sides
    assert abs(0.5 * (g.p_c_grid[0] + g.p_c_grid[-1]) - 1.0) < 1e-9
    assert g.p_c_grid[-1] - 1.0 > 250.0   # sqrt(75/(T*1e-6)) ~ 274
    assert g.T_samples == (1.0e3,)


def test_stationary_grids_hard_wall_x_snapping():
    st = ps.EigenstateSpec(system=ps.hard_wall(), quantum_number=2.0)
    g = stationary_grids(st, 300.0)
    # default window 8*pi/k, snapped to half-periods pi/k of the standing wave
    half = math.pi / 2.0
    assert g.x_f_grid[0] == 0.0
    assert g.x_f_grid[-1] / half == pytest.approx(round(g.x_f_grid[-1] / half), abs=1e-9)


def test_stationary_grids_bounded_domains():
    stc = ps.EigenstateSpec(system=ps.circle(radius=1.0), quantum_number=2.0)
    gc = stationary_grids(stc, 300.0)
    assert gc.x_f_grid[0] == 0.0
    assert gc.x_f_grid[-1] == pytest.approx(2.0 * math.pi, abs=1e-12)
    stw = ps.EigenstateSpec(system=ps.square_well(width=math.pi), quantum_number=2.0)
    gw = stationary_grids(stw, 300.0)
    assert gw.x_f_grid[-1] == pytest.approx(math.pi, abs=1e-12)


def test_stationary_grids_validation():
    with pytest.raises(DomainError):
        stationary_grids(ps.EigenstateSpec(system=HO, quantum_number=0.0), 100.0)
    with pytest.raises(DomainError):
        stationary_grids(K1, -1.0)
    with pytest.raises(DomainError):
        stationary_grids(K1, 100.0, tail_budget=0.0)
    with pytest.raises(DomainError):
        stationary_grids(K1, 100.0, delta_p_c=-0.1)
    stc = ps.EigenstateSpec(system=ps.circle(radius=1.0), quantum_number=1.0)
    with pytest.raises(DomainError):
        stationary_grids(stc, 100.0, x_window=3.0)


# ------------------------------------------------------------- spatial_average

def test_collapsed_form_matches_grid_route():
    # free line: the conjugate weight cancels the x_f dependence exactly,
    # so the collapsed evaluation and the literal trapezoid must agree
    g = stationary_grids(K1, 1.0e3, p_c_span=(-2.0, 4.0), x_window=2.0 * math.pi)
    d_auto = spatial_average(K1, 1.0e3, g)
    d_grid = spatial_average(K1, 1.0e3, g, method="grid")
    assert np.max(np.abs(d_auto.values - d_grid.values)) < 1e-12


def test_free_line_norm_and_mean():
    g = stationary_grids(K1, 1.0e3)
    m = moments(spatial_average(K1, 1.0e3, g))
    assert abs(m["norm"] - 1.0) < 1e-6
    assert abs(m["mean"] - 1.0) < 1e-6


def test_circle_norm_and_peak():
    st = ps.EigenstateSpec(system=ps.circle(radius=1.0), quantum_number=2.0)
    g = stationary_grids(st, 1.0e3)
    m = moments(spatial_average(st, 1.0e3, g))
    assert abs(m["norm"] - 1.0) < 1e-6
    assert m["peak_location"] == pytest.approx(2.0, abs=1e-4)


def test_hard_wall_norm_even_mean_and_peaks():
    st = ps.EigenstateSpec(system=ps.hard_wall(), quantum_number=2.0)
    g = stationary_grids(st, 300.0, tail_budget=1e-4)
    m = moments(spatial_average(st, 300.0, g, threads=4))
    assert abs(m["norm"] - 1.0) < 1e-4
    assert abs(m["mean"]) < 1e-8          # even in p_c: two mirrored ridges
    assert abs(m["peak_location"]) == pytest.approx(2.0, abs=1e-3)


def test_square_well_norm_and_even_mean():
    st = ps.EigenstateSpec(system=ps.square_well(width=math.pi), quantum_number=2.0)
    g = stationary_grids(st, 300.0, tail_budget=1e-4)
    m = moments(spatial_average(st, 300.0, g, threads=4))
    assert abs(m["norm"] - 1.0) < 1e-4
    assert abs(m["mean"]) < 1e-8


def test_hard_wall_window_choice_is_immaterial():
    # the x window snaps to standing-wave half-periods, which kills the
    # boundary cross terms identically -- doubling it changes nothing
    st = ps.EigenstateSpec(system=ps.hard_wall(), quantum_number=2.0)
    g1 = stationary_grids(st, 300.0, tail_budget=1e-4)
    g2 = stationary_grids(st, 300.0, tail_budget=1e-4, x_window=8.0 * math.pi)
    d1 = spatial_average(st, 300.0, g1, threads=4)
    d2 = spatial_average(st, 300.0, g2, threads=4)
    assert np.max(np.abs(d1.values - d2.values)) < 1e-12


def test_fwhm_scales_as_inverse_sqrt_time():
    m1 = moments(spatial_average(K1, 1.0e3, stationary_grids(K1, 1.0e3)))
    m4 = moments(spatial_average(K1, 4.0e3, stationary_grids(K1, 4.0e3)))
    assert m4["fwhm"] / m1["fwhm"] == pytest.approx(0.5, abs=0.05)


def test_spatial_average_validation():
    g = stationary_grids(K1, 100.0, p_c_span=(0.0, 2.0))
    with pytest.raises(DomainError):
        spatial_average(K1, -5.0, g)
    with pytest.raises(DomainError):
        spatial_average(K1, 100.0, g, method="fancy")
    with pytest.raises(DomainError):
        spatial_average(K1, 100.0, g, threads=0)


# ---------------------------------------------------------------- time_average

def test_bare_oscillator_distribution_never_settles():
    """Without the period average the oscillator distribution is strongly
    T-dependent (focusing): a quarter period in changes it at the 90% level."""
    st = ps.EigenstateSpec(system=HO, quantum_number=1.0)
    xg = np.linspace(-8.7, 8.7, 175)
    pg = np.arange(0.9, 2.6 + 1e-9, 0.02)
    g = GridBundle(p_c_grid=pg, x_f_grid=xg, T_samples=(T32 + 0.4,), hbar_mass=1.0)
    dA = spatial_average(st, T32 + 0.4, g, threads=4)
    dB = spatial_average(st, T32 + 0.4 + math.pi / 2.0, g, threads=4)
    rel = np.max(np.abs(dA.values - dB.values)) / np.max(np.abs(dA.values))
    assert rel > 0.5


def test_time_average_is_mean_of_spatial_averages():
    st = ps.EigenstateSpec(system=HO, quantum_number=1.0)
    xg = np.linspace(-8.7, 8.7, 175)
    pg = np.arange(0.9, 2.6 + 1e-9, 0.02)
    ts = (T32 + 0.3, T32 + 1.1)
    g = GridBundle(p_c_grid=pg, x_f_grid=xg, T_samples=ts, hbar_mass=1.0)
    d = time_average(st, T32, g, threads=4)
    manual = 0.5 * (
        spatial_average(st, ts[0], g, threads=4).values
        + spatial_average(st, ts[1], g, threads=4).values
    )
    assert d.time_averaged
    assert np.max(np.abs(d.values - manual)) == 0.0


def test_time_average_is_oscillator_only():
    g = stationary_grids(K1, 100.0, p_c_span=(0.0, 2.0))
    with pytest.raises(DomainError):
        time_average(K1, 100.0, g)


# --------------------------------------------------------------------- moments

def test_moments_on_synthetic_gaussian():
    p = np.linspace(-1.0, 5.0, 1201)
    sigma, p0 = 0.4, 2.0
    vals = np.exp(-0.5 * ((p - p0) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
    m = moments(_synthetic(p, vals))
    assert m["norm"] == pytest.approx(1.0, abs=1e-8)
    assert m["mean"] == pytest.approx(p0, abs=1e-8)
    assert m["peak_location"] == pytest.approx(p0, abs=1e-6)
    assert m["fwhm"] == pytest.approx(2.0 * sigma * math.sqrt(2.0 * math.log(2.0)), abs=1e-3)
    assert m["max_im_ratio"] == 0.0
    assert all(isinstance(v, float) for v in m.values())


def test_moments_degenerate_and_unbracketed():
    p = np.linspace(0.0, 1.0, 11)
    with pytest.raises(DegenerateDistributionError):
        moments(_synthetic(p, np.zeros(11)))
    with pytest.raises(DomainError):
        # flat top: half maximum never reached inside the grid
        moments(_synthetic(p, np.ones(11)))


# ------------------------------------------------------------ to_energy_density

def test_energy_density_preserves_the_norm():
    # smooth even double bump: the energy-space trapezoid telescopes onto the
    # two-sided momentum trapezoid exactly
    step = 0.01
    p = step * np.arange(-400, 401)   # exact lattice; arange-from-float drifts
    vals = np.exp(-0.5 * ((p - 2.0) / 0.2) ** 2) + np.exp(-0.5 * ((p + 2.0) / 0.2) ** 2)
    vals /= np.trapezoid(vals, p)
    d = _synthetic(p, vals)
    e = to_energy_density(d)
    assert e.e_c_grid[0] == pytest.approx(step * step / 2.0, rel=1e-12)
    e_norm = np.trapezoid(e.values.real, e.e_c_grid)
    assert e_norm == pytest.approx(1.0, abs=1e-12)


def test_energy_density_weight_and_validation():
    p = np.arange(-1.0, 1.0 + 1e-9, 0.5)
    vals = np.array([0.1, 0.4, 1.0, 0.4, 0.1])
    d = _synthetic(p, vals)
    e = to_energy_density(d)
    # nodes p = 0.5, 1.0 map to E = p^2/2 with the 1/sqrt(E) Jacobian
    assert e.e_c_grid == pytest.approx([0.125, 0.5])
    assert e.values[0] == pytest.approx(math.sqrt(2.0 / 0.125) * 0.4, rel=1e-12)
    with pytest.raises(DomainError):
        to_energy_density(_synthetic(np.array([-0.5, 0.0, 0.5]), np.ones(3)))
