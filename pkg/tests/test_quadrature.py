"""Grids, summation primitives, and the singular window rule."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad

from pathspectra.errors import DomainError
from pathspectra.quadrature import (
    GridBundle,
    compensated_sum,
    cumulative_trapezoid,
    paper_grids,
    singular_window_integral,
    trapezoid,
    uniform_grid,
)
from pathspectra.systems import EigenstateSpec, free_line, harmonic_oscillator


def test_uniform_grid_hits_both_endpoints():
    g = uniform_grid(-1.0, 2.0, 0.25)
    assert g[0] == -1.0 and g[-1] == 2.0
    assert g.size == 13
    assert np.allclose(np.diff(g), 0.25)


def test_uniform_grid_rounds_the_count():
    # a step that does not divide the span evenly is adjusted, not truncated
    g = uniform_grid(0.0, 1.0, 0.3)
    assert g.size == 4 and g[-1] == 1.0


def test_trapezoid_matches_numpy_and_is_linear():
    x = np.linspace(0.0, 3.0, 301)
    f = np.sin(x) + 1j * x
    g = np.cos(2 * x)
    assert trapezoid(x, f) == pytest.approx(np.trapezoid(f, x), rel=1e-14)
    combined = trapezoid(x, 2.0 * f + 0.5 * g)
    parts = 2.0 * trapezoid(x, f) + 0.5 * trapezoid(x, g)
    assert combined == pytest.approx(parts, rel=1e-14)


def test_cumulative_trapezoid_endpoint_equals_total():
    x = np.linspace(-1.0, 4.0, 173)
    f = np.exp(1j * x * x)
    cum = cumulative_trapezoid(x, f)
    assert cum.shape == x.shape
    assert cum[0] == 0.0
    assert cum[-1] == pytest.approx(trapezoid(x, f), rel=1e-14)


def test_compensated_sum_beats_naive_addition():
    rng = np.random.default_rng(31)
    big = rng.uniform(1e15, 1e16, size=500)
    values = np.concatenate([big, -big, rng.uniform(-1, 1, size=101)]).astype(complex)
    rng.shuffle(values)
    exact = math.fsum(values.real) + 1j * math.fsum(values.imag)
    assert compensated_sum(values) == pytest.approx(exact, abs=1e-8)


def test_grid_bundle_rejects_descending_grids():
    with pytest.raises(DomainError):
        GridBundle(
            p_c_grid=np.array([1.0, 0.0]),
            x_f_grid=np.array([0.0, 1.0]),
            T_samples=(1.0,),
            hbar_mass=1.0,
            n_p_floor=50.0,
            n_p_slope=150.0,
            singular_epsilon=None,
        )


def test_grid_bundle_spacings():
    bundle = GridBundle(
        p_c_grid=np.array([0.0, 1.0]),
        x_f_grid=np.array([0.0, 1.0]),
        T_samples=(1.0,),
        hbar_mass=2.0,
        n_p_floor=50.0,
        n_p_slope=150.0,
        singular_epsilon=None,
    )
    assert bundle.window_halfwidth(8.0) == pytest.approx(0.5)
    # the slope term takes over once 150*|x_f| exceeds the floor
    assert bundle.inner_spacing(0.1, 4.0) == pytest.approx(1.0 / (50.0 * 2.0))
    assert bundle.inner_spacing(2.0, 4.0) == pytest.approx(1.0 / (300.0 * 2.0))


def test_paper_grids_defaults():
    T = 32.0 * math.pi
    state = EigenstateSpec(harmonic_oscillator(), 0)
    g = paper_grids(state, T)
    assert g.x_f_grid[0] == pytest.approx(-5.0)
    assert g.x_f_grid[-1] == pytest.approx(5.0)
    assert g.x_f_grid.size == 101
    assert len(g.T_samples) == 32
    assert g.T_samples[0] == pytest.approx(T + math.pi / 32.0)
    # midpoints never hit the kernel singularities
    assert all(abs(math.sin(tp)) > 1e-12 for tp in g.T_samples)
    assert g.inner_spacing(1.0, T) == pytest.approx(1.0 / (150.0 * math.sqrt(T)))


def test_paper_grids_x_span_grows_with_n():
    g = paper_grids(EigenstateSpec(harmonic_oscillator(), 3), 32.0 * math.pi)
    # +-5*sqrt(7) ~ 13.23, snapped to the nearest whole number of 0.1 steps
    assert g.x_f_grid[-1] == pytest.approx(13.2, abs=1e-12)
    assert abs(g.x_f_grid[-1] - 5.0 * math.sqrt(7.0)) <= 0.05


def test_paper_grids_delta_T_override_keeps_full_period():
    state = EigenstateSpec(harmonic_oscillator(), 0)
    g = paper_grids(state, 32.0 * math.pi, delta_T=math.pi / 32.0)
    assert len(g.T_samples) == 64
    assert g.T_samples[-1] == pytest.approx(32.0 * math.pi + 2.0 * math.pi - math.pi / 64.0)


def test_paper_grids_rejects_unknown_overrides_and_other_systems():
    state = EigenstateSpec(harmonic_oscillator(), 0)
    with pytest.raises(DomainError):
        paper_grids(state, 1.0, delta_q=0.1)
    with pytest.raises(DomainError):
        paper_grids(EigenstateSpec(free_line(), 1.0), 1.0)


# ---------------------------------------------------------------------------
# singular windows


def test_singular_patch_weight_closed_form():
    sys_ = harmonic_oscillator()
    # constant factors, window exactly [b, b+eps]: the whole integral is the
    # patch, sqrt(eps*(eps + 2b))
    value = singular_window_integral(
        1.0, 1.01, 1.0, sys_, lambda p: np.ones_like(p),
        inner_spacing=1e-4, epsilon=0.01,
    )
    assert value.real == pytest.approx(math.sqrt(0.01 * 2.01), rel=1e-12)
    assert value.imag == 0.0


def test_singular_patch_weight_vanishes_with_epsilon():
    sys_ = harmonic_oscillator()
    values = [
        abs(
            singular_window_integral(
                1.0, 1.0 + eps, 1.0, sys_, lambda p: np.ones_like(p),
                inner_spacing=1e-6, epsilon=eps,
            )
        )
        for eps in (1e-2, 1e-4, 1e-6)
    ]
    assert values[0] > values[1] > values[2]
    assert values[2] < 2e-3


def test_excluded_region_contributes_nothing():
    sys_ = harmonic_oscillator()
    value = singular_window_integral(
        -0.5, 0.5, 1.0, sys_, lambda p: np.ones_like(p), inner_spacing=1e-3
    )
    assert value == 0.0


def test_singular_window_against_split_quadrature():
    sys_ = harmonic_oscillator()
    rng = np.random.default_rng(32)

    def factors(p):
        return np.exp(1j * 0.8 * np.asarray(p)) / (1.0 + np.asarray(p) ** 2)

    worst = 0.0
    for _ in range(8):
        x_f = rng.uniform(0.3, 2.0)
        b = x_f
        lo = rng.uniform(-b - 1.5, -b + 0.4)
        hi = rng.uniform(b - 0.4, b + 1.5)
        if hi <= lo:
            lo, hi = hi - 2.0, lo + 2.0
        got = singular_window_integral(
            lo, hi, x_f, sys_, factors, inner_spacing=2.5e-5
        )

        def one_side(a_mag, b_mag, sign):
            if b_mag <= a_mag:
                return 0.0 + 0.0j
            v_lo = math.sqrt(max(a_mag * a_mag - b * b, 0.0))
            v_hi = math.sqrt(b_mag * b_mag - b * b)

            def f(v, part):
                p = math.sqrt(v * v + b * b)
                val = complex(factors(np.asarray(sign * p)))
                return val.real if part == 0 else val.imag

            re = quad(f, v_lo, v_hi, args=(0,), limit=300, epsabs=1e-12)[0]
            im = quad(f, v_lo, v_hi, args=(1,), limit=300, epsabs=1e-12)[0]
            return re + 1j * im

        want = one_side(max(lo, b), hi, +1) + one_side(max(-min(hi, -b), b), -lo, -1)
        if abs(want) > 1e-6:
            worst = max(worst, abs(got - want) / abs(want))
    assert worst < 1e-4


def test_singular_window_argument_validation():
    sys_ = harmonic_oscillator()
    with pytest.raises(DomainError):
        singular_window_integral(1.0, 0.5, 1.0, sys_, lambda p: p, inner_spacing=1e-3)
    with pytest.raises(DomainError):
        singular_window_integral(
            0.5, 1.5, 1.0, sys_, lambda p: p, inner_spacing=1e-3, epsilon=-0.1
        )
    with pytest.raises(DomainError):
        singular_window_integral(0.5, 1.5, 1.0, free_line(), lambda p: p, inner_spacing=1e-3)
