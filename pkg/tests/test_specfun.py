"""Special-function layer: recurrences against scipy, Fresnel against quad."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_hermite, eval_laguerre

from pathspectra.errors import DomainError
from pathspectra.specfun import (
    MAX_DEGREE,
    gaussian_phase_integral,
    hermite,
    ho_eigenfunction,
    laguerre,
)


def test_hermite_matches_scipy_across_degrees():
    rng = np.random.default_rng(11)
    x = rng.uniform(-4.0, 4.0, size=40)
    for n in (0, 1, 2, 5, 17, 40):
        ours = hermite(n, x)
        ref = eval_hermite(n, x)
        assert np.allclose(ours, ref, rtol=1e-10, atol=1e-8)


def test_hermite_scalar_in_scalar_out():
    value = hermite(3, 0.7)
    assert isinstance(value, float)
    assert value == pytest.approx(8 * 0.7**3 - 12 * 0.7, rel=1e-14)


def test_laguerre_matches_scipy():
    rng = np.random.default_rng(12)
    x = rng.uniform(0.0, 8.0, size=30)
    for n in (0, 1, 3, 10, 25):
        assert np.allclose(laguerre(n, x), eval_laguerre(n, x), rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("bad", [-1, MAX_DEGREE + 1, 2.5, "3"])
def test_degree_guard_rejects_out_of_range(bad):
    with pytest.raises(DomainError):
        hermite(bad, 0.0)


def test_ho_eigenfunction_orthonormal():
    x = np.linspace(-14.0, 14.0, 4001)
    dx = x[1] - x[0]
    for m, n in ((0, 0), (3, 3), (7, 7), (0, 2), (1, 4), (5, 6)):
        overlap = np.sum(ho_eigenfunction(m, x) * ho_eigenfunction(n, x)) * dx
        want = 1.0 if m == n else 0.0
        assert overlap == pytest.approx(want, abs=1e-10)


def test_ho_eigenfunction_parity():
    x = np.linspace(0.1, 5.0, 23)
    for n in range(6):
        left = ho_eigenfunction(n, -x)
        right = (-1.0) ** n * ho_eigenfunction(n, x)
        assert np.allclose(left, right, rtol=0, atol=1e-14)


def test_ho_eigenfunction_scaled_units_stay_normalized():
    hbar, mass, omega = 0.7, 2.3, 1.9
    x = np.linspace(-8.0, 8.0, 6001) * math.sqrt(hbar / (mass * omega))
    for n in (0, 4):
        values = ho_eigenfunction(n, x, hbar=hbar, mass=mass, omega=omega)
        norm = np.trapezoid(values**2, x)
        assert norm == pytest.approx(1.0, abs=1e-9)


def test_ho_eigenfunction_high_degree_finite():
    # The folded recurrence must not overflow where a H_n * exp(-xi^2/2)
    # product would.
    values = ho_eigenfunction(MAX_DEGREE, np.linspace(-12.0, 12.0, 101))
    assert np.all(np.isfinite(values))


def _quad_oracle(a: float, b: float, gamma: float) -> complex:
    re = quad(lambda u: math.cos(gamma * u * u), a, b, limit=400, epsabs=1e-13)[0]
    im = quad(lambda u: math.sin(gamma * u * u), a, b, limit=400, epsabs=1e-13)[0]
    return re + 1j * im


def test_gaussian_phase_integral_against_quad():
    rng = np.random.default_rng(13)
    for _ in range(25):
        a, b = sorted(rng.uniform(-6.0, 6.0, size=2))
        gamma = rng.uniform(-5.0, 5.0)
        got = gaussian_phase_integral(a, b, gamma)
        assert abs(got - _quad_oracle(a, b, gamma)) < 1e-10


def test_gaussian_phase_integral_degenerate_gamma():
    assert gaussian_phase_integral(-1.5, 2.0, 0.0) == pytest.approx(3.5)


def test_gaussian_phase_integral_conjugation():
    value = gaussian_phase_integral(0.3, 1.1, 2.7)
    mirrored = gaussian_phase_integral(0.3, 1.1, -2.7)
    assert mirrored == pytest.approx(np.conj(value), rel=1e-14)


def test_gaussian_phase_integral_broadcasts():
    a = np.array([0.0, 1.0, 2.0])
    out = gaussian_phase_integral(a, a + 0.5, 1.3)
    assert out.shape == (3,)
    assert out[1] == pytest.approx(gaussian_phase_integral(1.0, 1.5, 1.3), rel=1e-14)
