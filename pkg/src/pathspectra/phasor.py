"""Momentum-space integrands, cumulative phasor curves, and window averages.

Each eigenstate identity ``psi_j(x_f) = int K(x0, x_f, T) psi_j(x0) dx0`` is
rewritten with the characteristic momentum ``p_c`` as integration variable.
This module evaluates the resulting integrand, its running integral (the
"phasor curve", whose Cornu-spiral windings show which momenta matter), and
the window average

    window_average(p_c) = [F(p_c + h) - F(p_c - h)] / (2h),   h = sqrt(hbar*m/T)

which is the generalized stationary-phase measure of how much the paths
labelled ``p_c`` contribute.  ``m`` is the mass-like constant of the momentum
variable (the moment of inertia for angular momentum on the circle).

Two evaluation strategies coexist on purpose:

* For the systems whose exponent is exactly quadratic in ``p_c`` (free line,
  circle, hard wall, square well) windows are *closed-form* via
  :func:`~pathspectra.specfun.gaussian_phase_integral` -- no inner grid at all.
* The oscillator integrand is not quadratic and carries integrable
  ``1/sqrt`` divergences at ``|p_c| = M*omega*|x_f|``, so its windows are
  integrated on the substituted grid (see
  :func:`~pathspectra.quadrature.singular_window_integral`).  For whole series
  of windows, :func:`window_average_series` builds one shared cumulative
  antiderivative per ``(x_f, T)`` and differences it, which is the same
  quadrature re-bracketed at a fraction of the cost.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DivergentSampleError, DomainError, SingularTimeError
from .quadrature import (
    GridBundle,
    compensated_sum,
    cumulative_trapezoid,
    singular_window_integral,
)
from .specfun import gaussian_phase_integral, ho_eigenfunction
from .systems import EigenstateSpec, SystemKind, maslov_index, mass_parameter

__all__ = [
    "PhasorCurve",
    "integrand",
    "ho_regular_factor",
    "phasor_curve",
    "window_average",
    "window_average_series",
    "segment_windows",
    "segment_sum_check",
]

_CHUNK = 1 << 20  # phasor-curve evaluation chunk (keeps peak memory modest)


@dataclass(frozen=True, eq=False)
class PhasorCurve:
    """Running integral of the momentum-space integrand on an explicit grid.

    ``cumulative[i]`` is the trapezoid integral from ``p_c_grid[0]`` to
    ``p_c_grid[i]``; the final entry approximates the eigenfunction value at
    ``x_f`` once the grid covers the contributing momenta.
    """

    p_c_grid: NDArray[np.float64]
    cumulative: NDArray[np.complex128]
    state: EigenstateSpec
    x_f: float
    T: float

    @property
    def endpoint(self) -> complex:
        return complex(self.cumulative[-1])

    def value_at(self, p_c: float) -> complex:
        """Cumulative value at an interior momentum (linear interpolation)."""
        if not self.p_c_grid[0] <= p_c <= self.p_c_grid[-1]:
            raise DomainError("momentum outside the curve's grid")
        return complex(np.interp(p_c, self.p_c_grid, self.cumulative))


def _gamma(state: EigenstateSpec, T: float) -> float:
    return T / (2.0 * state.system.hbar * mass_parameter(state.system))


def _plane_terms(
    state: EigenstateSpec, x_f: float, T: float
) -> list[tuple[complex, float]]:
    """Quadratic-exponent decomposition: integrand = sum pref * e^{i*gamma*(p-center)^2}.

    One term for the phase-like eigenfunctions, two (mirrored) for the
    standing waves of the wall and well.
    """
    sys_ = state.system
    m = mass_parameter(sys_)
    amp = complex(np.sqrt(T / (2j * np.pi * sys_.hbar * m)))
    kind = sys_.kind
    if kind is SystemKind.FREE_LINE:
        k = state.quantum_number
        return [(amp * complex(np.exp(1j * k * x_f)), sys_.hbar * k)]
    if kind is SystemKind.CIRCLE:
        ell = state.quantum_number
        return [(amp * complex(np.exp(1j * ell * x_f)), sys_.hbar * ell)]
    if kind in (SystemKind.HARD_WALL, SystemKind.SQUARE_WELL):
        k = state.wavenumber
        pref = amp / 2j
        return [
            (pref * complex(np.exp(1j * k * x_f)), sys_.hbar * k),
            (-pref * complex(np.exp(-1j * k * x_f)), -sys_.hbar * k),
        ]
    raise DomainError("oscillator integrands are not quadratic in p_c")


def ho_regular_factor(
    state: EigenstateSpec, x_f: float, T: float
) -> Callable[[NDArray], NDArray[np.complex128]]:
    """Smooth part of the oscillator integrand (everything but the divergence).

    The full integrand for ``|p_c| >= b = M*omega*|x_f|`` is
    ``factor(p_c) * |p_c| / sqrt(p_c^2 - b^2)``; this returns ``factor``:
    the eigenfunction at the inverted starting point, the kernel amplitude
    ``sqrt(|sin(omega*T)| / (2*pi*i*hbar*M*omega))``, and the combined
    energy/action/caustic phase.  Valid only on ``|p| >= b``.
    """
    sys_ = state.system
    if sys_.kind is not SystemKind.HARMONIC_OSCILLATOR:
        raise DomainError("regular-factor split applies to the oscillator only")
    assert sys_.omega is not None
    hbar, m, omega = sys_.hbar, sys_.mass, sys_.omega
    s = math.sin(omega * T)
    if s == 0.0:
        raise SingularTimeError(f"sin(omega*T) = 0 at T = {T!r}")
    mu = maslov_index(omega * T)
    c = math.cos(omega * T)
    n = int(state.quantum_number)
    b = m * omega * abs(x_f)
    pref = complex(np.sqrt(abs(s) / (2j * np.pi * hbar * m * omega)))
    base_phase = state.energy * T / hbar - 0.5 * np.pi * mu

    def factor(p: NDArray) -> NDArray[np.complex128]:
        pa = np.asarray(p, dtype=float)
        root = np.sqrt(np.maximum(pa * pa - b * b, 0.0))
        x0 = x_f * c - np.sign(pa) * s * root / (m * omega)
        action = (s / (2.0 * m * omega)) * (
            c * (pa * pa - 2.0 * b * b) + 2.0 * x_f * m * omega * np.sign(pa) * s * root
        )
        psi = ho_eigenfunction(n, x0, hbar=hbar, mass=m, omega=omega)
        return pref * psi * np.exp(1j * (base_phase + action / hbar))

    return factor


def integrand(
    state: EigenstateSpec, p_c: ArrayLike, x_f: float, T: float
) -> NDArray[np.complex128] | complex:
    """Momentum-space integrand whose integral over all ``p_c`` is ``psi(x_f)``.

    Includes every prefactor (Jacobian, kernel amplitude, energy phase).  For
    the oscillator the classically excluded region ``|p_c| < M*omega*|x_f|``
    contributes exactly 0, and sampling *exactly on* the divergence
    ``|p_c| = M*omega*|x_f|`` raises :class:`DivergentSampleError` -- windows
    touching it must go through the singular quadrature instead.
    """
    if T <= 0:
        raise DomainError("travel time T must be positive")
    pa = np.asarray(p_c, dtype=float)
    scalar = pa.ndim == 0
    if state.system.kind is SystemKind.HARMONIC_OSCILLATOR:
        assert state.system.omega is not None
        b = state.system.mass * state.system.omega * abs(x_f)
        mag = np.abs(pa)
        if np.any(mag == b):
            raise DivergentSampleError(
                f"integrand diverges at |p_c| = M*omega*|x_f| = {b:.6g}"
            )
        out = np.zeros(pa.shape, dtype=np.complex128)
        live = mag > b
        if np.any(live):
            factor = ho_regular_factor(state, x_f, T)
            p_live = pa[live] if not scalar else pa
            vals = factor(p_live) * np.abs(p_live) / np.sqrt(p_live * p_live - b * b)
            if scalar:
                return complex(vals)
            out[live] = vals
        return complex(out) if scalar else out
    gamma = _gamma(state, T)
    out = np.zeros(pa.shape, dtype=np.complex128)
    for pref, center in _plane_terms(state, x_f, T):
        u = pa - center
        out = out + pref * np.exp(1j * gamma * u * u)
    return complex(out) if scalar else out


def phasor_curve(
    state: EigenstateSpec, x_f: float, T: float, p_grid: ArrayLike
) -> PhasorCurve:
    """Cumulative trapezoid of the integrand along ``p_grid``.

    Evaluation is chunked so multi-million-point grids stay within a couple of
    working arrays; the running sum is carried across chunks in order, so the
    result is identical to one monolithic pass.
    """
    grid = np.asarray(p_grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise DomainError("p_grid must be 1-D with at least 2 points")
    if np.any(np.diff(grid) <= 0):
        raise DomainError("p_grid must be strictly increasing")
    cumulative = np.empty(grid.size, dtype=np.complex128)
    cumulative[0] = 0.0
    carry = 0.0 + 0.0j
    prev_tail: complex | None = None
    for start in range(0, grid.size, _CHUNK):
        stop = min(grid.size, start + _CHUNK)
        lo = start - 1 if start > 0 else 0
        vals = integrand(state, grid[lo:stop], x_f, T)
        vals = np.atleast_1d(np.asarray(vals, dtype=np.complex128))
        if prev_tail is not None:
            vals[0] = prev_tail  # re-use the boundary sample: bit-identical carry
        cells = 0.5 * (vals[1:] + vals[:-1]) * np.diff(grid[lo:stop])
        block = np.cumsum(cells) + carry
        cumulative[lo + 1 : stop] = block
        carry = block[-1]
        prev_tail = complex(vals[-1])
    return PhasorCurve(p_c_grid=grid, cumulative=cumulative, state=state, x_f=x_f, T=T)


def _check_bundle(state: EigenstateSpec, grids: GridBundle) -> None:
    expected = state.system.hbar * mass_parameter(state.system)
    if not math.isclose(grids.hbar_mass, expected, rel_tol=1e-12):
        raise DomainError(
            "grid bundle was built for a different system "
            f"(hbar*m {grids.hbar_mass!r} != {expected!r})"
        )


def window_average(
    state: EigenstateSpec,
    p_c: ArrayLike,
    x_f: float,
    T: float,
    grids: GridBundle,
) -> NDArray[np.complex128] | complex:
    """Integrand averaged over the window ``[p_c - h, p_c + h]``, ``h = sqrt(hbar*m/T)``.

    Quadratic systems evaluate the window in closed form; the oscillator
    integrates each window on the substituted inner grid, patching the
    divergences.  For many oscillator windows at once prefer
    :func:`window_average_series`, which shares one cumulative table.
    """
    if T <= 0:
        raise DomainError("travel time T must be positive")
    _check_bundle(state, grids)
    h = grids.window_halfwidth(T)
    pa = np.asarray(p_c, dtype=float)
    scalar = pa.ndim == 0
    if state.system.kind is not SystemKind.HARMONIC_OSCILLATOR:
        gamma = _gamma(state, T)
        out = np.zeros(pa.shape, dtype=np.complex128)
        for pref, center in _plane_terms(state, x_f, T):
            u = pa - center
            out = out + pref * np.asarray(
                gaussian_phase_integral(u - h, u + h, gamma), dtype=np.complex128
            )
        out = out / (2.0 * h)
        return complex(out) if scalar else out
    factor = ho_regular_factor(state, x_f, T)
    dv = grids.inner_spacing(x_f, T)
    flat = np.atleast_1d(pa)
    vals = np.empty(flat.shape, dtype=np.complex128)
    for i, p in enumerate(flat):
        vals[i] = singular_window_integral(
            p - h,
            p + h,
            x_f,
            state.system,
            factor,
            inner_spacing=dv,
            epsilon=grids.singular_epsilon,
        ) / (2.0 * h)
    return complex(vals[0]) if scalar else vals.reshape(pa.shape)


def _ho_antiderivative_at(
    state: EigenstateSpec, x_f: float, T: float, edges: NDArray, dv: float
) -> NDArray[np.complex128]:
    """Running integral of the oscillator integrand, sampled at ``edges``.

    ``A(e) = int_{-P}^{e} integrand dp`` with ``P = max|edges|``, evaluated by
    one trapezoid pass per sign of p on the substituted variable
    ``v = sqrt(p^2 - b^2)`` (uniform spacing ``dv``), where the measure is
    flat and the divergence disappears.  Within the excluded region the
    running integral is constant.  Linear interpolation in v is exact through
    the singular endpoints because the antiderivative is linear in v there.
    """
    sys_ = state.system
    assert sys_.omega is not None
    b = sys_.mass * sys_.omega * abs(x_f)
    factor = ho_regular_factor(state, x_f, T)
    p_max = float(np.max(np.abs(edges))) if edges.size else b
    v_max = math.sqrt(max(p_max * p_max - b * b, 0.0))
    if v_max == 0.0:
        return np.zeros(edges.shape, dtype=np.complex128)
    n_cells = max(1, math.ceil(v_max / dv))
    v = np.linspace(0.0, v_max, n_cells + 1)
    p_side = np.sqrt(v * v + b * b)
    f_pos = cumulative_trapezoid(v, factor(p_side))
    f_neg = cumulative_trapezoid(v, factor(-p_side))
    neg_total = f_neg[-1]

    ve = np.sqrt(np.maximum(edges * edges - b * b, 0.0))
    out = np.full(edges.shape, neg_total, dtype=np.complex128)
    pos = edges >= b
    neg = edges <= -b
    if np.any(pos):
        out[pos] = neg_total + np.interp(ve[pos], v, f_pos)
    if np.any(neg):
        out[neg] = neg_total - np.interp(ve[neg], v, f_neg)
    return out


def window_average_series(
    state: EigenstateSpec,
    p_c_values: ArrayLike,
    x_f: float,
    T: float,
    grids: GridBundle,
) -> NDArray[np.complex128]:
    """Window averages for a whole family of ``p_c`` values at fixed ``(x_f, T)``.

    Same mathematical object as :func:`window_average` evaluated pointwise;
    oscillator windows are differenced from one shared running integral
    (identical cells, re-bracketed), making series evaluation O(grid) instead
    of O(grid * windows).
    """
    pa = np.atleast_1d(np.asarray(p_c_values, dtype=float))
    if state.system.kind is not SystemKind.HARMONIC_OSCILLATOR:
        return np.asarray(window_average(state, pa, x_f, T, grids), dtype=np.complex128)
    _check_bundle(state, grids)
    h = grids.window_halfwidth(T)
    dv = grids.inner_spacing(x_f, T)
    edges = np.concatenate([pa - h, pa + h])
    a_vals = _ho_antiderivative_at(state, x_f, T, edges, dv)
    n = pa.size
    return (a_vals[n:] - a_vals[:n]) / (2.0 * h)


def segment_windows(
    state: EigenstateSpec,
    x_f: float,
    T: float,
    delta_p: float,
    p_lo: float,
    p_hi: float,
    *,
    cells_per_window: int = 64,
) -> tuple[NDArray[np.float64], NDArray[np.complex128]]:
    """Window integrals of the contiguous tiling ``p_nu = 2*nu*h + delta_p``.

    The momentum line tiles exactly into windows ``[p_nu - h, p_nu + h]`` for
    *any* offset ``delta_p``; this evaluates each window over one shared
    integrand grid.  ``delta_p`` is snapped to the grid (spacing ``2h /
    cells_per_window``) so every window edge is a grid node and the windows
    re-bracket the same trapezoid cells exactly; windows overhanging the
    extent are clipped to it.  Returns (window centers, window integrals).
    """
    if cells_per_window < 2 or cells_per_window % 2:
        raise DomainError("cells_per_window must be an even integer >= 2")
    if not p_hi > p_lo:
        raise DomainError("extent must have p_hi > p_lo")
    h = math.sqrt(
        state.system.hbar * mass_parameter(state.system) / T
    )
    step = 2.0 * h / cells_per_window
    n_cells = int(math.floor((p_hi - p_lo) / step + 1e-9))
    if n_cells < cells_per_window:
        raise DomainError("extent narrower than a single window")
    grid = p_lo + step * np.arange(n_cells + 1)
    curve = cumulative_trapezoid(grid, np.asarray(integrand(state, grid, x_f, T)))
    half = cells_per_window // 2
    base = round((delta_p - p_lo) / step)
    # windows nu with [base + nu*cpw - half, base + nu*cpw + half] meeting [0, n]
    nu_lo = math.ceil((-half - base) / cells_per_window)
    nu_hi = math.floor((n_cells + half - 1 - base) / cells_per_window)
    centers = []
    windows = []
    for nu in range(nu_lo, nu_hi + 1):
        mid = base + nu * cells_per_window
        i_lo = max(0, mid - half)
        i_hi = min(n_cells, mid + half)
        if i_hi <= i_lo:
            continue
        centers.append(p_lo + step * mid)
        windows.append(curve[i_hi] - curve[i_lo])
    return np.asarray(centers, dtype=float), np.asarray(windows, dtype=np.complex128)


def segment_sum_check(
    state: EigenstateSpec,
    x_f: float,
    T: float,
    delta_p: float,
    p_lo: float,
    p_hi: float,
    *,
    cells_per_window: int = 64,
) -> complex:
    """Sum of the segment windows over the extent: independent of ``delta_p``.

    Because the clipped windows re-bracket one fixed set of trapezoid cells,
    the sum telescopes to the full integral over the extent for every offset;
    this is the numerical face of the claim that the window decomposition
    loses nothing.
    """
    _, windows = segment_windows(
        state, x_f, T, delta_p, p_lo, p_hi, cells_per_window=cells_per_window
    )
    return compensated_sum(windows)
