"""Rebuilding wavefunctions from bands of characteristic momentum.

Integrating the window average over *all* momenta returns the eigenfunction
identically; integrating over a band ``|p_c| in (p1, p2)`` shows which part of
the state those paths carry.  Oscillator bands are time-averaged over one
classical period, same as the distributions, but without the x_f integral:

    psi_band(x_f) = (omega/2pi) int_T^{T+2pi/omega} dT'
                    int_{band, both signs} window_average(p_c, x_f, T') dp_c.

Narrow bands centred on sqrt(2*M*E_n) reproduce the state only between the
classical turning points -- the band selects the paths that classically exist.

Band edges are snapped to the bundle's momentum lattice, which is what makes
adjacent bands add exactly: (p1,p2) + (p2,p3) re-brackets the same trapezoid
cells as (p1,p3).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .errors import DomainError
from .phasor import window_average_series
from .quadrature import GridBundle, trapezoid
from .systems import EigenstateSpec, SystemKind

__all__ = ["ReconstructionResult", "reconstruct", "dominant_path_phase"]


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    """Band-limited rebuild of an eigenfunction on the x_f grid.

    ``band`` is the requested pair ``(p1, p2)``, or ``None`` for the full
    (truncated) momentum range.
    """

    x_f_grid: NDArray[np.float64]
    values: NDArray[np.complex128]
    band: tuple[float, float] | None
    state: EigenstateSpec
    T: float
    time_averaged: bool


def _full_band_cutoff(state: EigenstateSpec, grids: GridBundle, T: float) -> float:
    system = state.system
    if system.kind is SystemKind.HARMONIC_OSCILLATOR:
        assert system.omega is not None
        scale = math.sqrt(system.hbar * system.mass * system.omega)
        h = grids.window_halfwidth(T)
        return max(
            10.0 * scale,
            math.sqrt(2.0 * system.mass * state.energy) + 14.0 * h,
        )
    return float(grids.p_c_grid[-1])


def reconstruct(
    state: EigenstateSpec,
    band: tuple[float, float] | None,
    T: float,
    grids: GridBundle,
    *,
    threads: int = 1,
) -> ReconstructionResult:
    """Integrate window averages over ``|p_c| in (p1, p2)`` for every ``x_f``.

    Both momentum signs contribute.  Oscillator results are averaged over the
    bundle's midpoint time samples; the other systems are evaluated at ``T``
    alone.  ``band=None`` means the full truncated range, wide enough that the
    result should match the eigenfunction itself.
    """
    if T <= 0:
        raise DomainError("travel time T must be positive")
    if threads < 1:
        raise DomainError("threads must be >= 1")
    if band is None:
        p1, p2 = 0.0, _full_band_cutoff(state, grids, T)
    else:
        p1, p2 = float(band[0]), float(band[1])
    if p1 < 0:
        raise DomainError("band edges are magnitudes: p1 must be >= 0")
    if p1 >= p2:
        raise DomainError(f"band must have p1 < p2, got ({p1!r}, {p2!r})")

    step = float(np.min(np.diff(grids.p_c_grid)))
    i1 = round(p1 / step)
    i2 = round(p2 / step)
    x_grid = grids.x_f_grid
    if i2 - i1 < 1:  # band thinner than one lattice cell: nothing to integrate
        values = np.zeros(x_grid.size, dtype=np.complex128)
        return ReconstructionResult(x_grid, values, band, state, float(T), False)

    pos = step * np.arange(i1, i2 + 1)
    neg = -pos[::-1]
    nodes = np.concatenate([neg, pos])
    n_half = pos.size
    time_averaged = state.system.kind is SystemKind.HARMONIC_OSCILLATOR
    t_samples = grids.T_samples if time_averaged else (float(T),)

    def column(j: int) -> complex:
        x_f = float(x_grid[j])
        total = 0.0 + 0.0j
        for t_prime in t_samples:
            series = window_average_series(state, nodes, x_f, float(t_prime), grids)
            total += trapezoid(nodes[:n_half], series[:n_half])
            total += trapezoid(nodes[n_half:], series[n_half:])
        return total / len(t_samples)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = np.asarray(list(pool.map(column, range(x_grid.size))))
    else:
        values = np.asarray([column(j) for j in range(x_grid.size)])
    return ReconstructionResult(
        x_f_grid=x_grid,
        values=values.astype(np.complex128),
        band=band,
        state=state,
        T=float(T),
        time_averaged=time_averaged,
    )


def dominant_path_phase(
    state: EigenstateSpec, x0: float, t_grid: ArrayLike
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Position and accumulated phase of the single stationary free-line path.

    The free line is the one system whose decomposition collapses to a single
    characteristic momentum ``p_c = hbar*k``; along that path the product of
    energy phase, initial phase and propagation phase telescopes to
    ``k * x(t)``.  Returns ``(x(t), phase(t) mod 2pi)`` for plotting the
    travelling wavefront.
    """
    if state.system.kind is not SystemKind.FREE_LINE:
        raise DomainError("the single-dominant-path decomposition is free-line only")
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise DomainError("t_grid must be a nonempty 1-D array")
    if np.any(t < 0) or np.any(np.diff(t) < 0):
        raise DomainError("t_grid must be ascending and nonnegative")
    sys_ = state.system
    k = state.quantum_number
    p_c = sys_.hbar * k
    x = x0 + p_c * t / sys_.mass
    phase = (
        state.energy * t / sys_.hbar
        + k * x0
        + p_c * p_c * t / (2.0 * sys_.hbar * sys_.mass)
    )
    return x, np.mod(phase, 2.0 * np.pi)
