"""Path distributions: spatial averaging, time averaging, moments, energy map.

A path distribution weighs the window averages by the eigenfunction they are
supposed to rebuild,

    P_j(p_c, T) = (1/N) * int_Omega  psi_j*(x_f) window_average(p_c, x_f, T) dx_f,
    N           =        int_Omega |psi_j(x_f)|^2 dx_f,

so that paths are scored by how much they contribute *where the state actually
lives*.  For the oscillator the bare distribution never settles down in T;
averaging over one classical period (32 midpoint samples) produces the
stationary, real, non-negative profiles peaking at |p_c| = sqrt(2*M*E_n).

Normalization note: the x_f integral and N are always computed over the same
window, so distributions integrate to 1 regardless of the window size.  For
the phase-like eigenfunctions (free line, circle) the conjugate weight cancels
the only x_f dependence of the window average exactly, and the quotient of
integrals collapses to the window kernel itself -- ``spatial_average`` uses
that collapsed form unless asked not to (``method="grid"``).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .errors import DegenerateDistributionError, DomainError
from .phasor import window_average_series
from .quadrature import GridBundle, trapezoid, uniform_grid
from .systems import EigenstateSpec, SystemKind, eigenfunction, mass_parameter

__all__ = [
    "PathDistribution",
    "EnergyDensity",
    "stationary_grids",
    "spatial_average",
    "time_average",
    "moments",
    "to_energy_density",
]


@dataclass(frozen=True, eq=False)
class PathDistribution:
    """A sampled path distribution over characteristic momentum.

    ``values`` keeps its (small) imaginary parts on purpose: realness is one
    of the claims worth *measuring*, not assuming.  ``normalization_N`` is the
    squared-eigenfunction integral over the x_f window actually used.
    """

    p_c_grid: NDArray[np.float64]
    values: NDArray[np.complex128]
    state: EigenstateSpec
    T: float
    time_averaged: bool
    normalization_N: float
    grids: GridBundle


@dataclass(frozen=True, eq=False)
class EnergyDensity:
    """A distribution re-expressed over classical energy ``E_c = p_c^2 / 2M``."""

    e_c_grid: NDArray[np.float64]
    values: NDArray[np.complex128]
    state: EigenstateSpec


_PLANE_KINDS = (SystemKind.FREE_LINE, SystemKind.CIRCLE)
_DEFAULT_TAIL_BUDGET = 1e-6


def stationary_grids(
    state: EigenstateSpec,
    T: float,
    *,
    delta_p_c: float | None = None,
    p_c_span: tuple[float, float] | None = None,
    x_window: float | None = None,
    delta_x_f: float | None = None,
    tail_budget: float = _DEFAULT_TAIL_BUDGET,
) -> GridBundle:
    """Default grids for the four stationary (non-oscillator) systems.

    The momentum grid covers every stationary point ``+-hbar*k`` plus a margin
    ``max(50*h, sqrt(75*hbar*m/(T*tail_budget)))`` sized so the neglected
    oscillatory tail stays below ``tail_budget`` in the norm (the constant 75
    is calibrated against measured free-line truncation errors, with slack for
    the oscillating sign of the tail); spacing defaults to ``h/10`` (the
    window averages are smooth on the window scale ``h``).  Sampling the
    chirped tail aliases it into images spaced ``2*pi*hbar*m/(T*delta_p_c)``
    from each stationary point; a span edge that cuts an image in half leaves
    a spurious norm contribution, so the default margin is rounded outward to
    the midpoint between image centres.
    The x_f window is the full interval for bounded systems; unbounded systems
    get a finite window (hard wall: snapped to half-periods of the standing
    wave so the boundary cross terms cancel identically).
    """
    if T <= 0:
        raise DomainError("travel time T must be positive")
    system = state.system
    kind = system.kind
    if kind is SystemKind.HARMONIC_OSCILLATOR:
        raise DomainError("oscillator runs use paper_grids, not stationary_grids")
    if tail_budget <= 0:
        raise DomainError("tail_budget must be positive")
    hbar_mass = system.hbar * mass_parameter(system)
    h = math.sqrt(hbar_mass / T)
    step = h / 10.0 if delta_p_c is None else float(delta_p_c)
    if step <= 0:
        raise DomainError("delta_p_c must be positive")

    k = state.quantum_number if kind is not SystemKind.SQUARE_WELL else state.wavenumber
    if kind is SystemKind.CIRCLE:
        center = system.hbar * float(k)
        mirrored = False
    elif kind is SystemKind.FREE_LINE:
        center = system.hbar * float(k)
        mirrored = False
    else:
        center = system.hbar * state.wavenumber
        mirrored = True
    margin = max(50.0 * h, math.sqrt(75.0 * hbar_mass / (T * tail_budget)))
    if p_c_span is None:
        image_spacing = 2.0 * math.pi * hbar_mass / (T * step)
        snapped = (math.floor(margin / image_spacing) + 0.5) * image_spacing
        if snapped < margin:
            snapped += image_spacing
        # a whole number of steps keeps uniform_grid from perturbing the
        # spacing, which would detune the step/window-width ratio
        margin = round(snapped / step) * step
        lo = (-abs(center) if mirrored else center) - margin
        hi = (abs(center) if mirrored else center) + margin
    else:
        lo, hi = float(p_c_span[0]), float(p_c_span[1])
    p_c_grid = uniform_grid(lo, hi, step)

    if kind is SystemKind.CIRCLE:
        if x_window is not None:
            raise DomainError("the circle's x_f window is the full circumference")
        dx = 2.0 * math.pi / 128.0 if delta_x_f is None else float(delta_x_f)
        x_f_grid = uniform_grid(0.0, 2.0 * math.pi, dx)
    elif kind is SystemKind.SQUARE_WELL:
        if x_window is not None:
            raise DomainError("the well's x_f window is the full box")
        assert system.width is not None
        a = system.width
        n = int(state.quantum_number)
        dx = a / (16.0 * n) if delta_x_f is None else float(delta_x_f)
        x_f_grid = uniform_grid(0.0, a, dx)
    else:
        wavelength_scale = abs(float(k)) if float(k) != 0.0 else 1.0
        x_max = 8.0 * math.pi / wavelength_scale if x_window is None else float(x_window)
        if x_max <= 0:
            raise DomainError("x_window must be positive")
        if kind is SystemKind.HARD_WALL:
            # snap to an integer number of standing-wave half-periods
            half = math.pi / float(k)
            x_max = max(1, round(x_max / half)) * half
        dx = math.pi / (16.0 * wavelength_scale) if delta_x_f is None else float(delta_x_f)
        if kind is SystemKind.HARD_WALL:
            x_f_grid = uniform_grid(0.0, x_max, dx)
        else:
            x_f_grid = uniform_grid(-x_max, x_max, dx)

    return GridBundle(
        p_c_grid=p_c_grid,
        x_f_grid=x_f_grid,
        T_samples=(float(T),),
        hbar_mass=hbar_mass,
    )


def _psi_values(state: EigenstateSpec, x: NDArray) -> NDArray[np.complex128]:
    """Eigenfunction samples; the circle is evaluated periodically so a grid
    ending exactly at the seam (2*pi) stays legal."""
    if state.system.kind is SystemKind.CIRCLE:
        return np.exp(1j * state.quantum_number * np.asarray(x, dtype=float)).astype(
            np.complex128
        )
    return np.asarray(eigenfunction(state, x), dtype=np.complex128)


def _trapezoid_weights(x: NDArray) -> NDArray[np.float64]:
    w = np.empty(x.size)
    w[0] = 0.5 * (x[1] - x[0])
    w[-1] = 0.5 * (x[-1] - x[-2])
    w[1:-1] = 0.5 * (x[2:] - x[:-2])
    return w


def _grid_average(
    state: EigenstateSpec,
    T: float,
    grids: GridBundle,
    threads: int,
) -> tuple[NDArray[np.complex128], float]:
    """One x_f-trapezoid pass: returns (unnormalised values, N)."""
    x_grid = grids.x_f_grid
    psi = _psi_values(state, x_grid)
    norm = trapezoid(x_grid, (psi.conj() * psi).real).real
    weights = _trapezoid_weights(x_grid) * psi.conj()

    def column(j: int) -> NDArray[np.complex128]:
        return window_average_series(state, grids.p_c_grid, float(x_grid[j]), T, grids)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            columns = list(pool.map(column, range(x_grid.size)))
    else:
        columns = [column(j) for j in range(x_grid.size)]
    stacked = np.asarray(columns) * weights[:, None]
    return np.sum(stacked, axis=0), norm


def spatial_average(
    state: EigenstateSpec,
    T: float,
    grids: GridBundle,
    *,
    threads: int = 1,
    method: str = "auto",
) -> PathDistribution:
    """Average the window integrals against the conjugated eigenfunction.

    ``method="auto"`` uses the exact collapsed form for free line and circle
    (their x_f dependence cancels identically, so the x_f window provably
    cannot matter); ``method="grid"`` forces the literal x_f trapezoid for any
    system, which is how the collapse itself is cross-checked.
    """
    if T <= 0:
        raise DomainError("travel time T must be positive")
    if method not in ("auto", "grid"):
        raise DomainError(f"unknown spatial_average method {method!r}")
    if threads < 1:
        raise DomainError("threads must be >= 1")
    if method == "auto" and state.system.kind in _PLANE_KINDS:
        x_grid = grids.x_f_grid
        psi = _psi_values(state, x_grid)
        norm = trapezoid(x_grid, (psi.conj() * psi).real).real
        values = window_average_series(state, grids.p_c_grid, 0.0, T, grids)
    else:
        raw, norm = _grid_average(state, T, grids, threads)
        values = raw / norm
    return PathDistribution(
        p_c_grid=grids.p_c_grid,
        values=np.asarray(values, dtype=np.complex128),
        state=state,
        T=float(T),
        time_averaged=False,
        normalization_N=float(norm),
        grids=grids,
    )


def time_average(
    state: EigenstateSpec,
    T: float,
    grids: GridBundle,
    *,
    threads: int = 1,
) -> PathDistribution:
    """Oscillator distribution averaged over one classical period after ``T``.

    Evaluates the spatial average at each midpoint sample in
    ``grids.T_samples`` and takes their mean -- the midpoint rule for
    ``(omega/2pi) * int_T^{T+2pi/omega} P_n(p_c, T') dT'``.  The integrand is
    exactly periodic in ``T'``, which is what makes the plain midpoint rule
    converge so fast here.
    """
    if state.system.kind is not SystemKind.HARMONIC_OSCILLATOR:
        raise DomainError("time averaging over a classical period is an oscillator operation")
    if T <= 0:
        raise DomainError("travel time T must be positive")
    per_sample = []
    norm = math.nan
    for t_sample in grids.T_samples:
        raw, norm = _grid_average(state, float(t_sample), grids, threads)
        per_sample.append(raw / norm)
    values = np.sum(np.asarray(per_sample), axis=0) / len(per_sample)
    return PathDistribution(
        p_c_grid=grids.p_c_grid,
        values=np.asarray(values, dtype=np.complex128),
        state=state,
        T=float(T),
        time_averaged=True,
        normalization_N=float(norm),
        grids=grids,
    )


def moments(dist: PathDistribution) -> dict[str, float]:
    """Norm, mean, refined peak location, FWHM, and the Im/Re diagnostic.

    Norm and mean integrate the real part.  Peak and width are read off the
    *magnitude* profile: the real part of a finite-T window average carries a
    phase ripple that splits its crest into a sub-window-width doublet, while
    the magnitude keeps the single envelope maximum the realness claims are
    about.  (For the time-averaged oscillator distributions the two profiles
    coincide.)  The peak is refined by the vertex of the parabola through the
    maximum sample and its neighbours; the full width is read off at half the
    peak sample height by linear interpolation, walking outward from the peak.
    """
    p = dist.p_c_grid
    re = dist.values.real
    max_re = float(np.max(np.abs(re)))
    if max_re == 0.0:
        raise DegenerateDistributionError("all-zero distribution has no moments")
    norm = trapezoid(p, re).real
    mean = trapezoid(p, p * re).real / norm

    mag = np.abs(dist.values)
    i = int(np.argmax(mag))
    if 0 < i < p.size - 1:
        coeffs = np.polyfit(p[i - 1 : i + 2], mag[i - 1 : i + 2], 2)
        peak = float(-coeffs[1] / (2.0 * coeffs[0])) if coeffs[0] != 0.0 else float(p[i])
    else:
        peak = float(p[i])

    half = mag[i] / 2.0
    left = right = math.nan
    for j in range(i, 0, -1):
        if mag[j - 1] < half <= mag[j]:
            frac = (half - mag[j - 1]) / (mag[j] - mag[j - 1])
            left = p[j - 1] + frac * (p[j] - p[j - 1])
            break
    for j in range(i, p.size - 1):
        if mag[j + 1] < half <= mag[j]:
            frac = (mag[j] - half) / (mag[j] - mag[j + 1])
            right = p[j] + frac * (p[j + 1] - p[j])
            break
    if math.isnan(left) or math.isnan(right):
        raise DomainError("half maximum is not bracketed by the grid")

    return {
        "norm": float(norm),
        "mean": float(mean),
        "peak_location": peak,
        "fwhm": float(right - left),
        "max_im_ratio": float(np.max(np.abs(dist.values.imag)) / max_re),
    }


def to_energy_density(dist: PathDistribution) -> EnergyDensity:
    """Re-express the distribution over classical energy, ``E_c = p_c^2/2M``.

    Returns ``sqrt(2M/E_c) * P(sqrt(2M E_c))`` on the image of the positive
    momentum nodes.  The first node sits at ``(delta p_c)^2 / 2M``: the
    Jacobian diverges (integrably) at E_c = 0, so the axis point is excluded
    by construction.  For even distributions the energy-space integral
    reproduces the full two-sided momentum norm.
    """
    p = dist.p_c_grid
    m = mass_parameter(dist.state.system)
    step = float(np.min(np.diff(p)))
    mask = p >= step * (1.0 - 1e-12)
    if np.count_nonzero(mask) < 2:
        raise DomainError("no positive momentum nodes to map onto energies")
    p_pos = p[mask]
    e_grid = p_pos * p_pos / (2.0 * m)
    values = np.sqrt(2.0 * m / e_grid) * dist.values[mask]
    return EnergyDensity(e_c_grid=e_grid, values=values, state=dist.state)
