"""Deterministic quadrature: explicit grids, trapezoids, and the singular patch.

Everything downstream integrates on grids built here.  Three things matter:

* **Determinism.**  Reductions are compensated (``math.fsum`` over trapezoid
  cells) and always run in ascending-abscissa order, so results are
  bit-reproducible no matter how the evaluation work was parallelised.
* **The inverse-square-root patch.**  Oscillator integrands carry a factor
  ``|p| / sqrt(p^2 - b^2)`` with ``b = M*omega*|x_f|`` that diverges
  (integrably) at ``|p| = b``.  Substituting ``v = sqrt(p^2 - b^2)`` turns
  ``|p|/sqrt(p^2-b^2) dp`` into plain ``dv``, so integrating uniformly in v
  handles the divergence *and* automatically grades the p-spacing near the
  singular point.  The first v-cell freezes the regular factors at the
  singular point, giving the closed patch weight ``sqrt(eps*(eps + 2b))`` for
  a patch of p-width eps.
* **Grid recipes.**  :func:`paper_grids` packages the oscillator defaults
  (32 midpoint time samples over one period, x_f out to 5*sqrt(2n+1), inner
  momentum resolution growing with |x_f|) into a :class:`GridBundle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .errors import DomainError
from .systems import EigenstateSpec, SystemKind, SystemSpec

__all__ = [
    "GridBundle",
    "trapezoid",
    "cumulative_trapezoid",
    "compensated_sum",
    "uniform_grid",
    "singular_window_integral",
    "paper_grids",
]


def compensated_sum(terms: NDArray) -> complex:
    """Exactly rounded sum of an array of (complex) terms, in index order."""
    arr = np.asarray(terms)
    if np.iscomplexobj(arr):
        return complex(math.fsum(arr.real), math.fsum(arr.imag))
    return complex(math.fsum(arr), 0.0)


def _cells(x: NDArray, y: NDArray) -> NDArray:
    if x.ndim != 1 or x.shape != y.shape[-1:]:
        raise DomainError("abscissae must be 1-D and match the sample count")
    if x.size < 2:
        raise DomainError("trapezoid needs at least 2 samples")
    dx = np.diff(x)
    if np.any(dx <= 0):
        raise DomainError("abscissae must be strictly increasing")
    return 0.5 * (y[..., 1:] + y[..., :-1]) * dx


def trapezoid(x: NDArray, y: NDArray) -> complex:
    """Trapezoid-rule integral of samples ``y`` over abscissae ``x``.

    Cells are accumulated with compensated summation in ascending order;
    the result is independent of any upstream parallelism.
    """
    return compensated_sum(_cells(np.asarray(x, dtype=float), np.asarray(y)))


def cumulative_trapezoid(x: NDArray, y: NDArray) -> NDArray:
    """Running trapezoid integral, starting at 0 on the first abscissa."""
    cells = _cells(np.asarray(x, dtype=float), np.asarray(y))
    out = np.empty(np.asarray(y).shape, dtype=cells.dtype)
    out[..., 0] = 0.0
    np.cumsum(cells, axis=-1, out=out[..., 1:])
    return out


def uniform_grid(lo: float, hi: float, step: float) -> NDArray[np.float64]:
    """Uniform grid from lo to hi with spacing as close to ``step`` as fits.

    The endpoint count is rounded so the grid lands exactly on both ends,
    keeping symmetric ranges exactly symmetric in floating point.
    """
    if not hi > lo:
        raise DomainError("grid range must have hi > lo")
    if step <= 0:
        raise DomainError("grid step must be positive")
    n = max(1, round((hi - lo) / step))
    return np.linspace(lo, hi, n + 1)


@dataclass(frozen=True, eq=False)
class GridBundle:
    """All grid choices for one distribution/reconstruction computation.

    ``hbar_mass`` is the product of hbar with the mass-like constant of the
    momentum variable (M, or the moment of inertia for angular momentum); it
    sets the window half-width ``sqrt(hbar_mass/T)``.  The inner integration
    spacing is ``1/(n_p * sqrt(T))`` with ``n_p = max(n_p_floor,
    n_p_slope * |x_f|)``, finer where the integrand oscillates faster.
    ``singular_epsilon = None`` lets the singular patch default to a single
    inner grid cell in the substituted (regularised) variable.
    """

    p_c_grid: NDArray[np.float64]
    x_f_grid: NDArray[np.float64]
    T_samples: tuple[float, ...]
    hbar_mass: float
    n_p_floor: float = 50.0
    n_p_slope: float = 0.0
    singular_epsilon: float | None = None

    def __post_init__(self) -> None:
        if self.hbar_mass <= 0:
            raise DomainError("hbar_mass must be positive")
        if self.n_p_floor <= 0 or self.n_p_slope < 0:
            raise DomainError("inner-resolution parameters must be positive")
        if len(self.T_samples) == 0 or any(t <= 0 for t in self.T_samples):
            raise DomainError("T_samples must be positive")
        if self.singular_epsilon is not None and self.singular_epsilon <= 0:
            raise DomainError("singular_epsilon must be positive when given")
        for name in ("p_c_grid", "x_f_grid"):
            g = getattr(self, name)
            if g.size < 2 or np.any(np.diff(g) <= 0):
                raise DomainError(f"{name} must be ascending with at least 2 points")

    def window_halfwidth(self, T: float) -> float:
        return math.sqrt(self.hbar_mass / T)

    def inner_spacing(self, x_f: float, T: float) -> float:
        n_p = max(self.n_p_floor, self.n_p_slope * abs(x_f))
        return 1.0 / (n_p * math.sqrt(T))


def paper_grids(state: EigenstateSpec, T: float, **overrides: float) -> GridBundle:
    """Default oscillator grids for distribution and reconstruction runs.

    For eigenstate ``n`` at travel time ``T``:

    * 32 time samples at the midpoints ``T + (j + 1/2) * pi/16`` covering one
      period (never hitting the singular times, which sit on the endpoints);
      a ``delta_T`` override keeps the full-period coverage by rescaling the
      sample count unless ``n_time`` is overridden too;
    * ``x_f`` from ``-5*sqrt(2n+1)`` to ``+5*sqrt(2n+1)`` in steps of 0.1;
    * output momentum grid out to ``max(3*sqrt(2*M*E_n), M*omega*max|x_f| +
      10*sqrt(hbar*M/T))`` in steps of 0.02;
    * inner resolution ``n_p = max(50, 150*|x_f|/sqrt(2n+1))``.

    Keyword overrides: ``delta_p_c``, ``p_c_max``, ``delta_x_f``, ``x_f_span``,
    ``delta_T``, ``n_time``, ``epsilon``, ``n_p_floor``, ``n_p_slope``.
    """
    system = state.system
    if system.kind is not SystemKind.HARMONIC_OSCILLATOR:
        raise DomainError("paper_grids builds oscillator grids; other systems use caller-owned grids")
    if T <= 0:
        raise DomainError("travel time T must be positive")
    assert system.omega is not None
    n = int(state.quantum_number)
    width = math.sqrt(2.0 * n + 1.0)
    energy = state.energy

    delta_x_f = float(overrides.pop("delta_x_f", 0.1))
    x_span = float(overrides.pop("x_f_span", 5.0 * width * math.sqrt(system.hbar / (system.mass * system.omega))))
    m_steps = max(1, round(x_span / delta_x_f))
    x_f_grid = np.linspace(-m_steps * delta_x_f, m_steps * delta_x_f, 2 * m_steps + 1)

    halfwidth = math.sqrt(system.hbar * system.mass / T)
    p_c_max = float(
        overrides.pop(
            "p_c_max",
            max(
                3.0 * math.sqrt(2.0 * system.mass * energy),
                system.mass * system.omega * float(np.max(np.abs(x_f_grid))) + 10.0 * halfwidth,
            ),
        )
    )
    delta_p_c = float(overrides.pop("delta_p_c", 0.02))
    k_steps = max(1, round(p_c_max / delta_p_c))
    p_c_grid = np.linspace(-k_steps * delta_p_c, k_steps * delta_p_c, 2 * k_steps + 1)

    delta_T = float(overrides.pop("delta_T", math.pi / 16.0))
    period = 2.0 * math.pi / system.omega
    n_time = int(overrides.pop("n_time", max(1, round(period / delta_T))))
    T_samples = tuple(T + (j + 0.5) * delta_T for j in range(n_time))

    bundle = GridBundle(
        p_c_grid=p_c_grid,
        x_f_grid=x_f_grid,
        T_samples=T_samples,
        hbar_mass=system.hbar * system.mass,
        n_p_floor=float(overrides.pop("n_p_floor", 50.0)),
        n_p_slope=float(overrides.pop("n_p_slope", 150.0 / width)),
        singular_epsilon=overrides.pop("epsilon", None),
    )
    if overrides:
        raise DomainError(f"unknown grid overrides: {sorted(overrides)}")
    return bundle


def _side_pieces(
    lo: float,
    hi: float,
    b: float,
    other: Callable[[NDArray], NDArray],
    epsilon: float,
    dv: float,
) -> complex:
    """Integral of ``other(p)*|p|/sqrt(p^2-b^2)`` over [lo, hi] with b <= lo < hi.

    Substitutes v = sqrt(p^2 - b^2): the measure becomes dv and the patch
    [b, b+eps] becomes the first cell [0, v_eps] with the regular factors
    frozen at p = b (weight v_eps = sqrt(eps*(eps+2b)) exactly).
    """
    v_lo = math.sqrt(max(lo * lo - b * b, 0.0))
    v_hi = math.sqrt(hi * hi - b * b)
    total = 0.0 + 0.0j
    if lo <= b:
        v_eps = math.sqrt(epsilon * (epsilon + 2.0 * b))
        v_patch_hi = min(v_eps, v_hi)
        total += complex(other(np.array(b))) * v_patch_hi
        v_lo = v_patch_hi
    if v_hi <= v_lo:
        return total
    n_cells = max(1, math.ceil((v_hi - v_lo) / dv))
    v = np.linspace(v_lo, v_hi, n_cells + 1)
    p = np.sqrt(v * v + b * b)
    vals = np.asarray(other(p), dtype=np.complex128)
    cells = 0.5 * (vals[1:] + vals[:-1]) * np.diff(v)
    return total + compensated_sum(cells)


def singular_window_integral(
    p_lo: float,
    p_hi: float,
    x_f: float,
    system: SystemSpec,
    other_factors: Callable[[NDArray], NDArray],
    *,
    inner_spacing: float,
    epsilon: float | None = None,
) -> complex:
    """Window integral of an oscillator-type integrand across its divergences.

    Integrates ``other_factors(p) * |p| / sqrt(p^2 - b^2)`` over
    ``[p_lo, p_hi]`` with ``b = M*omega*|x_f|``, where ``other_factors`` is
    the smooth remainder of the integrand (one branch per sign of p; the
    callable receives the signed p values of whichever side is being
    integrated).  The excluded interval ``(-b, b)`` contributes zero; within
    p-distance ``epsilon`` of ``+-b`` the smooth factors are frozen at the
    singular point, contributing the closed patch weight
    ``sqrt(epsilon*(epsilon + 2b))``; the rest is a trapezoid rule, uniform
    in the substituted variable ``v = sqrt(p^2 - b^2)`` with spacing
    ``inner_spacing``.

    ``epsilon = None`` uses one v-cell, i.e. ``sqrt(b^2 + inner_spacing^2) - b``
    (which degenerates to ``inner_spacing`` when b = 0).
    """
    if system.kind is not SystemKind.HARMONIC_OSCILLATOR:
        raise DomainError("singular windows arise only for the oscillator")
    if not p_hi > p_lo:
        raise DomainError("window must have p_hi > p_lo")
    if inner_spacing <= 0:
        raise DomainError("inner_spacing must be positive")
    assert system.omega is not None
    b = system.mass * system.omega * abs(x_f)
    if epsilon is None:
        epsilon = math.sqrt(b * b + inner_spacing**2) - b if b > 0 else inner_spacing
        epsilon = max(epsilon, 1e-300)
    elif epsilon <= 0:
        raise DomainError("epsilon must be positive")

    total = 0.0 + 0.0j
    # positive side [max(p_lo, b), p_hi]
    if p_hi > b:
        lo = max(p_lo, b)
        total += _side_pieces(lo, p_hi, b, lambda p: np.asarray(other_factors(p)), epsilon, inner_spacing)
    # negative side [p_lo, min(p_hi, -b)], mapped to |p|
    if p_lo < -b:
        hi_mag = -p_lo
        lo_mag = max(-min(p_hi, -b), b)
        total += _side_pieces(lo_mag, hi_mag, b, lambda p: np.asarray(other_factors(-p)), epsilon, inner_spacing)
    return total
