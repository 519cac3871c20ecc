"""Exception hierarchy shared across the package.

Everything raised on purpose derives from :class:`PathspectraError` so callers
(and the command-line driver) can distinguish our diagnostics from genuine
bugs.  The two singular-time conditions get their own classes because they map
to a dedicated process exit code.
"""

from __future__ import annotations

__all__ = [
    "PathspectraError",
    "DomainError",
    "SingularTimeError",
    "DivergentSampleError",
    "ExcludedRegionError",
    "DegenerateDistributionError",
    "UsageError",
]


class PathspectraError(Exception):
    """Base class for all errors raised deliberately by this package."""


class DomainError(PathspectraError):
    """An argument lies outside the mathematical domain of an operation.

    Examples: a negative quantum number, an evaluation point outside the
    configuration interval of a bounded system, or a non-positive travel time.
    """


class SingularTimeError(PathspectraError):
    """The harmonic-oscillator kernel is singular: ``sin(omega*T) == 0``.

    At these times the oscillator refocuses every trajectory onto a point and
    neither the propagator amplitude nor the Morse-index phase is defined.
    """


class DivergentSampleError(PathspectraError):
    """A pointwise integrand sample sits exactly on a 1/sqrt divergence.

    The oscillator integrand blows up (integrably) at ``|p_c| == M*omega*|x_f|``;
    asking for the value *at* that point is a caller error, while windows that
    merely straddle it are handled analytically by the quadrature layer.
    """


class ExcludedRegionError(PathspectraError):
    """A requested classical turning-point inversion has no real solution.

    Raised by trajectory-level helpers when ``|p_c| < M*omega*|x_f|``: no real
    starting point reaches ``x_f`` with that characteristic momentum.  The
    integration layer treats this region as contributing zero instead of
    raising.
    """


class DegenerateDistributionError(PathspectraError):
    """A distribution is identically zero, so moments are undefined."""


class UsageError(PathspectraError):
    """Malformed command-line arguments or configuration input."""
