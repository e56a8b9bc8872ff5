"""Physical parameters, discrete velocity space and equilibrium weights.

The kinetic model relaxes a distribution f(c, x, t) toward the Gaussian
equilibrium u(x, t) * omega(c) with

    omega(c) = (theta * pi)**-0.5 * exp(-(c - a)**2 / theta),

which reproduces linear advection-diffusion with diffusivity
nu = theta * tau / 2 in the small-tau limit.  Velocity space is a uniform
lattice of 2K + 1 nodes c_k = a + k * dc; all quadratures are plain
lattice sums with weight dc, summed in ascending k order.

Throughout this package ``erf_unnormalized`` denotes the *unnormalized*
error function integral(0, x) of exp(-t**2), whose supremum is
sqrt(pi)/2 ~ 0.886 (no 2/sqrt(pi) prefactor).  The interface-collision
construction and the CFL bound depend on this convention.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

SQRT_PI = math.sqrt(math.pi)

#: Lattice sums are required to reproduce the first three Gaussian moments
#: to this accuracy before a grid is considered quadrature-clean.
DEFAULT_MOMENT_TOLERANCE = 1e-12


class QuadratureWarning(UserWarning):
    """A velocity grid fails the requested moment accuracy (non-fatal)."""


@dataclass(frozen=True)
class ModelParams:
    """Constant model parameters.

    Attributes
    ----------
    a : float
        Advection velocity, > 0.
    theta : float
        Temperature-like spread of the equilibrium Gaussian, > 0.
    tau : float
        Relaxation (mean collision) time, > 0.
    """

    a: float
    theta: float
    tau: float

    def __post_init__(self):
        if not (self.a > 0 and self.theta > 0 and self.tau > 0):
            raise ValueError(
                f"a, theta, tau must all be positive, got "
                f"a={self.a}, theta={self.theta}, tau={self.tau}"
            )

    @property
    def nu(self) -> float:
        """Diffusivity of the hydrodynamic limit, always theta*tau/2."""
        return 0.5 * self.theta * self.tau

    @property
    def wave_speed(self) -> float:
        """sqrt(a**2 + theta/2), the analytic root-mean-square speed."""
        return math.sqrt(self.a * self.a + 0.5 * self.theta)


def erf_unnormalized(x: float) -> float:
    """Integral of exp(-t**2) from 0 to x (odd, bounded by sqrt(pi)/2)."""
    return 0.5 * SQRT_PI * math.erf(x)


@dataclass(frozen=True)
class VelocityGrid:
    """Uniform velocity lattice with Gaussian weights.

    ``nodes[j]`` is c_k for k = j - K, ``weights[j]`` the matching
    omega_k.  ``moment_defects`` holds the absolute deviations of the
    lattice sums from the exact moments (1, a, a**2 + theta/2).
    Arrays are read-only; instances are safe to share across threads.
    """

    K: int
    dc: float
    nodes: np.ndarray
    weights: np.ndarray
    moment_defects: tuple[float, float, float]
    renormalized: bool = field(default=False)

    @property
    def size(self) -> int:
        return 2 * self.K + 1

    @property
    def max_speed(self) -> float:
        return float(np.max(np.abs(self.nodes)))

    def moment(self, order: int) -> float:
        """Lattice moment sum dc * sum_k c_k**order * omega_k."""
        return float(self.dc * np.sum(self.nodes**order * self.weights))


def build_grid(
    params: ModelParams,
    K: int = 48,
    coverage: float = 6.0,
    renormalize: bool = False,
    tolerance: float = DEFAULT_MOMENT_TOLERANCE,
) -> VelocityGrid:
    """Build the velocity lattice spanning a +- coverage*sqrt(theta).

    Parameters
    ----------
    K : int
        Half node count; the lattice has 2K + 1 nodes.
    coverage : float
        Half-width of the lattice in units of sqrt(theta).  The default
        (6 standard deviations, with the default K = 48) keeps all three
        moment defects below 1e-12; coverage 3 leaves a truncation error
        orders of magnitude above that.
    renormalize : bool
        Rescale the weights so the zeroth lattice moment is exactly 1.
        Off by default; the rescaled weights are no longer the pointwise
        Gaussian values.
    tolerance : float
        Moment-defect level above which a ``QuadratureWarning`` is issued.

    Raises
    ------
    ValueError
        If K < 1 or coverage <= 0.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if not coverage > 0:
        raise ValueError(f"coverage must be positive, got {coverage}")

    dc = coverage * math.sqrt(params.theta) / K
    # Offsets are built once and mirrored so omega_k == omega_{-k} exactly.
    offsets = dc * np.arange(-K, K + 1, dtype=float)
    nodes = params.a + offsets
    weights = np.exp(-(offsets * offsets) / params.theta) / math.sqrt(
        params.theta * math.pi
    )
    if renormalize:
        weights = weights / (dc * np.sum(weights))

    defects = (
        abs(dc * np.sum(weights) - 1.0),
        abs(dc * np.sum(nodes * weights) - params.a),
        abs(dc * np.sum(nodes * nodes * weights) - (params.a**2 + 0.5 * params.theta)),
    )
    if max(defects) > tolerance:
        warnings.warn(
            f"velocity grid moment defects {defects} exceed tolerance {tolerance}; "
            f"increase K or coverage",
            QuadratureWarning,
            stacklevel=2,
        )

    nodes.flags.writeable = False
    weights.flags.writeable = False
    return VelocityGrid(
        K=K,
        dc=dc,
        nodes=nodes,
        weights=weights,
        moment_defects=defects,
        renormalized=renormalize,
    )


def equilibrium_projection(u, grid: VelocityGrid) -> np.ndarray:
    """Project a macroscopic value onto the equilibrium shape u * omega_k.

    ``u`` may be a scalar (returns one velocity column) or a length-I
    array (returns the (2K+1, I) equilibrium field).
    """
    u = np.asarray(u, dtype=float)
    if u.ndim == 0:
        return float(u) * grid.weights
    return np.multiply.outer(grid.weights, u)
