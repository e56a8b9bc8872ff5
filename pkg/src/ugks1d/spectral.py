"""Amplification factors, the rank-1 eigenstructure of the
interface-collision sub-method, Riemann invariants, and the
hydrodynamic-limit momentum scheme.

Two closed-form von Neumann results drive the stability bounds, with
beta = sqrt(a^2 + theta/2) dt/dx and E = erf_unnormalized(alpha),
alpha = a/sqrt(theta):

* free transport at Courant number eta amplifies a harmonic of phase xi
  by |lambda|^2 = 1 - 4 eta (1 - eta) sin^2(xi/2), which stays <= 1
  exactly for eta in [0, 1];
* ``momentum_scheme_gap`` is the closed form
  g(xi) = 4 sin^2(xi/2) [beta (beta - E)
                         - beta^2 (1 - E^2) sin^2(xi/2)],
  non-positive on [0, pi] exactly when beta <= E.

Caution: g(xi) is |G|^2 - 1 for a scalar interface scheme whose jump
weight is E/2.  The interface construction in this package carries the
full weight E, and the identical derivation then gives
|G|^2 - 1 = 4 s beta [(beta - 2E) + s beta (4E^2 - 1)], s = sin^2(xi/2),
whose stability boundary is min(2E, 1/(2E)) rather than E.  The solver's
time-step bound keeps beta far inside both regions whenever the particle
velocity branch of the bound binds (it does for the default grids); the
tests pin down both gap functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import KineticState, SpatialGrid, check_dims
from .fluxes import periodic_extend
from .model import ModelParams, VelocityGrid, erf_unnormalized
from .solver import sub_methods

DEFAULT_XI_COUNT = 129


def default_xi_samples(count: int = DEFAULT_XI_COUNT) -> np.ndarray:
    return np.linspace(0.0, math.pi, count)


def transport_amplification(eta, xi):
    """Amplification factor of upwind free transport at Courant eta.

    Returns (lambda, |lambda|^2) with lambda = 1 - eta (1 - exp(-i xi))
    and the closed-form modulus 1 - 4 eta (1 - eta) sin^2(xi/2); the two
    routes agree to roundoff and are cross-checked in the tests.
    """
    eta = np.asarray(eta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    lam = 1.0 - eta * (1.0 - np.exp(-1j * xi))
    s = np.sin(0.5 * xi) ** 2
    mod2 = 1.0 - 4.0 * eta * (1.0 - eta) * s
    if lam.ndim == 0:
        return complex(lam), float(mod2)
    return lam, mod2


def momentum_scheme_gap(beta: float, alpha: float, xi):
    """Closed-form spectral gap g(xi) of the half-weight scalar scheme.

    g(xi) = 4 sin^2(xi/2) [beta (beta - E) - beta^2 (1 - E^2) sin^2(xi/2)]
    with E = erf_unnormalized(alpha); see the module docstring for how
    this relates to the full-weight interface construction.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    E = erf_unnormalized(alpha)
    s = np.sin(0.5 * np.asarray(xi, dtype=float)) ** 2
    gap = 4.0 * s * (beta * (beta - E) - beta * beta * (1.0 - E * E) * s)
    if gap.ndim == 0:
        return float(gap)
    return gap


def gap_supremum(beta: float, alpha: float, xi=None) -> float:
    """sup over xi in [0, pi] of the gap function.

    The gap is quadratic in s = sin^2(xi/2), so the interior maximizer is
    evaluated alongside the sampled phases; the returned supremum is
    exact up to roundoff (it is 0 for beta <= erf_unnormalized(alpha)
    and positive beyond).
    """
    xi = default_xi_samples() if xi is None else np.asarray(xi, dtype=float)
    E = erf_unnormalized(alpha)
    s_vertex = (beta - E) / (2.0 * beta * (1.0 - E * E))
    s_vertex = min(1.0, max(0.0, s_vertex))
    xi_all = np.append(xi, 2.0 * math.asin(math.sqrt(s_vertex)))
    return float(np.max(momentum_scheme_gap(beta, alpha, xi_all)))


def critical_beta(alpha: float) -> float:
    """Largest Courant number beta with a non-positive gap for all xi."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return erf_unnormalized(alpha)


def find_critical_beta(alpha: float, tol: float = 1e-6, xi=None) -> float:
    """Locate the sign change of ``gap_supremum`` in beta by bisection.

    Independent numerical confirmation of ``critical_beta``; the bracket
    [E/2, 3E/2] always straddles the boundary.
    """
    lo = 0.5 * erf_unnormalized(alpha)
    hi = 1.5 * erf_unnormalized(alpha)
    if gap_supremum(lo, alpha, xi) > 0 or gap_supremum(hi, alpha, xi) <= 0:
        raise RuntimeError("bisection bracket does not straddle the boundary")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap_supremum(mid, alpha, xi) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class AmplificationSample:
    """One (phase, Courant, gap) sample of a stability sweep."""

    xi: float
    eta: float
    beta: float
    alpha: float
    lambda_mod2: float
    gap: float


def stability_region_samples(
    alpha: float, betas, xi=None
) -> list[AmplificationSample]:
    """Sample the gap function over a (beta, xi) lattice at fixed alpha.

    ``eta`` is the Courant number of the scalar momentum wave, i.e. beta
    itself, and ``lambda_mod2`` the matching transport modulus.
    """
    xi = default_xi_samples() if xi is None else np.asarray(xi, dtype=float)
    samples = []
    for beta in betas:
        gaps = momentum_scheme_gap(beta, alpha, xi)
        _, mod2 = transport_amplification(beta, xi)
        mod2 = np.atleast_1d(mod2)
        gaps = np.atleast_1d(gaps)
        for j in range(xi.shape[0]):
            samples.append(
                AmplificationSample(
                    xi=float(xi[j]),
                    eta=float(beta),
                    beta=float(beta),
                    alpha=float(alpha),
                    lambda_mod2=float(mod2[j]),
                    gap=float(gaps[j]),
                )
            )
    return samples


@dataclass(frozen=True)
class EigenStructure:
    """Left-eigenvector data of the interface-collision system.

    The system matrix is the rank-1 A = b b^T / sqrt(a^2 + theta/2) with
    b_k = c_k sqrt(omega_k dc).  ``l1`` is the lone non-trivial left
    eigenvector (eigenvalue ``lambda1``), and ``L`` stacks l1 with a
    deterministic orthonormal completion of its complement, so rows
    2..2K+1 annihilate A.
    """

    b: np.ndarray
    lambda1: float
    l1: np.ndarray
    L: np.ndarray
    sqrt_weights: np.ndarray

    @property
    def size(self) -> int:
        return self.b.shape[0]

    def matrix(self, params: ModelParams) -> np.ndarray:
        """Explicitly formed system matrix A (for rank/spectrum checks)."""
        return np.outer(self.b, self.b) / params.wave_speed

    def orthogonality_residual(self) -> float:
        return float(np.max(np.abs(self.L @ self.L.T - np.eye(self.size))))


def eigen_structure(grid: VelocityGrid, params: ModelParams) -> EigenStructure:
    """Build b, lambda1, l1 and the orthogonal eigenvector matrix L.

    The completion reflects the first coordinate axis onto b's direction
    (a single Householder map), so the basis is reproducible bit-for-bit;
    any orthonormal basis of the complement would do mathematically.
    """
    b = grid.nodes * np.sqrt(grid.weights * grid.dc)
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0.0:
        raise ValueError("degenerate eigenstructure: b vanishes")
    lambda1 = float(b @ b) / params.wave_speed
    l1 = b / params.wave_speed

    unit = b / bnorm
    sign = 1.0 if unit[0] >= 0 else -1.0
    v = unit.copy()
    v[0] += sign
    H = np.eye(grid.size) - 2.0 * np.outer(v, v) / float(v @ v)
    # H maps unit -> -sign*e1; its remaining rows span unit's complement.
    L = np.vstack([l1, H[1:]])
    return EigenStructure(
        b=b, lambda1=lambda1, l1=l1, L=L, sqrt_weights=np.sqrt(grid.weights)
    )


def riemann_transform(state_or_f, eig: EigenStructure) -> np.ndarray:
    """Riemann invariants R_{m,i} = l_m . (f_{.,i} / sqrt(omega)).

    Accepts a KineticState or a bare (2K+1, I) distribution array.
    """
    f = state_or_f.f if isinstance(state_or_f, KineticState) else np.asarray(state_or_f)
    if f.shape[0] != eig.size:
        raise ValueError(f"distribution has {f.shape[0]} rows, expected {eig.size}")
    return eig.L @ (f / eig.sqrt_weights[:, None])


def riemann_inverse(R: np.ndarray, eig: EigenStructure) -> np.ndarray:
    """Back-transform invariants to a distribution (L is orthogonal)."""
    if R.shape[0] != eig.size:
        raise ValueError(f"invariants have {R.shape[0]} rows, expected {eig.size}")
    return (eig.L.T @ R) * eig.sqrt_weights[:, None]


def _scalar_interface(F: np.ndarray, jump_weight: float) -> np.ndarray:
    F_ext = periodic_extend(F)
    left, right = F_ext[:-1], F_ext[1:]
    return 0.5 * (left + right) - jump_weight * (right - left)


def scalar_momentum_step(
    F: np.ndarray, dt: float, dx: float, speed: float, jump_weight: float
) -> np.ndarray:
    """One step of the scalar upwind-weighted momentum scheme.

    F_i' = F_i - speed * (dt/dx) * (F_{i+1/2} - F_{i-1/2}) with interface
    values 0.5*(F_i + F_{i+1}) - jump_weight*(F_{i+1} - F_i), periodic.
    """
    iface = _scalar_interface(np.asarray(F, dtype=float), jump_weight)
    return F - speed * (dt / dx) * (iface[1:] - iface[:-1])


def momentum_limit_scheme(
    F, dt: float, grid: VelocityGrid, sgrid: SpatialGrid, params: ModelParams
) -> np.ndarray:
    """Momentum update that the flux-only prediction reduces to as tau -> 0.

    The advection speed is the lattice second moment divided by
    sqrt(a^2 + theta/2); the jump weight is erf_unnormalized(a/sqrt(theta)).
    """
    speed = grid.moment(2) / params.wave_speed
    jump_weight = erf_unnormalized(params.a / math.sqrt(params.theta))
    return scalar_momentum_step(np.asarray(F, dtype=float), dt, sgrid.dx, speed, jump_weight)


@dataclass(frozen=True)
class GSubstepReport:
    """How one interface-collision sub-step acted on the invariants.

    ``max_frozen_change``: largest change of any invariant R_m, m >= 2
    (exactly frozen under exact quadrature).  ``momentum_mismatch``:
    largest deviation of the first moments from one step of the scalar
    momentum scheme at speed sqrt(a^2 + theta/2).  ``momentum_sq_*``:
    dx-weighted squared l2 sums of the first moments before/after.
    """

    max_frozen_change: float
    frozen_scale: float
    momentum_mismatch: float
    momentum_scale: float
    momentum_sq_before: float
    momentum_sq_after: float


def verify_submethod_g_invariants(
    state: KineticState,
    dt: float,
    grid: VelocityGrid,
    sgrid: SpatialGrid,
    params: ModelParams,
    eig: EigenStructure | None = None,
) -> GSubstepReport:
    """Apply one interface-collision sub-step and report its invariants."""
    check_dims(state, grid, sgrid)
    if eig is None:
        eig = eigen_structure(grid, params)

    f_g_next = sub_methods(state, dt, grid, sgrid, params).f_g
    R_before = riemann_transform(state.f, eig)
    R_after = riemann_transform(f_g_next, eig)
    max_frozen = float(np.max(np.abs(R_after[1:] - R_before[1:])))
    frozen_scale = max(1.0, float(np.max(np.abs(R_before))))

    jump_weight = erf_unnormalized(params.a / math.sqrt(params.theta))
    F_before = grid.dc * np.sum(grid.nodes[:, None] * state.f, axis=0)
    F_after = grid.dc * np.sum(grid.nodes[:, None] * f_g_next, axis=0)
    F_predicted = scalar_momentum_step(
        F_before, dt, sgrid.dx, params.wave_speed, jump_weight
    )
    mismatch = float(np.max(np.abs(F_after - F_predicted)))
    momentum_scale = max(1.0, float(np.max(np.abs(F_before))))

    return GSubstepReport(
        max_frozen_change=max_frozen,
        frozen_scale=frozen_scale,
        momentum_mismatch=mismatch,
        momentum_scale=momentum_scale,
        momentum_sq_before=float(sgrid.dx * np.sum(F_before * F_before)),
        momentum_sq_after=float(sgrid.dx * np.sum(F_after * F_after)),
    )
