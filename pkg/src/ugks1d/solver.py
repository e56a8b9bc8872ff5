"""First-order finite-volume time stepping and its physics-process
decomposition.

One step does, in order: interface fluxes, macroscopic update,
equilibrium prediction, distribution update with the stiff in-cell
collision folded in implicitly,

    u'   = u - (dt/dx) (F*_{i+1/2} - F*_{i-1/2})
    g'   = u' * omega_k
    f'   = [f - (c_k dt/dx)(f*_{i+1/2} - f*_{i-1/2}) + (dt/tau) g']
           / (1 + dt/tau).

The same step is exactly a convex combination of three sub-methods
(free transport, interface collisions, in-cell collisions), with
weights W/(1+dt/tau), (1-W)/(1+dt/tau) and (dt/tau)/(1+dt/tau); see
``sub_methods``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fields import (
    KineticState,
    NormReport,
    SpatialGrid,
    check_dims,
    norm_report,
    weighted_l2_norm,
)
from .fluxes import FluxSet, assemble_fluxes
from .model import ModelParams, VelocityGrid, erf_unnormalized

#: Relative slack applied when comparing dt against the CFL bound.
_CFL_SLACK = 1e-12


class CflViolationError(RuntimeError):
    """dt exceeds the stability bound and no override was requested."""


class CflWarning(UserWarning):
    """dt exceeds the stability bound but an override is in force."""


class StabilityEnvelopeWarning(UserWarning):
    """The admissible dt leaves the interface sub-method's own region.

    The time-step bound admits beta = sqrt(a^2 + theta/2) * dt/dx up to
    erf_unnormalized(a/sqrt(theta)), but the full-weight interface scheme
    is non-expansive only for beta <= min(2E, 1/(2E)); when the
    collisional branch of the bound binds and E > 1/2 the two regions
    differ and the weighted norm can grow at admissible steps.
    """


@dataclass(frozen=True)
class StepConfig:
    """Time-step policy for ``step`` and ``run``.

    ``cfl_safety`` scales the maximal stable dt (default 0.9).  Setting
    ``dt_override`` fixes dt regardless of the bound; the CFL check is
    then downgraded to a warning so instability demonstrations can run.
    """

    cfl_safety: float = 0.9
    dt_override: float | None = None
    record_submethods: bool = False

    def __post_init__(self):
        if not (0.0 < self.cfl_safety <= 1.0):
            raise ValueError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety}")
        if self.dt_override is not None and not self.dt_override > 0:
            raise ValueError(f"dt_override must be positive, got {self.dt_override}")


@dataclass(frozen=True)
class SubMethodOutputs:
    """One step of each physics-process sub-method, from shared fluxes.

    f_f   free transport driven by the upwind interface values
    f_g   interface collisions driven by the equilibrium interface state
    f_s   in-cell collision projection u' * omega_k (exactly rank one)
    f_pre flux-only prediction W*f_f + (1-W)*f_g
    u_f, u_g_macro  macroscopic counterparts of f_f and f_g
    """

    f_f: np.ndarray
    f_g: np.ndarray
    f_s: np.ndarray
    f_pre: np.ndarray
    u_f: np.ndarray
    u_g_macro: np.ndarray
    W_value: float


@dataclass(frozen=True)
class StepRecord:
    """Per-step trajectory entry produced by ``run``."""

    step: int
    time: float
    dt: float
    norms: NormReport
    submethod_norms: tuple[float, float, float] | None = None
    cfl_exceeded: bool = False


def cfl_max_dt(grid: VelocityGrid, params: ModelParams, sgrid: SpatialGrid) -> float:
    """Largest stable dt: dx / max(max_k |c_k|, wave_speed / erf term).

    The second branch comes from the interface-collision sub-method,
    whose scalar momentum scheme is stable only while
    sqrt(a**2 + theta/2) * dt/dx <= erf_unnormalized(a/sqrt(theta)).
    Independent of tau.
    """
    kinetic = grid.max_speed
    collisional = params.wave_speed / erf_unnormalized(
        params.a / math.sqrt(params.theta)
    )
    return sgrid.dx / max(kinetic, collisional)


def init_equilibrium(u_profile, grid: VelocityGrid, sgrid: SpatialGrid) -> KineticState:
    """Equilibrium state u_i * omega_k with u_i = u_profile(x_i)."""
    u = np.asarray([u_profile(x) for x in sgrid.cell_centers()], dtype=float)
    f = np.multiply.outer(grid.weights, u)
    return KineticState.from_arrays(f=f, u=u)


def init_nonequilibrium(
    u_profile, perturbation, grid: VelocityGrid, sgrid: SpatialGrid
) -> KineticState:
    """Equilibrium state plus a perturbation projected to zero moment.

    ``perturbation`` is a (2K+1, I) array p; the constructed distribution
    is u_i*omega_k + p - omega_k * (dc * sum_l p_{l,i}), so the moment
    constraint u_i = dc * sum_k f_{k,i} survives up to the grid's
    quadrature defect for any p.
    """
    u = np.asarray([u_profile(x) for x in sgrid.cell_centers()], dtype=float)
    p = np.asarray(perturbation, dtype=float)
    if p.shape != (grid.size, sgrid.I):
        raise ValueError(
            f"perturbation shape {p.shape} does not match ({grid.size}, {sgrid.I})"
        )
    excess = grid.dc * np.sum(p, axis=0)
    f = np.multiply.outer(grid.weights, u) + p - np.multiply.outer(grid.weights, excess)
    return KineticState.from_arrays(f=f, u=u)


def _enforce_cfl(dt: float, dt_max: float, cfg: StepConfig):
    if dt <= dt_max * (1.0 + _CFL_SLACK):
        return False
    if cfg.dt_override is not None:
        warnings.warn(
            f"dt={dt} exceeds the stability bound {dt_max}; expect growth",
            CflWarning,
            stacklevel=3,
        )
        return True
    raise CflViolationError(f"dt={dt} exceeds the stability bound {dt_max}")


def _macro_update(u, F_star, dt_over_dx):
    return u - dt_over_dx * (F_star[1:] - F_star[:-1])


def _transport_update(f, iface, nodes, dt_over_dx):
    return f - (nodes * dt_over_dx)[:, None] * (iface[:, 1:] - iface[:, :-1])


def _submethods_from_fluxes(
    state: KineticState,
    fx: FluxSet,
    grid: VelocityGrid,
    sgrid: SpatialGrid,
    dt: float,
) -> SubMethodOutputs:
    lam = dt / sgrid.dx
    W = fx.W_value
    f_f = _transport_update(state.f, fx.f_upwind, grid.nodes, lam)
    f_g = _transport_update(state.f, fx.g_interface, grid.nodes, lam)
    F_up = grid.dc * np.sum(grid.nodes[:, None] * fx.f_upwind, axis=0)
    F_g = grid.dc * np.sum(grid.nodes[:, None] * fx.g_interface, axis=0)
    u_f = _macro_update(state.u, F_up, lam)
    u_g_macro = _macro_update(state.u, F_g, lam)
    f_pre = W * f_f + (1.0 - W) * f_g
    # f_s reuses the full update's u' (same F_star pass) so the in-cell
    # projection is bit-identical to the step's equilibrium prediction.
    u_next = _macro_update(state.u, fx.F_star, lam)
    f_s = np.multiply.outer(grid.weights, u_next)
    return SubMethodOutputs(
        f_f=f_f, f_g=f_g, f_s=f_s, f_pre=f_pre, u_f=u_f, u_g_macro=u_g_macro, W_value=W
    )


def step(
    state: KineticState,
    dt: float,
    grid: VelocityGrid,
    sgrid: SpatialGrid,
    params: ModelParams,
    cfg: StepConfig = StepConfig(),
) -> tuple[KineticState, SubMethodOutputs | None]:
    """Advance one time step; optionally return the sub-method outputs."""
    check_dims(state, grid, sgrid)
    _enforce_cfl(dt, cfl_max_dt(grid, params, sgrid), cfg)

    fx = assemble_fluxes(state, grid, sgrid, params, dt)
    lam = dt / sgrid.dx
    r = dt / params.tau

    u_next = _macro_update(state.u, fx.F_star, lam)
    g_next = np.multiply.outer(grid.weights, u_next)
    f_pre = _transport_update(state.f, fx.f_star, grid.nodes, lam)
    f_next = (f_pre + r * g_next) / (1.0 + r)

    next_state = KineticState.from_arrays(
        f=f_next, u=u_next, time=state.time + dt, step_index=state.step_index + 1
    )
    subs = None
    if cfg.record_submethods:
        subs = _submethods_from_fluxes(state, fx, grid, sgrid, dt)
    return next_state, subs


def sub_methods(
    state: KineticState,
    dt: float,
    grid: VelocityGrid,
    sgrid: SpatialGrid,
    params: ModelParams,
    cfg: StepConfig = StepConfig(),
) -> SubMethodOutputs:
    """Evaluate the three sub-method updates on shared interface fluxes.

    Recombining them with weights W/(1+r), (1-W)/(1+r), r/(1+r)
    (r = dt/tau) reproduces ``step``'s distribution update to roundoff,
    and u' = W*u_f + (1-W)*u_g_macro reproduces the macroscopic update.
    """
    check_dims(state, grid, sgrid)
    _enforce_cfl(dt, cfl_max_dt(grid, params, sgrid), cfg)
    fx = assemble_fluxes(state, grid, sgrid, params, dt)
    return _submethods_from_fluxes(state, fx, grid, sgrid, dt)


def recombine(subs: SubMethodOutputs, dt: float, params: ModelParams) -> np.ndarray:
    """Convex recombination of the sub-methods into the full update."""
    r = dt / params.tau
    W = subs.W_value
    return (W * subs.f_f + (1.0 - W) * subs.f_g + r * subs.f_s) / (1.0 + r)


def run(
    state: KineticState,
    t_end: float,
    grid: VelocityGrid,
    sgrid: SpatialGrid,
    params: ModelParams,
    cfg: StepConfig = StepConfig(),
) -> tuple[KineticState, list[StepRecord]]:
    """March from state.time to exactly t_end, recording norms per step.

    dt is cfl_safety * dt_max (or dt_override) for every step except the
    last, which is shortened to land on t_end; the returned trajectory
    starts with a baseline record of the initial state (dt = 0).
    """
    if t_end < state.time:
        raise ValueError(f"t_end={t_end} lies before state.time={state.time}")

    dt_max = cfl_max_dt(grid, params, sgrid)
    dt_base = cfg.dt_override if cfg.dt_override is not None else cfg.cfl_safety * dt_max
    cfl_exceeded = dt_base > dt_max * (1.0 + _CFL_SLACK)

    E = erf_unnormalized(params.a / math.sqrt(params.theta))
    beta = params.wave_speed * dt_base / sgrid.dx
    if beta > min(2.0 * E, 1.0 / (2.0 * E)) * (1.0 + _CFL_SLACK):
        warnings.warn(
            f"interface-collision Courant number {beta:.4f} exceeds the "
            f"sub-method stability region min(2E, 1/(2E)) = "
            f"{min(2.0 * E, 1.0 / (2.0 * E)):.4f}; the weighted norm may grow",
            StabilityEnvelopeWarning,
            stacklevel=2,
        )

    records: list[StepRecord] = []
    if t_end == state.time:
        return state, records

    records.append(
        StepRecord(
            step=state.step_index,
            time=state.time,
            dt=0.0,
            norms=norm_report(state, grid, sgrid),
            cfl_exceeded=False,
        )
    )
    while state.time < t_end:
        remaining = t_end - state.time
        dt = remaining if remaining <= dt_base * (1.0 + _CFL_SLACK) else dt_base
        state, subs = step(state, dt, grid, sgrid, params, cfg)
        if dt == remaining:
            # Land on t_end exactly rather than on the rounded time + dt.
            state = KineticState(
                f=state.f, u=state.u, time=t_end, step_index=state.step_index
            )
        sub_norms = None
        if subs is not None:
            sub_norms = tuple(
                weighted_l2_norm(
                    KineticState(f=g, u=state.u, time=state.time, step_index=0),
                    grid,
                    sgrid,
                )
                for g in (subs.f_f, subs.f_g, subs.f_s)
            )
        records.append(
            StepRecord(
                step=state.step_index,
                time=state.time,
                dt=dt,
                norms=norm_report(state, grid, sgrid),
                submethod_norms=sub_norms,
                cfl_exceeded=cfl_exceeded,
            )
        )
    return state, records
