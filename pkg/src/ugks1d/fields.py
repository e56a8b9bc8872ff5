"""Discrete states on a periodic spatial grid, norms and residuals."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import VelocityGrid


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform periodic grid of I cells of size dx (period I * dx)."""

    I: int
    dx: float

    def __post_init__(self):
        if self.I < 2:
            raise ValueError(f"need at least 2 cells, got {self.I}")
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")

    @classmethod
    def from_length(cls, I: int, length: float) -> "SpatialGrid":
        return cls(I=I, dx=length / I)

    @property
    def length(self) -> float:
        return self.I * self.dx

    def cell_centers(self) -> np.ndarray:
        return (np.arange(self.I) + 0.5) * self.dx


@dataclass(frozen=True)
class KineticState:
    """Snapshot of the discrete distribution and macroscopic field.

    ``f`` has shape (2K+1, I) with rows in ascending velocity order,
    ``u`` has shape (I,).  States are value-semantic: the arrays are
    frozen and every solver step returns a new instance.
    """

    f: np.ndarray
    u: np.ndarray
    time: float = 0.0
    step_index: int = 0

    @classmethod
    def from_arrays(cls, f, u, time: float = 0.0, step_index: int = 0) -> "KineticState":
        f = np.array(f, dtype=float)
        u = np.array(u, dtype=float)
        if f.ndim != 2 or u.ndim != 1 or f.shape[1] != u.shape[0]:
            raise ValueError(f"inconsistent state shapes f{f.shape}, u{u.shape}")
        f.flags.writeable = False
        u.flags.writeable = False
        return cls(f=f, u=u, time=time, step_index=step_index)


@dataclass(frozen=True)
class NormReport:
    """Weighted L2 norm of f, plain l2 norm of u, and the moment-constraint
    residual, evaluated on one state."""

    weighted_l2: float
    macro_l2: float
    constraint_residual: float


def check_dims(state: KineticState, grid: VelocityGrid, sgrid: SpatialGrid | None = None):
    if state.f.shape[0] != grid.size:
        raise ValueError(
            f"state has {state.f.shape[0]} velocity rows, grid has {grid.size}"
        )
    if sgrid is not None and state.f.shape[1] != sgrid.I:
        raise ValueError(f"state has {state.f.shape[1]} cells, grid has {sgrid.I}")


def weighted_l2_norm(state: KineticState, grid: VelocityGrid, sgrid: SpatialGrid) -> float:
    """(sum_k dc * sum_i dx * f_{k,i}**2 / omega_k) ** 0.5.

    Reduction order is fixed: cells first within each velocity row, then
    ascending k, so repeated evaluations are bit-identical.
    """
    check_dims(state, grid, sgrid)
    row_sq = np.sum(state.f * state.f, axis=1) * sgrid.dx
    return math.sqrt(grid.dc * np.sum(row_sq / grid.weights))


def macro_l2_norm(state: KineticState, sgrid: SpatialGrid) -> float:
    """(sum_i dx * u_i**2) ** 0.5."""
    if state.u.shape[0] != sgrid.I:
        raise ValueError(f"state has {state.u.shape[0]} cells, grid has {sgrid.I}")
    return math.sqrt(sgrid.dx * np.sum(state.u * state.u))


def velocity_moments(state: KineticState, grid: VelocityGrid) -> np.ndarray:
    """Zeroth lattice moment dc * sum_k f_{k,i} per cell."""
    check_dims(state, grid)
    return grid.dc * np.sum(state.f, axis=0)


def constraint_residual(state: KineticState, grid: VelocityGrid) -> float:
    """max_i |u_i - dc * sum_k f_{k,i}|."""
    check_dims(state, grid)
    return float(np.max(np.abs(state.u - velocity_moments(state, grid))))


def norm_report(state: KineticState, grid: VelocityGrid, sgrid: SpatialGrid) -> NormReport:
    return NormReport(
        weighted_l2=weighted_l2_norm(state, grid, sgrid),
        macro_l2=macro_l2_norm(state, sgrid),
        constraint_residual=constraint_residual(state, grid),
    )
