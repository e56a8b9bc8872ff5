"""First-order unified gas-kinetic scheme for a linear BGK model.

The package couples a finite-volume kinetic solver (discrete velocity
lattice, blended interface fluxes, implicit in-cell relaxation) with an
executable form of its stability analysis: moment-constraint
preservation, the convex sub-method decomposition, the rank-1
eigenstructure and Riemann invariants of the interface-collision
process, and closed-form von Neumann amplification checks.
"""

from .fields import (
    KineticState,
    NormReport,
    SpatialGrid,
    constraint_residual,
    macro_l2_norm,
    norm_report,
    weighted_l2_norm,
)
from .fluxes import (
    FluxSet,
    assemble_fluxes,
    equilibrium_interface,
    relaxation_weight,
    upwind_interface,
)
from .model import (
    ModelParams,
    QuadratureWarning,
    VelocityGrid,
    build_grid,
    equilibrium_projection,
    erf_unnormalized,
)
from .solver import (
    CflViolationError,
    CflWarning,
    StabilityEnvelopeWarning,
    StepConfig,
    StepRecord,
    SubMethodOutputs,
    cfl_max_dt,
    init_equilibrium,
    init_nonequilibrium,
    recombine,
    run,
    step,
    sub_methods,
)
from .spectral import (
    AmplificationSample,
    EigenStructure,
    GSubstepReport,
    critical_beta,
    eigen_structure,
    find_critical_beta,
    gap_supremum,
    momentum_limit_scheme,
    momentum_scheme_gap,
    riemann_inverse,
    riemann_transform,
    scalar_momentum_step,
    stability_region_samples,
    transport_amplification,
    verify_submethod_g_invariants,
)

__all__ = [
    "AmplificationSample",
    "CflViolationError",
    "CflWarning",
    "EigenStructure",
    "FluxSet",
    "GSubstepReport",
    "KineticState",
    "ModelParams",
    "NormReport",
    "QuadratureWarning",
    "SpatialGrid",
    "StabilityEnvelopeWarning",
    "StepConfig",
    "StepRecord",
    "SubMethodOutputs",
    "VelocityGrid",
    "assemble_fluxes",
    "build_grid",
    "cfl_max_dt",
    "constraint_residual",
    "critical_beta",
    "eigen_structure",
    "equilibrium_interface",
    "equilibrium_projection",
    "erf_unnormalized",
    "find_critical_beta",
    "gap_supremum",
    "init_equilibrium",
    "init_nonequilibrium",
    "macro_l2_norm",
    "momentum_limit_scheme",
    "momentum_scheme_gap",
    "norm_report",
    "recombine",
    "relaxation_weight",
    "riemann_inverse",
    "riemann_transform",
    "run",
    "scalar_momentum_step",
    "stability_region_samples",
    "step",
    "sub_methods",
    "transport_amplification",
    "upwind_interface",
    "verify_submethod_g_invariants",
    "weighted_l2_norm",
]

__version__ = "0.1.0"
