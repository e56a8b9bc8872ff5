"""Acceptance gate: one test per stability-analysis criterion.

Every test prints `ACCEPTANCE <name>: PASS/FAIL` (visible with -s or in
captured output) and asserts at the stated tolerance, desk scale:
I <= 256, 97 velocities, <= 1000 steps per run.
"""

import math

import numpy as np
import pytest

from ugks1d import (
    ModelParams,
    SpatialGrid,
    StepConfig,
    cfl_max_dt,
    constraint_residual,
    critical_beta,
    eigen_structure,
    find_critical_beta,
    gap_supremum,
    init_equilibrium,
    momentum_limit_scheme,
    recombine,
    run,
    step,
    sub_methods,
    transport_amplification,
    verify_submethod_g_invariants,
    weighted_l2_norm,
)

from conftest import make_random_compatible_state, make_state

TAUS = (1e-6, 1e-4, 1e-2, 1.0, 1e2)


def _criterion(name, checks):
    """checks: list of (ok, detail); prints one line and asserts all."""
    ok = all(c[0] for c in checks)
    detail = "; ".join(c[1] for c in checks)
    print(f"ACCEPTANCE {name}: {'PASS' if ok else 'FAIL'} [{detail}]")
    failed = [c[1] for c in checks if not c[0]]
    assert not failed, f"{name}: {failed}"


def test_quadrature_assumption(vgrid):
    d = vgrid.moment_defects
    _criterion(
        "quadrature-assumption",
        [(all(x < 1e-12 for x in d), f"defects={tuple(float(x) for x in d)} < 1e-12")],
    )


@pytest.mark.parametrize("tau", [1e-6, 1.0, 1e2])
def test_constraint_preservation(vgrid, tau):
    params = ModelParams(a=1.0, theta=1.0, tau=tau)
    sgrid = SpatialGrid.from_length(32, 2.0 * math.pi)
    state = make_random_compatible_state(vgrid, sgrid, seed=100)
    u0_inf = float(np.max(np.abs(state.u)))
    dt = 0.9 * cfl_max_dt(vgrid, params, sgrid)
    for _ in range(1000):
        state, _ = step(state, dt, vgrid, sgrid, params)
    res = constraint_residual(state, vgrid)

    # Contraction rate from deliberately incompatible data.
    base = init_equilibrium(lambda x: math.sin(x), vgrid, sgrid)
    bumped = make_state(base.f, base.u + 10.0)
    res0 = constraint_residual(bumped, vgrid)
    nxt, _ = step(bumped, dt, vgrid, sgrid, params)
    predicted = res0 / (1.0 + dt / tau)
    contraction_err = abs(constraint_residual(nxt, vgrid) - predicted) / predicted

    _criterion(
        f"constraint-preservation[tau={tau:g}]",
        [
            (res <= 1e-12 * u0_inf, f"residual after 1000 steps {res:.2e} <= 1e-12*|u0|"),
            (contraction_err <= 1e-10, f"contraction error {contraction_err:.2e} <= 1e-10"),
        ],
    )


@pytest.mark.parametrize("ic", ["equilibrium-sine", "random-nonequilibrium"])
def test_strong_stability(vgrid, sgrid, ic):
    checks = []
    for tau in TAUS:
        params = ModelParams(a=1.0, theta=1.0, tau=tau)
        dt = 0.9 * cfl_max_dt(vgrid, params, sgrid)
        if ic == "equilibrium-sine":
            state = init_equilibrium(lambda x: math.sin(x), vgrid, sgrid)
        else:
            state = make_random_compatible_state(vgrid, sgrid, seed=11)
        _, records = run(state, 500 * dt, vgrid, sgrid, params, StepConfig())
        assert len(records) == 501
        ws = [r.norms.weighted_l2 for r in records]
        worst = max(b / a for a, b in zip(ws, ws[1:]))
        macro_ok = all(
            r.norms.macro_l2 <= r.norms.weighted_l2 * (1.0 + 1e-12) for r in records
        )
        checks.append(
            (
                worst <= 1.0 + 1e-12 and macro_ok,
                f"tau={tau:g} dt/tau={dt / tau:.2e} max ratio={worst:.15f}",
            )
        )
    _criterion(f"strong-stability[{ic}]", checks)


def test_convex_decomposition(vgrid):
    sgrid = SpatialGrid.from_length(24, 2.0 * math.pi)
    worst_rec = 0.0
    worst_norm = 0.0
    taus = (1e-4, 1e-2, 1.0)
    for seed in range(100):
        params = ModelParams(a=1.0, theta=1.0, tau=taus[seed % 3])
        dt = 0.9 * cfl_max_dt(vgrid, params, sgrid)
        state = make_random_compatible_state(vgrid, sgrid, seed=200 + seed)
        nxt, _ = step(state, dt, vgrid, sgrid, params)
        subs = sub_methods(state, dt, vgrid, sgrid, params)
        scale = float(np.max(np.abs(nxt.f)))
        worst_rec = max(
            worst_rec, float(np.max(np.abs(recombine(subs, dt, params) - nxt.f))) / scale
        )
        base = weighted_l2_norm(state, vgrid, sgrid)
        for part in (subs.f_f, subs.f_g, subs.f_s):
            norm = weighted_l2_norm(make_state(part, state.u), vgrid, sgrid)
            worst_norm = max(worst_norm, norm / base)
    _criterion(
        "convex-decomposition",
        [
            (worst_rec <= 1e-14, f"recombination max rel err {worst_rec:.2e} <= 1e-14"),
            (
                worst_norm <= 1.0 + 1e-12,
                f"sub-method norm ratio max {worst_norm:.15f} <= 1+1e-12",
            ),
        ],
    )


def test_eigenstructure_and_riemann_invariants(params, vgrid):
    sgrid = SpatialGrid.from_length(32, 2.0 * math.pi)
    eig = eigen_structure(vgrid, params)
    ortho = eig.orthogonality_residual()
    annihilation = float(np.max(np.abs(eig.L[1:] @ eig.matrix(params))))
    # Perturbation scaled by sqrt(omega): the weighted variables (and so
    # the invariants) stay O(1), making the 1e-12 bound absolute as well
    # as relative.
    rng = np.random.default_rng(300)
    from ugks1d import init_nonequilibrium

    u = rng.uniform(-1.0, 1.0, size=sgrid.I)
    noise = rng.uniform(-1.0, 1.0, size=(vgrid.size, sgrid.I))
    p = np.sqrt(vgrid.weights)[:, None] * noise
    values = iter(u)
    state = init_nonequilibrium(lambda _x: float(next(values)), p, vgrid, sgrid)
    dt = 0.9 * cfl_max_dt(vgrid, params, sgrid)
    rep = verify_submethod_g_invariants(state, dt, vgrid, sgrid, params, eig)
    _criterion(
        "eigenstructure-riemann",
        [
            (ortho <= 1e-12, f"||LL^T - I||max {ortho:.2e} <= 1e-12"),
            (annihilation <= 1e-12, f"max |l_m^T A| {annihilation:.2e} <= 1e-12"),
            (
                rep.max_frozen_change <= 1e-12
                and rep.max_frozen_change <= 1e-12 * rep.frozen_scale,
                f"frozen invariant change {rep.max_frozen_change:.2e} <= 1e-12",
            ),
            (
                rep.momentum_mismatch <= 1e-12 * rep.momentum_scale,
                f"momentum scheme mismatch {rep.momentum_mismatch:.2e}",
            ),
        ],
    )


def test_von_neumann_formulas():
    etas = np.linspace(-0.5, 1.5, 65)
    xis = np.linspace(0.0, math.pi, 65)
    lam, mod2 = transport_amplification(etas[:, None], xis[None, :])
    agreement = float(np.max(np.abs(np.abs(lam) ** 2 - mod2)))
    worst = np.max(mod2, axis=1)
    inside = (etas >= 0.0) & (etas <= 1.0)
    iff_ok = bool(np.all(worst[inside] <= 1.0 + 1e-14) and np.all(worst[~inside] > 1.0))

    gap_checks = []
    for alpha in (0.5, 1.0, 2.0):
        E = critical_beta(alpha)
        stable = gap_supremum(E, alpha) <= 0.0 and gap_supremum(0.9 * E, alpha) <= 0.0
        unstable = gap_supremum(1.05 * E, alpha) > 0.0
        bisect_err = abs(find_critical_beta(alpha, tol=1e-6) - E)
        gap_checks.append(
            (
                stable and unstable and bisect_err <= 1e-6,
                f"alpha={alpha}: boundary err {bisect_err:.2e}",
            )
        )
    _criterion(
        "von-neumann-formulas",
        [
            (agreement <= 1e-14, f"closed vs complex route {agreement:.2e} <= 1e-14"),
            (iff_ok, "|lambda|<=1 iff eta in [0,1] on 65x65 lattice"),
            *gap_checks,
        ],
    )


def test_cfl_sharpness_demonstration(vgrid, sgrid):
    # Supercritical dt at large tau (nearly pure transport): an
    # alternating-sign (phase ~ pi) equilibrium profile must blow up.
    params = ModelParams(a=1.0, theta=1.0, tau=1e2)
    u0 = np.array([(-1.0) ** i for i in range(sgrid.I)], dtype=float)
    f0 = np.multiply.outer(vgrid.weights, u0)
    state = make_state(f0, u0)
    dt = 1.5 * cfl_max_dt(vgrid, params, sgrid)
    cfg = StepConfig(dt_override=dt)
    base = weighted_l2_norm(state, vgrid, sgrid)
    growth = 0.0
    with pytest.warns(Warning):
        for _ in range(200):
            state, _ = step(state, dt, vgrid, sgrid, params, cfg)
            growth = max(growth, weighted_l2_norm(state, vgrid, sgrid) / base)
            if growth > 10.0:
                break
    _criterion(
        "cfl-sharpness",
        [(growth > 10.0, f"norm growth {growth:.3e} > 10 within 200 steps")],
    )


def test_hydrodynamic_limit_convergence(vgrid):
    # KNOWN RED. The interface closure weights the interface distribution
    # by c_k / sqrt(a^2 + theta/2), so in the relaxation-dominated regime
    # (tau << dt) the macroscopic field advects at the effective speed
    # a^2 / sqrt(a^2 + theta/2) = 0.8165 a (measured 0.816510 at I = 256),
    # not at a.  Refining dx at fixed tau = 1e-6 therefore stalls at the
    # phase-offset plateau |2 sin((1 - 0.8165) a t / 2)| * sqrt(pi) and
    # the observed order collapses to ~0.  The criterion is asserted as
    # stated rather than weakened; see the project notes for the full
    # analysis.  (With tau ~ 1e-2 the refinement drives dt/tau -> 0, the
    # flux returns to plain upwind at speed a, and the same study passes
    # with finest-pair order ~0.89.)
    params = ModelParams(a=1.0, theta=1.0, tau=1e-6)
    amplitude, t_end, length = 1.0, 0.5, 2.0 * math.pi
    errors = []
    for I in (32, 64, 128, 256):
        sgrid = SpatialGrid.from_length(I, length)
        state = init_equilibrium(lambda x: amplitude * math.sin(x), vgrid, sgrid)
        final, _ = run(state, t_end, vgrid, sgrid, params, StepConfig())
        x = sgrid.cell_centers()
        decay = math.exp(-params.nu * t_end)
        exact = amplitude * decay * np.sin(x - params.a * t_end)
        errors.append(math.sqrt(sgrid.dx * float(np.sum((final.u - exact) ** 2))))
    orders = [math.log2(a / b) for a, b in zip(errors, errors[1:])]
    _criterion(
        "hydrodynamic-limit-convergence",
        [
            (
                orders[-1] >= 0.8,
                f"errors={[f'{e:.3e}' for e in errors]} finest order {orders[-1]:.3f} >= 0.8",
            )
        ],
    )


def test_hydrodynamic_limit_momentum_scheme(vgrid, sgrid):
    params = ModelParams(a=1.0, theta=1.0, tau=1e-10)
    state = init_equilibrium(lambda x: math.sin(x), vgrid, sgrid)
    dt = 0.9 * cfl_max_dt(vgrid, params, sgrid)
    subs = sub_methods(state, dt, vgrid, sgrid, params)
    F0 = vgrid.dc * np.sum(vgrid.nodes[:, None] * state.f, axis=0)
    F_pre = vgrid.dc * np.sum(vgrid.nodes[:, None] * subs.f_pre, axis=0)
    F_limit = momentum_limit_scheme(F0, dt, vgrid, sgrid, params)
    rel = float(np.max(np.abs(F_pre - F_limit)) / np.max(np.abs(F0)))
    _criterion(
        "hydrodynamic-limit-momentum",
        [(rel <= 1e-10, f"one-step momentum mismatch {rel:.2e} <= 1e-10")],
    )
