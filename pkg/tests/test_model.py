import math

import numpy as np
import pytest

from ugks1d import (
    ModelParams,
    QuadratureWarning,
    build_grid,
    equilibrium_projection,
    erf_unnormalized,
)

from reference import erf_by_quadrature

SQRT_PI = math.sqrt(math.pi)


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(a=0.0, theta=1.0, tau=1.0)
    with pytest.raises(ValueError):
        ModelParams(a=1.0, theta=-1.0, tau=1.0)
    with pytest.raises(ValueError):
        ModelParams(a=1.0, theta=1.0, tau=0.0)


def test_nu_is_always_recomputed():
    p = ModelParams(a=1.0, theta=3.0, tau=4.0)
    assert p.nu == 6.0
    assert ModelParams(a=2.0, theta=1e-4, tau=1e2).nu == 0.5 * 1e-4 * 1e2


def test_minimal_grid_nodes_and_weights():
    # K=1, coverage=1: dc = 1, nodes (0, 1, 2), Gaussian weights at offsets
    # 0 and +-1.
    grid = build_grid(ModelParams(a=1.0, theta=1.0, tau=1.0), K=1, coverage=1.0,
                      tolerance=1.0)
    assert grid.dc == 1.0
    assert np.array_equal(grid.nodes, np.array([0.0, 1.0, 2.0]))
    assert grid.weights[1] == pytest.approx(1.0 / SQRT_PI, rel=1e-15)
    assert grid.weights[0] == pytest.approx(math.exp(-1.0) / SQRT_PI, rel=1e-15)
    assert grid.weights[0] == grid.weights[2]


def test_default_grid_moment_defects(vgrid):
    assert all(d < 1e-12 for d in vgrid.moment_defects)


def test_default_grid_matches_quadrature_oracle(params, vgrid):
    # The lattice sum of the weights should match adaptive quadrature of
    # the same Gaussian over the whole line.
    from scipy.integrate import quad

    total, _ = quad(
        lambda c: math.exp(-((c - params.a) ** 2) / params.theta)
        / math.sqrt(params.theta * math.pi),
        -np.inf,
        np.inf,
    )
    assert vgrid.dc * np.sum(vgrid.weights) == pytest.approx(total, abs=1e-13)


def test_small_coverage_truncation_error():
    # Oracle: the K=6, coverage=3 lattice misses Gaussian tail mass at the
    # 1e-6 level (far above the 1e-12 tolerance), which is why the
    # default coverage is 6.
    with pytest.warns(QuadratureWarning):
        grid = build_grid(ModelParams(a=1.0, theta=1.0, tau=1.0), K=6, coverage=3.0)
    assert 1e-6 < grid.moment_defects[0] < 1e-4


def test_node_and_weight_symmetry(params):
    for K, cov in ((48, 6.0), (11, 4.5), (3, 2.0)):
        grid = build_grid(params, K=K, coverage=cov, tolerance=1.0)
        n = grid.size
        for j in range(n):
            assert grid.weights[j] == grid.weights[n - 1 - j]  # exact mirror
            assert grid.weights[j] > 0
            assert grid.nodes[j] + grid.nodes[n - 1 - j] == pytest.approx(
                2.0 * params.a, rel=1e-15
            )


def test_moment_defects_decrease_with_coverage(params):
    # Fixed dc/sqrt(theta) = 0.125; growing coverage only adds tail nodes.
    defects = []
    for cov in (3.0, 4.0, 5.0, 6.0):
        K = int(cov / 0.125)
        defects.append(build_grid(params, K=K, coverage=cov, tolerance=1.0).moment_defects)
    for m in range(3):
        for smaller, larger in zip(defects, defects[1:]):
            assert larger[m] <= smaller[m] + 1e-15


def test_build_grid_rejections(params):
    with pytest.raises(ValueError):
        build_grid(params, K=0)
    with pytest.raises(ValueError):
        build_grid(params, coverage=0.0)
    with pytest.raises(ValueError):
        build_grid(params, coverage=-2.0)


def test_renormalized_grid_zeroth_moment(params):
    grid = build_grid(params, K=16, coverage=4.0, renormalize=True, tolerance=1.0)
    assert abs(grid.dc * np.sum(grid.weights) - 1.0) < 5e-16
    assert grid.renormalized


def test_erf_trivial_and_oracle_values():
    assert erf_unnormalized(0.0) == 0.0
    # Frozen from the adaptive quadrature oracle of exp(-t^2).
    assert erf_unnormalized(1.0) == pytest.approx(0.7468241328124271, abs=1e-13)
    assert erf_unnormalized(100.0) == pytest.approx(0.8862269254527579, abs=1e-15)
    for x in (0.3, 0.5, 1.0, 2.0, 4.0):
        assert erf_unnormalized(x) == pytest.approx(erf_by_quadrature(x), abs=1e-12)


def test_erf_is_odd():
    for x in np.linspace(-6.0, 6.0, 25):
        assert abs(erf_unnormalized(-x) + erf_unnormalized(x)) < 1e-14


def test_erf_bounded_below_one():
    # The interface jump weight never reaches 1 (its supremum is
    # sqrt(pi)/2 ~ 0.886, attained only in the saturated-double limit),
    # so the CFL's second branch is always finite.
    for a, theta in ((0.1, 10.0), (1.0, 1.0), (5.0, 1e-4), (2.0, 0.5)):
        value = erf_unnormalized(a / math.sqrt(theta))
        assert 0.0 < value <= 0.5 * SQRT_PI
        assert value < 1.0


def test_equilibrium_projection(vgrid):
    assert np.array_equal(equilibrium_projection(0.0, vgrid), np.zeros(vgrid.size))
    assert np.array_equal(equilibrium_projection(1.0, vgrid), vgrid.weights)
    u = 3.25
    g = equilibrium_projection(u, vgrid)
    assert vgrid.dc * np.sum(g) == pytest.approx(u, abs=abs(u) * 1e-12 + 1e-15)
    field = equilibrium_projection(np.array([1.0, 2.0]), vgrid)
    assert field.shape == (vgrid.size, 2)
    assert np.array_equal(field[:, 0], vgrid.weights)
