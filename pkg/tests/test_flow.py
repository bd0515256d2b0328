import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sphere_poincare.flow import (
    distance_to_normals,
    el_residual,
    gradient_flow,
    normalize_field,
    project_tangent,
    saturated_energy,
    second_variation_normal,
    write_trajectory_csv,
)
from sphere_poincare.grid import (
    SampledVectorField,
    build_grid,
    normal_field,
    verification_grid,
)
from sphere_poincare.vsh import CoeffSet, random_coeffs, synthesize

FOUR_PI = 4.0 * math.pi


def _tangential_bump(grid, scale=1.0):
    c = CoeffSet(1)
    c[(2, 1, 0)] = scale * math.sqrt(FOUR_PI)
    return synthesize(c, grid)


def _perturbed_normal(grid, eps):
    n = normal_field(grid)
    bump = _tangential_bump(grid)
    return normalize_field(
        SampledVectorField(grid=grid, values=n.values + eps * bump.values)
    )


@pytest.mark.parametrize("kappa", [-8.0, -4.0, 0.0, 6.0])
@pytest.mark.parametrize("sign", [1.0, -1.0])
def test_normal_states_are_stationary(kappa, sign):
    grid = build_grid(8, 17)
    n = normal_field(grid)
    u = SampledVectorField(grid=grid, values=sign * n.values)
    residual = el_residual(u, kappa, 2)
    assert np.max(np.linalg.norm(residual.values, axis=-1)) < 1e-9


def test_constant_field_not_stationary():
    grid = build_grid(8, 17)
    values = np.zeros((8, 17, 3))
    values[..., 2] = 1.0
    u = SampledVectorField(grid=grid, values=values)
    residual = el_residual(u, 1.0, 4)
    assert np.max(np.linalg.norm(residual.values, axis=-1)) > 1e-2


def test_el_residual_rejects_non_unit():
    grid = build_grid(6, 13)
    n = normal_field(grid)
    u = SampledVectorField(grid=grid, values=1.5 * n.values)
    with pytest.raises(ValueError):
        el_residual(u, 0.0, 2)


@pytest.mark.parametrize("kappa", [-2.0, 1.0, 6.0])
def test_second_variation_closed_value(kappa):
    grid = verification_grid(4)
    v = _tangential_bump(grid)
    assert_allclose(
        second_variation_normal(v, kappa), -FOUR_PI * kappa, rtol=0, atol=1e-8
    )


def test_second_variation_zero_field():
    grid = verification_grid(2)
    v = SampledVectorField(grid=grid, values=np.zeros((grid.n_t, grid.n_phi, 3)))
    assert second_variation_normal(v, 3.0) == 0.0


def test_second_variation_rejects_radial_input():
    grid = verification_grid(2)
    with pytest.raises(ValueError):
        second_variation_normal(normal_field(grid), 0.0)


def test_second_variation_negative_kappa_bound(rng):
    # coercivity bound for stabilizing weights
    grid = verification_grid(4)
    for _ in range(10):
        coeffs = random_coeffs(3, rng, families=(2, 3))
        v = synthesize(coeffs, grid)
        norm = float(np.sum(grid.weights * np.sum(v.values**2, axis=-1)))
        for kappa in (-7.0, -2.5, -0.1):
            assert second_variation_normal(v, kappa) >= -kappa * norm - 1e-8


def test_second_variation_matches_quadratic_coefficient(rng):
    # The saturated energy expands as F(eps) = F(0) + eps^2 * Q + O(eps^4)
    # along normalize(n + eps v); Q is what second_variation_normal returns.
    grid = verification_grid(8)
    n = normal_field(grid)
    eps = 1e-4
    for _ in range(10):
        coeffs = random_coeffs(3, rng, families=(2, 3), norm_sq=FOUR_PI)
        v = synthesize(coeffs, grid)
        kappa = float(rng.uniform(-6.0, 6.0))
        expected = second_variation_normal(v, kappa, band_limit=8)

        def saturated(e):
            u = normalize_field(
                SampledVectorField(grid=grid, values=n.values + e * v.values)
            )
            return saturated_energy(u, kappa, 8)

        quad_coeff = (saturated(eps) - 2.0 * saturated(0.0) + saturated(-eps)) / (
            2.0 * eps * eps
        )
        assert abs(quad_coeff - expected) <= 1e-3 * max(1.0, abs(expected))


def test_project_tangent_properties(rng):
    grid = build_grid(6, 13)
    u = normal_field(grid)
    assert np.max(np.abs(project_tangent(u, u).values)) < 1e-15
    w_values = rng.standard_normal((6, 13, 3))
    w = SampledVectorField(grid=grid, values=w_values)
    once = project_tangent(u, w)
    twice = project_tangent(u, once)
    assert np.max(np.abs(once.values - twice.values)) < 1e-14
    tangential = _tangential_bump(grid)
    assert np.max(np.abs(project_tangent(u, tangential).values - tangential.values)) < 1e-13


def test_flow_stationary_at_normal():
    grid = verification_grid(4)
    n = normal_field(grid)
    result = gradient_flow(n, kappa=2.0, dt=0.02, steps=100, band_limit=4, record_every=10)
    assert result.max_distance <= 1e-9


def test_flow_returns_for_negative_kappa():
    grid = verification_grid(4)
    u0 = _perturbed_normal(grid, 0.05)
    result = gradient_flow(u0, kappa=-1.0, dt=0.02, steps=500, band_limit=4, record_every=25)
    assert result.final_distance <= 1e-3
    energies = [r.energy for r in result.records]
    assert all(b <= a + 1e-10 for a, b in zip(energies, energies[1:]))


def test_flow_escapes_for_positive_kappa():
    grid = verification_grid(4)
    u0 = _perturbed_normal(grid, 0.05)
    result = gradient_flow(u0, kappa=1.0, dt=0.02, steps=600, band_limit=4, record_every=25)
    assert result.final_distance > 0.5
    energies = [r.energy for r in result.records]
    assert all(b <= a + 1e-10 for a, b in zip(energies, energies[1:]))


def test_flow_keeps_unit_norm():
    grid = verification_grid(4)
    u0 = _perturbed_normal(grid, 0.1)
    result = gradient_flow(u0, kappa=-2.0, dt=0.01, steps=50, band_limit=4)
    norms = np.linalg.norm(result.state.field.values, axis=-1)
    assert np.max(np.abs(norms - 1.0)) <= 1e-12


def test_flow_rejects_unstable_dt():
    grid = verification_grid(4)
    u0 = normal_field(grid)
    with pytest.raises(ValueError):
        gradient_flow(u0, kappa=0.0, dt=0.06, steps=10, band_limit=4)


def test_flow_rejects_non_unit_start():
    grid = verification_grid(4)
    n = normal_field(grid)
    bad = SampledVectorField(grid=grid, values=2.0 * n.values)
    with pytest.raises(ValueError):
        gradient_flow(bad, kappa=0.0, dt=0.01, steps=10, band_limit=4)


def test_distance_to_normals():
    grid = build_grid(6, 13)
    n = normal_field(grid)
    d_plus, d_minus = distance_to_normals(n)
    assert d_plus < 1e-13
    assert_allclose(d_minus, 2.0, rtol=0, atol=1e-12)


def test_trajectory_csv(tmp_path):
    grid = verification_grid(4)
    u0 = _perturbed_normal(grid, 0.05)
    result = gradient_flow(u0, kappa=-1.0, dt=0.02, steps=40, band_limit=4, record_every=10)
    path = tmp_path / "traj.csv"
    write_trajectory_csv(result, path)
    lines = path.read_text().strip().split("\n")
    assert lines[0] == "step,time,energy,dist_to_plus_n,dist_to_minus_n,residual_max"
    assert len(lines) == 1 + len(result.records)
    last = lines[-1].split(",")
    assert int(last[0]) == 40
    assert_allclose(float(last[1]), 0.8, rtol=1e-12)
