import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from sphere_poincare.eigensolver import block, gamma_numeric, min_eigenpair, numeric_minimizer
from sphere_poincare.sharp import equality_residual, gamma, gamma_plus
from sphere_poincare.spectral import norm_sq

FOUR_PI = 4.0 * math.pi


def test_block_degree1():
    blk = block(1, -2.5)
    assert_allclose(
        blk.matrix,
        [[4.0 - 2.5, -2.0 * math.sqrt(2.0)], [-2.0 * math.sqrt(2.0), 2.0]],
        rtol=1e-15,
    )
    assert blk.u3_eigenvalue == 2.0
    assert_allclose(np.trace(blk.matrix), 2 * 2.0 + 2.0 - 2.5, rtol=1e-15)


def test_block_degree0_degenerates_to_scalar():
    blk = block(0, 3.0)
    assert blk.matrix.shape == (1, 1)
    assert blk.matrix[0, 0] == 5.0
    with pytest.raises(ValueError):
        min_eigenpair(blk)


def test_block_degree2():
    blk = block(2, 0.0)
    assert_allclose(
        blk.matrix, [[8.0, -2.0 * math.sqrt(6.0)], [-2.0 * math.sqrt(6.0), 6.0]], rtol=1e-15
    )


def test_block_rejects_negative_degree():
    with pytest.raises(ValueError):
        block(-1, 0.0)


def test_min_eigenpair_degree1_matches_gamma_plus():
    for kappa in (-9.0, -4.0, -1.2, 0.0, 3.7, 42.0):
        value, vec = min_eigenpair(block(1, kappa))
        assert_allclose(value, gamma_plus(kappa), rtol=0, atol=1e-13)
        # residual of the eigen equation
        residual = block(1, kappa).matrix @ vec - value * vec
        assert np.max(np.abs(residual)) < 1e-12
        assert vec[0] >= 0.0


def test_min_eigenpair_boundary_eigenvector():
    value, vec = min_eigenpair(block(1, -4.0))
    assert_allclose(value, -2.0, rtol=0, atol=1e-14)
    assert_allclose(vec, [math.sqrt(2.0 / 3.0), math.sqrt(1.0 / 3.0)], rtol=0, atol=1e-14)
    # u2/u1 ratio matches the boundary mixing ratio sqrt(2)/2
    assert_allclose(vec[1] / vec[0], math.sqrt(2.0) / 2.0, rtol=0, atol=1e-14)


def test_min_eigenpair_degree2_stays_above_gamma():
    value, _ = min_eigenpair(block(2, 0.0))
    assert value > gamma(0.0)


def test_gamma_numeric_examples():
    value, winners = gamma_numeric(-8.0, 20)
    assert_allclose(value, -6.0, rtol=0, atol=1e-13)
    assert winners == ("n=0 scalar",)

    value, winners = gamma_numeric(6.0, 20)
    assert_allclose(value, 6.0 - 2.0 * math.sqrt(6.0), rtol=0, atol=1e-13)
    assert winners == ("n=1 block",)

    value, winners = gamma_numeric(-4.0, 20)
    assert_allclose(value, -2.0, rtol=0, atol=1e-12)
    assert set(winners) == {"n=0 scalar", "n=1 block"}


def test_gamma_numeric_monotone_in_cutoff():
    for kappa in (-17.0, -4.0, 2.5, 30.0):
        values = [gamma_numeric(kappa, n)[0] for n in (2, 5, 10, 20, 30)]
        assert all(b <= a + 1e-15 for a, b in zip(values, values[1:]))
        assert max(values) - min(values) < 1e-14


def test_gamma_numeric_rejects_small_cutoff():
    with pytest.raises(ValueError):
        gamma_numeric(0.0, 1)


def test_numeric_minimizer_below():
    coeffs = numeric_minimizer(-8.0)
    assert_allclose(coeffs[(1, 0, 0)], math.sqrt(FOUR_PI), rtol=1e-14)
    assert_allclose(norm_sq(coeffs), FOUR_PI, rtol=1e-14)
    assert np.max(np.abs(coeffs.data[1:])) == 0.0


def test_numeric_minimizer_above():
    coeffs = numeric_minimizer(6.0)
    assert abs(equality_residual(coeffs, 6.0)) < 1e-10
    assert coeffs[(1, 0, 0)] == 0.0
    # deterministic default direction: order j = 0 only
    assert coeffs[(1, 1, -1)] == 0.0 and coeffs[(1, 1, 1)] == 0.0
    assert coeffs[(1, 1, 0)] != 0.0


def test_numeric_minimizer_kappa0_magnitude():
    coeffs = numeric_minimizer(0.0)
    sigma_sq = sum(coeffs[(1, 1, j)] ** 2 for j in (-1, 0, 1))
    assert_allclose(sigma_sq, FOUR_PI / 3.0, rtol=0, atol=1e-12)


def test_numeric_minimizer_direction_spread(rng):
    direction = (1.0, -2.0, 2.0)
    coeffs = numeric_minimizer(6.0, direction=direction)
    sigma = np.array([coeffs[(1, 1, j)] for j in (-1, 0, 1)])
    unit = np.array(direction) / 3.0
    assert_allclose(sigma / np.linalg.norm(sigma), unit, rtol=0, atol=1e-14)
    assert_allclose(norm_sq(coeffs), FOUR_PI, rtol=1e-13)
    random_coeffs = numeric_minimizer(6.0, rng=rng)
    assert abs(equality_residual(random_coeffs, 6.0)) < 1e-10


def test_u3_channel_never_wins():
    for kappa in np.linspace(-50.0, 50.0, 101):
        _, winners = gamma_numeric(float(kappa), 30)
        assert not any(label.endswith("u3") for label in winners)


def test_argmin_degree_at_most_one():
    for kappa in np.linspace(-50.0, 50.0, 101):
        _, winners = gamma_numeric(float(kappa), 30)
        degrees = [int(label.split()[0].split("=")[1]) for label in winners]
        assert max(degrees) <= 1


def test_minimizer_sign_agreement():
    for kappa in np.linspace(-3.9, 50.0, 60):
        coeffs = numeric_minimizer(float(kappa))
        for j in (-1, 0, 1):
            u1, u2 = coeffs[(1, 1, j)], coeffs[(2, 1, j)]
            if abs(u1) > 1e-12 or abs(u2) > 1e-12:
                assert u1 * u2 > 0.0
