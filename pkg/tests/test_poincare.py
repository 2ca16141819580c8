import numpy as np
import pytest

from horopca.errors import BoundaryProximityError, PointValidationError
from horopca.geometry import poincare

from conftest import random_ball_points, random_ideal

LN3 = np.log(3.0)


def test_distance_identity():
    assert poincare.distance(np.zeros(2), np.zeros(2)) == 0.0


def test_distance_radial_closed_form():
    # d(0, x) = 2 artanh |x|
    d = poincare.distance(np.zeros(2), np.array([0.5, 0.0]))
    assert abs(d - LN3) < 1e-12


def test_distance_diameter_additivity():
    d = poincare.distance(np.array([0.5, 0.0]), np.array([-0.5, 0.0]))
    assert abs(d - 2 * LN3) < 1e-12
    # cross-check through the cartesian formula: arccosh(41/9)
    assert abs(d - np.arccosh(41.0 / 9.0)) < 1e-12


def test_distance_symmetry_and_positivity(rng):
    X = random_ball_points(rng, 30, 3)
    Y = random_ball_points(rng, 30, 3)
    dxy = poincare.distance(X, Y)
    dyx = poincare.distance(Y, X)
    assert np.allclose(dxy, dyx, atol=1e-12)
    assert np.all(dxy >= 0.0)


def test_distance_boundary_guard():
    near = np.array([1.0 - 1e-17, 0.0])
    with pytest.raises(BoundaryProximityError):
        poincare.distance(near, np.zeros(2))


def test_check_ball_rejects_norm_and_nan():
    with pytest.raises(PointValidationError):
        poincare.check_ball(np.array([1.0, 0.0]))
    with pytest.raises(PointValidationError):
        poincare.check_ball(np.array([np.nan, 0.0]))


def test_triangle_inequality(rng):
    for _ in range(200):
        x, y, z = random_ball_points(rng, 3, 4, spread=1.5)
        assert poincare.distance(x, z) <= poincare.distance(x, y) + poincare.distance(y, z) + 1e-9


def test_busemann_at_origin(rng):
    for _ in range(10):
        p = random_ideal(rng, 3)
        assert abs(poincare.busemann(p, np.zeros(3))) < 1e-12


def test_busemann_closed_values():
    p = np.array([1.0, 0.0])
    assert abs(poincare.busemann(p, np.array([0.5, 0.0])) + LN3) < 1e-12
    assert abs(poincare.busemann(p, np.array([-0.5, 0.0])) - LN3) < 1e-12


def test_busemann_unit_rate_along_geodesic(rng):
    # B_p(gamma(t)) = B_p(gamma(0)) - t along unit-speed geodesics toward p
    for _ in range(20):
        p = random_ideal(rng, 3)
        x = random_ball_points(rng, 1, 3)[0]
        b0 = poincare.busemann(p, x)
        for t in (0.3, 1.0, 2.5):
            gt = poincare.geodesic_toward_ideal(x, p, t)
            assert abs(poincare.busemann(p, gt) - (b0 - t)) < 1e-8


def test_busemann_lipschitz(rng):
    for _ in range(200):
        p = random_ideal(rng, 4)
        x, y = random_ball_points(rng, 2, 4, spread=1.5)
        lhs = abs(poincare.busemann(p, x) - poincare.busemann(p, y))
        assert lhs <= poincare.distance(x, y) + 1e-9


def test_log_origin_conventions():
    x = np.array([0.5, 0.0])
    assert np.allclose(poincare.log_origin(x), [LN3, 0.0], atol=1e-12)
    assert np.allclose(poincare.log_origin(x, legacy=True), [np.arctanh(0.5), 0.0], atol=1e-12)
    assert np.allclose(poincare.log_origin(np.zeros(2)), np.zeros(2))


def test_exp_origin_conventions():
    assert np.allclose(poincare.exp_origin(np.array([LN3, 0.0])), [0.5, 0.0], atol=1e-12)
    assert np.allclose(poincare.exp_origin(np.zeros(3)), np.zeros(3))


def test_log_exp_round_trip(rng):
    for legacy in (False, True):
        v = rng.standard_normal((50, 3))
        v *= (6.0 * rng.random((50, 1))) / np.linalg.norm(v, axis=1, keepdims=True)
        x = poincare.exp_origin(v, legacy=legacy)
        assert np.allclose(poincare.log_origin(x, legacy=legacy), v, atol=1e-12)
    X = random_ball_points(rng, 50, 3)
    assert np.allclose(poincare.exp_origin(poincare.log_origin(X)), X, atol=1e-12)


def test_log_origin_norm_is_distance(rng):
    X = random_ball_points(rng, 40, 3)
    norms = np.linalg.norm(poincare.log_origin(X), axis=1)
    assert np.allclose(norms, poincare.distance(np.zeros(3), X), atol=1e-10)


def test_mobius_log_exp_inverse(rng):
    X = random_ball_points(rng, 20, 3, spread=0.8)
    Y = random_ball_points(rng, 20, 3, spread=0.8)
    back = poincare.expmap(X, poincare.logmap(X, Y))
    assert np.allclose(back, Y, atol=1e-10)


def test_geodesic_midpoint(rng):
    for _ in range(20):
        x, y = random_ball_points(rng, 2, 3)
        m = poincare.geodesic_midpoint(x, y)
        dm = poincare.distance(x, m) + poincare.distance(m, y)
        assert abs(dm - poincare.distance(x, y)) < 1e-9
        assert abs(poincare.distance(x, m) - poincare.distance(m, y)) < 1e-9


def test_pairwise_distances_matches_pointwise(rng):
    X = random_ball_points(rng, 15, 3)
    D = poincare.pairwise_distances(X)
    assert np.allclose(D, D.T)
    assert np.all(np.diag(D) == 0.0)
    for i in (0, 7, 14):
        for j in (3, 9):
            assert abs(D[i, j] - poincare.distance(X[i], X[j])) < 1e-12


def test_reflect_to_origin_is_isometry(rng):
    X = random_ball_points(rng, 25, 3)
    mu = random_ball_points(rng, 1, 3, spread=0.5)[0]
    Y = poincare.reflect_to_origin(mu, X)
    assert np.allclose(
        poincare.pairwise_distances(X), poincare.pairwise_distances(Y), atol=1e-9
    )
    # involution and mu -> 0
    assert np.allclose(poincare.reflect_to_origin(mu, Y), X, atol=1e-10)
    assert np.linalg.norm(poincare.reflect_to_origin(mu, mu)) < 1e-12


def test_reflect_to_origin_small_mu_stable(rng):
    X = random_ball_points(rng, 10, 3)
    mu = np.array([1e-9, -2e-9, 5e-10])
    Y = poincare.reflect_to_origin(mu, X)
    assert np.allclose(
        poincare.pairwise_distances(X), poincare.pairwise_distances(Y), atol=1e-9
    )
    assert np.linalg.norm(poincare.reflect_to_origin(mu, mu)) < 1e-12
