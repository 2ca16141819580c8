import numpy as np
import pytest

from horopca.geometry import poincare


def random_ball_points(rng, n, d, spread=1.0):
    """Random ball points via tangent Gaussians at the origin."""
    return poincare.exp_origin(rng.standard_normal((n, d)) * spread)


def random_ideal(rng, d):
    p = rng.standard_normal(d)
    return p / np.linalg.norm(p)


def random_ideal_set(rng, k, d, min_sv=1e-3):
    """k well-separated ideal directions (resampled until non-degenerate)."""
    while True:
        P = rng.standard_normal((k, d))
        P /= np.linalg.norm(P, axis=1, keepdims=True)
        lifts = np.concatenate([np.ones((k, 1)), P], axis=1)
        lifts /= np.linalg.norm(lifts, axis=1, keepdims=True)
        if np.linalg.svd(lifts, compute_uv=False)[-1] >= min_sv:
            return P


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
