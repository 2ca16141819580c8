"""Poincare-ball primitives: distances, Busemann coordinates, Mobius maps.

All functions operate on float64 arrays whose last axis holds coordinates
and broadcast over any leading axes.
"""

from __future__ import annotations

import numpy as np

from ..errors import (
    BoundaryProximityError,
    DegenerateDirectionError,
    PointValidationError,
)

# Distance formulas divide by 1 - |x|^2; below this gap they lose every
# significant digit, so such points are rejected instead of clamped.
BOUNDARY_EPS = 1e-15
IDEAL_NORM_TOL = 1e-12


def _sq_norm(x, axis=-1, keepdims=False):
    return np.sum(x * x, axis=axis, keepdims=keepdims)


def _offender(mask) -> str:
    idx = np.argwhere(mask)
    if idx.size == 0:
        return "input"
    return "index " + ",".join(str(i) for i in idx[0].tolist())


def check_ball(x, name: str = "point") -> np.ndarray:
    """Validate ball coordinates; returns a float64 array of shape (..., d)."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        raise PointValidationError(f"{name}: expected a coordinate vector, got a scalar")
    if not np.all(np.isfinite(x)):
        raise PointValidationError(f"{name}: coordinates must be finite")
    gap = 1.0 - _sq_norm(x)
    if np.any(gap <= 0.0):
        raise PointValidationError(
            f"{name}: Euclidean norm must be strictly below 1 ({_offender(gap <= 0.0)})"
        )
    if np.any(gap < BOUNDARY_EPS):
        raise BoundaryProximityError(
            f"{name}: 1 - |x|^2 underflows {BOUNDARY_EPS:g} ({_offender(gap < BOUNDARY_EPS)})"
        )
    return x


def check_ideal(p, name: str = "ideal point") -> np.ndarray:
    """Validate a boundary direction (unit vector within 1e-12)."""
    p = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(p)):
        raise PointValidationError(f"{name}: coordinates must be finite")
    err = np.abs(np.sqrt(_sq_norm(p)) - 1.0)
    if np.any(err > IDEAL_NORM_TOL):
        raise PointValidationError(
            f"{name}: must have unit norm within {IDEAL_NORM_TOL:g} ({_offender(err > IDEAL_NORM_TOL)})"
        )
    return p


def boundary_gap(x, name: str = "point") -> np.ndarray:
    """1 - |x|^2 with the boundary-proximity guard applied."""
    gap = 1.0 - _sq_norm(np.asarray(x, dtype=float))
    if np.any(gap < BOUNDARY_EPS):
        raise BoundaryProximityError(
            f"{name}: 1 - |x|^2 underflows {BOUNDARY_EPS:g} ({_offender(gap < BOUNDARY_EPS)})"
        )
    return gap


def distance(x, y) -> np.ndarray:
    """Hyperbolic distance between ball points (broadcasting)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    gx = boundary_gap(x, "x")
    gy = boundary_gap(y, "y")
    arg = 1.0 + 2.0 * _sq_norm(x - y) / (gx * gy)
    return np.arccosh(np.maximum(arg, 1.0))


def distance_to_origin(x) -> np.ndarray:
    """d(0, x) = 2 artanh |x|."""
    x = np.asarray(x, dtype=float)
    boundary_gap(x, "x")
    return 2.0 * np.arctanh(np.sqrt(_sq_norm(x)))


def pairwise_distances(X, Y=None) -> np.ndarray:
    """Distance matrix between rows of X and rows of Y (default X)."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    gx = boundary_gap(X, "X")
    if Y is None:
        Y, gy = X, gx
    else:
        Y = np.atleast_2d(np.asarray(Y, dtype=float))
        gy = boundary_gap(Y, "Y")
    sq = _sq_norm(X)[:, None] - 2.0 * X @ Y.T + _sq_norm(Y)[None, :]
    arg = 1.0 + 2.0 * np.maximum(sq, 0.0) / (gx[:, None] * gy[None, :])
    D = np.arccosh(np.maximum(arg, 1.0))
    if Y is X:
        D = 0.5 * (D + D.T)
        np.fill_diagonal(D, 0.0)
    return D


def busemann(p, x) -> np.ndarray:
    """Busemann coordinate of x toward the ideal point p.

    B_p(x) = log(|p - x|^2 / (1 - |x|^2)); decreases at unit rate along
    the unit-speed geodesic from any point toward p.
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    gap = boundary_gap(x, "x")
    return np.log(_sq_norm(p - x)) - np.log(gap)


def busemann_coordinates(P, X) -> np.ndarray:
    """Matrix of Busemann coordinates: entry (i, j) is B_{P[j]}(X[i])."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    X = np.atleast_2d(np.asarray(X, dtype=float))
    return busemann(P[None, :, :], X[:, None, :])


def mobius_add(x, y) -> np.ndarray:
    """Mobius addition x (+) y on the unit ball."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xy = np.sum(x * y, axis=-1, keepdims=True)
    nx = _sq_norm(x, keepdims=True)
    ny = _sq_norm(y, keepdims=True)
    num = (1.0 + 2.0 * xy + ny) * x + (1.0 - nx) * y
    den = 1.0 + 2.0 * xy + nx * ny
    return num / den


def expmap(x, v) -> np.ndarray:
    """Riemannian exponential map at x of a tangent vector v.

    Tangent vectors use the conformal-metric convention: their Riemannian
    norm is lambda_x |v| with lambda_x = 2 / (1 - |x|^2).
    """
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    nv = np.sqrt(_sq_norm(v, keepdims=True))
    lam = 2.0 / boundary_gap(x, "x")[..., None]
    scale = np.where(nv > 0.0, np.tanh(np.minimum(lam * nv / 2.0, 350.0)) / np.where(nv > 0.0, nv, 1.0), 0.0)
    return mobius_add(x, scale * v)


def logmap(x, y) -> np.ndarray:
    """Riemannian logarithm map at x of the point y (inverse of expmap)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = mobius_add(-x, y)
    nw = np.sqrt(_sq_norm(w, keepdims=True))
    lam = 2.0 / boundary_gap(x, "x")[..., None]
    scale = np.where(nw > 0.0, 2.0 / lam * np.arctanh(np.minimum(nw, 1.0 - 1e-16)) / np.where(nw > 0.0, nw, 1.0), 0.0)
    return scale * w


def log_origin(x, legacy: bool = False) -> np.ndarray:
    """Logarithm map at the origin.

    Default convention scales so |log_origin(x)| = d(0, x) = 2 artanh |x|;
    `legacy=True` drops the factor 2 (plain arctanh(|x|) radial stretch),
    kept for comparability with tangent-PCA variants using that form.
    """
    x = np.asarray(x, dtype=float)
    boundary_gap(x, "x")
    r = np.sqrt(_sq_norm(x, keepdims=True))
    fac = np.where(r > 0.0, np.arctanh(r) / np.where(r > 0.0, r, 1.0), 1.0)
    if not legacy:
        fac = 2.0 * fac
    return fac * x


def exp_origin(v, legacy: bool = False) -> np.ndarray:
    """Exponential map at the origin; inverse of :func:`log_origin`."""
    v = np.asarray(v, dtype=float)
    if not np.all(np.isfinite(v)):
        raise PointValidationError("tangent vector: coordinates must be finite")
    n = np.sqrt(_sq_norm(v, keepdims=True))
    arg = n if legacy else n / 2.0
    fac = np.where(n > 0.0, np.tanh(arg) / np.where(n > 0.0, n, 1.0), 0.0)
    return fac * v


def geodesic_midpoint(x, y) -> np.ndarray:
    """Hyperbolic midpoint of the geodesic segment from x to y."""
    return expmap(x, 0.5 * logmap(x, y))


def geodesic_toward_ideal(x, p, t) -> np.ndarray:
    """Point at arclength t on the unit-speed geodesic from x toward ideal p.

    Negative t walks away from p along the same geodesic.
    """
    x = np.asarray(x, dtype=float)
    p = check_ideal(p)
    u = mobius_add(-x, p)  # unit direction: Mobius translate of an ideal point
    nu = np.sqrt(_sq_norm(u, keepdims=True))
    if np.any(nu < 1e-14):
        raise DegenerateDirectionError("geodesic direction collapsed; x conflicts with p")
    t = np.asarray(t, dtype=float)[..., None]
    return mobius_add(x, np.tanh(t / 2.0) * (u / nu))


def reflect_to_origin(mu, x) -> np.ndarray:
    """Hyperbolic reflection (sphere inversion) sending mu to the origin.

    The map is an involution and a hyperbolic isometry. Written in a
    cancellation-free form so it stays accurate for small |mu|, where it
    degrades to the Euclidean reflection through the hyperplane normal
    to mu. For mu = 0 it is the identity.
    """
    mu = np.asarray(mu, dtype=float)
    x = np.asarray(x, dtype=float)
    m2 = float(_sq_norm(mu))
    if m2 < 1e-24:
        return x.copy()
    mu_hat = mu / np.sqrt(m2)
    nx = _sq_norm(x, keepdims=True)
    xdm = np.sum(x * mu, axis=-1, keepdims=True)
    xdh = np.sum(x * mu_hat, axis=-1, keepdims=True)
    num = (1.0 + nx) * mu - 2.0 * xdh * mu_hat + (1.0 - m2) * x
    den = 1.0 - 2.0 * xdm + m2 * nx
    return num / den
