"""Hyperboloid-model primitives over the Minkowski bilinear form.

Vectors live in R^{1,d} with the time coordinate first. The bilinear form
is B((t, x), (u, y)) = -t u + x . y; hyperboloid points satisfy
B(x, x) = -1 with positive time coordinate (future-pointing).
"""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateDirectionError, PointValidationError
from . import poincare

HYPERBOLOID_TOL = 1e-9
LIGHTLIKE_TOL = 1e-12


def bilinear(u, v) -> np.ndarray:
    """Minkowski pairing of vectors (broadcasting over leading axes)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return np.sum(u[..., 1:] * v[..., 1:], axis=-1) - u[..., 0] * v[..., 0]


def gram(U, V=None) -> np.ndarray:
    """Matrix of pairings between rows of U and rows of V (default U)."""
    U = np.atleast_2d(np.asarray(U, dtype=float))
    V = U if V is None else np.atleast_2d(np.asarray(V, dtype=float))
    return U[:, 1:] @ V[:, 1:].T - np.outer(U[:, 0], V[:, 0])


def apply_form(v) -> np.ndarray:
    """B applied as a matrix: flips the sign of the time coordinate."""
    v = np.asarray(v, dtype=float).copy()
    v[..., 0] = -v[..., 0]
    return v


def check_hyperboloid(x, name: str = "point") -> np.ndarray:
    """Validate hyperboloid coordinates (unit negative norm, future-pointing)."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise PointValidationError(f"{name}: coordinates must be finite")
    err = np.abs(bilinear(x, x) + 1.0)
    if np.any(err > HYPERBOLOID_TOL):
        raise PointValidationError(
            f"{name}: Minkowski norm must be -1 within {HYPERBOLOID_TOL:g} "
            f"(max deviation {float(np.max(err)):.3e})"
        )
    if np.any(x[..., 0] <= 0.0):
        raise PointValidationError(f"{name}: time coordinate must be positive")
    return x


def check_tangent(base, direction, name: str = "tangent") -> None:
    """Require B(base, direction) = 0 within tolerance."""
    err = np.abs(bilinear(base, direction))
    if np.any(err > HYPERBOLOID_TOL):
        raise PointValidationError(
            f"{name}: not tangent at base (|B(base, dir)| up to {float(np.max(err)):.3e})"
        )


def to_hyperboloid(x) -> np.ndarray:
    """Lift ball coordinates to the hyperboloid: (1 + |y|^2, 2y) / (1 - |y|^2)."""
    x = np.asarray(x, dtype=float)
    gap = poincare.boundary_gap(x, "point")[..., None]
    sq = 1.0 - gap
    out = np.concatenate([1.0 + sq, 2.0 * x], axis=-1)
    return out / gap


def to_poincare(x) -> np.ndarray:
    """Project hyperboloid coordinates back to the ball: x_i / (1 + t)."""
    x = np.asarray(x, dtype=float)
    return x[..., 1:] / (1.0 + x[..., 0])[..., None]


def ideal_to_lightlike(p) -> np.ndarray:
    """Light-like representative (1, p) of a boundary direction."""
    p = poincare.check_ideal(p)
    return np.concatenate([np.ones(p.shape[:-1] + (1,)), p], axis=-1)


def lightlike_to_ideal(q) -> np.ndarray:
    """Boundary direction of a future-pointing light-like vector."""
    q = np.asarray(q, dtype=float)
    if np.any(q[..., 0] <= 0.0):
        raise PointValidationError("light-like vector must be future-pointing")
    err = np.abs(bilinear(q, q))
    scale = np.maximum(q[..., 0] ** 2, 1.0)
    if np.any(err > LIGHTLIKE_TOL * scale):
        raise PointValidationError("vector is not light-like")
    return q[..., 1:] / q[..., 0][..., None]


def distance(x, y) -> np.ndarray:
    """Hyperbolic distance on the hyperboloid: arccosh(-B(x, y))."""
    return np.arccosh(np.maximum(-bilinear(x, y), 1.0))


def exp_map(base, direction, t) -> np.ndarray:
    """Walk distance t >= 0 from a hyperboloid point along a tangent direction.

    The direction must be space-like (B(u, u) > 0) and tangent at the base;
    it is normalized internally, so only its ray matters.
    """
    base = np.asarray(base, dtype=float)
    u = np.asarray(direction, dtype=float)
    sq = bilinear(u, u)
    if np.any(sq <= 1e-30):
        raise DegenerateDirectionError("exp_map direction must be space-like and nonzero")
    u = u / np.sqrt(sq)[..., None]
    t = np.asarray(t, dtype=float)[..., None]
    return np.cosh(t) * base + np.sinh(t) * u


def busemann(q, x) -> np.ndarray:
    """Busemann coordinate in hyperboloid form: log(-B(x, q)) for light-like q."""
    return np.log(-bilinear(x, q))
