"""Intrinsic statistics on the Poincare ball.

Frechet mean and variance, the pairwise distance-based variance used as
the reduction objective, isometric centering, and average distortion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneratePairError, NonConvergenceError
from .geometry import poincare


@dataclass(frozen=True)
class FrechetResult:
    """Outcome of the Frechet-mean solver."""

    mean: np.ndarray
    variance: float
    iterations: int
    converged: bool
    gradient_norm: float
    objective_trace: tuple = ()


def _objective(X, mu) -> float:
    return float(np.sum(poincare.distance(X, mu[None, :]) ** 2))


def frechet_mean(X, tol: float = 1e-10, max_iter: int = 2000, step: float = 0.2) -> FrechetResult:
    """Minimize the summed squared distance by Riemannian gradient descent.

    Deterministic: starts from exp_origin of the average log_origin image.
    The step is halved whenever it would increase the objective, so the
    objective is non-increasing across accepted iterations. Convergence is
    declared on the Riemannian norm of the mean-objective gradient.
    """
    X = poincare.check_ball(np.atleast_2d(np.asarray(X, dtype=float)), "dataset")
    n = X.shape[0]
    mu = poincare.exp_origin(np.mean(poincare.log_origin(X), axis=0))
    if n == 1:
        return FrechetResult(X[0].copy(), 0.0, 0, True, 0.0)

    obj = _objective(X, mu)
    trace = [obj]
    lr = step
    grad_norm = np.inf
    iterations = 0
    # Acceptance allows rounding noise: near the optimum the true decrease
    # drops below one ulp of the objective long before the gradient floor.
    noise = 1e-12 * max(1.0, obj)
    for iterations in range(1, max_iter + 1):
        tangent_mean = np.mean(poincare.logmap(mu[None, :], X), axis=0)
        lam = 2.0 / (1.0 - float(np.sum(mu * mu)))
        # Riemannian gradient of (1/n) sum d^2 is -2 * tangent_mean.
        grad_norm = 2.0 * lam * float(np.linalg.norm(tangent_mean))
        if grad_norm <= tol:
            return FrechetResult(
                mu, _frechet_variance_at(X, mu), iterations - 1, True, grad_norm, tuple(trace)
            )
        accepted = False
        for _ in range(40):
            cand = poincare.expmap(mu, lr * tangent_mean)
            cand_obj = _objective(X, cand)
            if np.isfinite(cand_obj) and cand_obj <= obj + noise:
                mu, obj = cand, min(obj, cand_obj)
                trace.append(obj)
                accepted = True
                break
            lr /= 2.0
        if not accepted:
            break
        lr = min(step, lr * 1.5)
    converged = grad_norm <= tol
    return FrechetResult(
        mu, _frechet_variance_at(X, mu), iterations, converged, grad_norm, tuple(trace)
    )


def _frechet_variance_at(X, mu) -> float:
    return float(np.mean(poincare.distance(X, mu[None, :]) ** 2))


def frechet_variance(X, **solver_kwargs) -> float:
    """Mean squared distance to the Frechet mean."""
    result = frechet_mean(X, **solver_kwargs)
    return result.variance


def distance_variance(X) -> float:
    """Distance-based variance: mean of all n^2 squared pairwise distances.

    Includes the zero diagonal terms; in the flat limit this equals twice
    the classical Euclidean variance of the tangent images.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    D = poincare.pairwise_distances(X)
    return float(np.mean(D * D))


@dataclass
class CenteringIsometry:
    """Composition of hyperbolic reflections, each sending one mean to 0.

    Every constituent reflection is an involution, so the inverse applies
    them in reverse order.
    """

    reflection_points: list = field(default_factory=list)

    def apply(self, X) -> np.ndarray:
        out = np.asarray(X, dtype=float)
        for mu in self.reflection_points:
            out = poincare.reflect_to_origin(mu, out)
        return out

    def invert(self, X) -> np.ndarray:
        out = np.asarray(X, dtype=float)
        for mu in reversed(self.reflection_points):
            out = poincare.reflect_to_origin(mu, out)
        return out

    @property
    def is_identity(self) -> bool:
        return not self.reflection_points


def center(X, tol: float = 1e-7, max_rounds: int = 4, **solver_kwargs):
    """Move the Frechet mean to the origin by an isometric reflection.

    Returns (centered points, CenteringIsometry); the isometry can be
    applied verbatim to held-out points. Raises NonConvergenceError when
    the mean solver fails.
    """
    X = poincare.check_ball(np.atleast_2d(np.asarray(X, dtype=float)), "dataset")
    isometry = CenteringIsometry()
    out = X
    for _ in range(max_rounds):
        result = frechet_mean(out, **solver_kwargs)
        if not result.converged:
            raise NonConvergenceError(
                f"Frechet mean did not converge (gradient norm {result.gradient_norm:.3e})"
            )
        if float(np.linalg.norm(result.mean)) <= tol:
            return out, isometry
        isometry.reflection_points.append(result.mean.copy())
        out = poincare.reflect_to_origin(result.mean, out)
    return out, isometry


def average_distortion(X, Y) -> float:
    """Mean relative change of pairwise distances from X to its image Y.

    Pairs are matched by row index; duplicate rows of X are rejected
    because their zero distance makes the relative error undefined.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape[0] != Y.shape[0] or X.shape[0] < 2:
        raise ValueError("average_distortion needs two equally sized datasets with n >= 2")
    D = poincare.pairwise_distances(X)
    iu = np.triu_indices(X.shape[0], k=1)
    d = D[iu]
    zero = d <= 0.0
    if np.any(zero):
        i, j = iu[0][zero][0], iu[1][zero][0]
        raise DegeneratePairError(f"duplicate source points at indices {int(i)} and {int(j)}")
    d_proj = poincare.pairwise_distances(Y)[iu]
    return float(np.mean(np.abs(d_proj - d) / d))
