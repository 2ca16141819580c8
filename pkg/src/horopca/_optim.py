"""Projected gradient ascent on the unit sphere with optional orthogonality."""

from __future__ import annotations

import numpy as np

MAX_HALVINGS = 40


def sphere_maximize(value_and_grad, p0, *, learning_rate, max_iter, tol, orthogonal_to=None):
    """Maximize a smooth function over unit vectors.

    value_and_grad(p) returns (value, gradient); a non-finite value marks p
    as infeasible. The step is halved whenever it fails to increase the
    objective, so the trace of accepted values is non-decreasing. Points
    (and gradients) are kept orthogonal to the rows of `orthogonal_to`.

    Returns (p, value, trace, converged) or None when no feasible start
    exists; trace is a list of (iteration, value) pairs for accepted
    steps. converged is False only when the iteration budget ran out
    while the objective was still improving faster than tol.
    """
    basis = None
    if orthogonal_to is not None and len(orthogonal_to):
        basis = np.atleast_2d(np.asarray(orthogonal_to, dtype=float))

    def project(p):
        if basis is not None:
            p = p - basis.T @ (basis @ p)
        norm = np.linalg.norm(p)
        if norm < 1e-12:
            return None
        return p / norm

    p = project(np.asarray(p0, dtype=float))
    if p is None:
        return None
    value, grad = value_and_grad(p)
    if not np.isfinite(value):
        return None
    trace = [(0, value)]
    step = learning_rate
    converged = True
    for iteration in range(1, max_iter + 1):
        if grad is None:
            break
        tangent = grad - (grad @ p) * p
        if basis is not None:
            tangent = tangent - basis.T @ (basis @ tangent)
        if not np.all(np.isfinite(tangent)) or np.linalg.norm(tangent) == 0.0:
            break
        accepted = False
        for _ in range(MAX_HALVINGS):
            cand = project(p + step * tangent)
            if cand is not None:
                cand_value, cand_grad = value_and_grad(cand)
                if np.isfinite(cand_value) and cand_value > value:
                    gain = (cand_value - value) / max(abs(cand_value), 1e-30)
                    p, value, grad = cand, cand_value, cand_grad
                    trace.append((iteration, value))
                    accepted = True
                    break
            step /= 2.0
        if not accepted or gain <= tol:
            break
        # let the step recover so one tight region cannot stall the tail
        step = min(learning_rate, step * 2.0)
        if iteration == max_iter:
            converged = False
    return p, value, trace, converged
