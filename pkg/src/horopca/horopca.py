"""Greedy extraction of principal ideal directions in hyperbolic space.

The fitted model holds K boundary directions chosen one at a time, each
maximizing the pairwise distance-based variance of the horospherically
projected data with the earlier directions frozen. The base point is the
origin; by construction the projected distances do not depend on it.
"""

from __future__ import annotations

import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._linalg import orthonormal_row_basis, svd_directions
from ._optim import sphere_maximize
from .errors import (
    DegenerateDirectionError,
    InvalidComponentsError,
    NonConvergenceError,
    NotCenteredError,
    ZeroVarianceError,
)
from .geometry import minkowski, poincare
from .projections import INDEPENDENCE_TOL, ComponentSet, horospherical_project
from .stats import center, distance_variance, frechet_mean

FD_STEP = 1e-6
CENTERED_MEAN_TOL = 1e-4


def _variance_objective_k1(p: np.ndarray, X: np.ndarray, log_gap: np.ndarray, want_grad: bool):
    # For one direction the projected points sit on a geodesic and their
    # pairwise distances are differences of Busemann coordinates, so the
    # objective collapses to twice the classical variance of those values.
    diff = p[None, :] - X
    sq = np.sum(diff * diff, axis=1)
    t = np.log(sq) - log_gap
    centered = t - t.mean()
    value = 2.0 * float(np.mean(centered * centered))
    if not want_grad:
        return value, None
    n = X.shape[0]
    grad = (8.0 / n) * (centered / sq) @ diff
    return value, grad


def _variance_objective_highk(
    p: np.ndarray, frozen: np.ndarray, X0: np.ndarray, Xs: np.ndarray, want_grad: bool
):
    # Closed-form evaluation of the distance-based variance of the
    # horospherical projections: solve the Busemann-preservation system in
    # the span of the light-like direction lifts plus the origin.
    P = np.vstack([frozen, p[None, :]])
    K = P.shape[0]
    G = P @ P.T - 1.0
    np.fill_diagonal(G, 0.0)
    lifts = np.concatenate([np.ones((K, 1)), P], axis=1)
    lifts = lifts / np.linalg.norm(lifts, axis=1, keepdims=True)
    if np.linalg.svd(lifts, compute_uv=False)[-1] < INDEPENDENCE_TOL:
        return -np.inf, None
    C = Xs @ P.T - X0[:, None]
    try:
        V = np.linalg.solve(G, C.T).T
        w = np.linalg.solve(G, -np.ones(K))
    except np.linalg.LinAlgError:
        return -np.inf, None
    tau = 1.0 + float(-np.ones(K) @ w)
    if tau >= -1e-12:
        return -np.inf, None
    e = np.sum(C * V, axis=1)
    beta = np.sqrt(np.maximum((1.0 + e) / tau, 0.0))
    M = -(V @ C.T) + tau * np.outer(beta, beta)
    M = np.maximum(0.5 * (M + M.T), 1.0)
    arc = np.arccosh(M)
    n = X0.shape[0]
    value = float(np.mean(arc * arc))
    if not want_grad:
        return value, None
    with np.errstate(divide="ignore", invalid="ignore"):
        g_fac = np.where(M - 1.0 < 1e-14, 1.0, arc / np.sqrt(np.maximum(M * M - 1.0, 1e-300)))
    vk = V[:, -1]
    r = g_fac @ vk
    phi = (g_fac @ beta) / np.maximum(beta, 1e-15)
    pv = phi * vk
    grad = Xs.T @ (pv - r)
    if K > 1:
        coeffs = V[:, :-1].T @ r - V[:, :-1].T @ pv
        grad = grad + frozen.T @ coeffs
    grad = (4.0 / (n * n)) * grad
    return value, grad


def _with_fd_gradient(value_fn, h: float = FD_STEP):
    def wrapped(p):
        value, _ = value_fn(p, False)
        if not np.isfinite(value):
            return value, None
        grad = np.empty_like(p)
        for i in range(p.size):
            shift = np.zeros_like(p)
            shift[i] = h
            up, _ = value_fn(p + shift, False)
            down, _ = value_fn(p - shift, False)
            grad[i] = (up - down) / (2.0 * h)
        return value, grad

    return wrapped


class HoroPCA(BaseEstimator, TransformerMixin):
    """Principal ideal directions by horospherical projection.

    Parameters
    ----------
    n_components : target number of directions K, 1 <= K <= d.
    restarts : random initializations per greedy stage; the best stays.
    max_iter, learning_rate, tol : sphere-ascent controls. The step is
        halved on objective decrease; tol is the relative objective gain
        under which a stage stops.
    seed : base seed; each greedy stage draws its own child generator, so
        the first k directions of a K-fit match a plain k-fit.
    gradient : "analytic" (default) or "fd" (central differences).
    auto_center : move the Frechet mean to the origin before fitting and
        remember the isometry; otherwise off-center data is rejected.
    """

    def __init__(
        self,
        n_components: int = 2,
        restarts: int = 5,
        max_iter: int = 500,
        learning_rate: float = 0.05,
        tol: float = 1e-7,
        seed: int = 0,
        gradient: str = "analytic",
        auto_center: bool = False,
    ):
        self.n_components = n_components
        self.restarts = restarts
        self.max_iter = max_iter
        self.learning_rate = learning_rate
        self.tol = tol
        self.seed = seed
        self.gradient = gradient
        self.auto_center = auto_center

    # ------------------------------------------------------------------ fit

    def fit(self, X, y=None):
        X = poincare.check_ball(np.atleast_2d(np.asarray(X, dtype=float)), "X")
        n, d = X.shape
        if not 1 <= int(self.n_components) <= d:
            raise InvalidComponentsError(f"need 1 <= n_components <= {d}")
        if self.restarts < 1 or self.tol <= 0.0 or self.max_iter < 1:
            raise ValueError("restarts >= 1, max_iter >= 1 and tol > 0 are required")
        if n < 2:
            raise ZeroVarianceError("need at least two points")

        total_variance = distance_variance(X)
        if total_variance <= 1e-24:
            raise ZeroVarianceError("all points coincide; nothing to explain")
        self.centering_ = None
        if self.auto_center:
            X, self.centering_ = center(X)
        else:
            mean = frechet_mean(X).mean
            if float(np.linalg.norm(mean)) > CENTERED_MEAN_TOL:
                raise NotCenteredError(
                    "data is not centered (Frechet mean norm "
                    f"{float(np.linalg.norm(mean)):.2e} > {CENTERED_MEAN_TOL:g}); "
                    "center it first or pass auto_center=True"
                )

        Xh = minkowski.to_hyperboloid(X)
        X0, Xs = Xh[:, 0], Xh[:, 1:]
        log_gap = np.log(poincare.boundary_gap(X, "X"))
        # informed restart seeds: tangent principal directions (both signs)
        informed = svd_directions(poincare.log_origin(X), int(self.n_components))

        K = int(self.n_components)
        components = np.zeros((0, d))
        traces: list[list[tuple[int, float]]] = []
        stage_converged: list[bool] = []
        for k in range(1, K + 1):
            rng = np.random.default_rng([int(self.seed), k])
            if k == 1:
                def value_fn(p, want_grad, _X=X, _lg=log_gap):
                    return _variance_objective_k1(p, _X, _lg, want_grad)
            else:
                frozen = components

                def value_fn(p, want_grad, _f=frozen):
                    return _variance_objective_highk(p, _f, X0, Xs, want_grad)

            if self.gradient == "fd":
                vg = _with_fd_gradient(value_fn)
            else:
                def vg(p, _fn=value_fn):
                    return _fn(p, True)

            starts = []
            if k <= informed.shape[0]:
                starts.extend([informed[k - 1], -informed[k - 1]])
            while len(starts) < int(self.restarts):
                starts.append(rng.standard_normal(d))
            best = None
            for p0 in starts[: int(self.restarts)]:
                p0 = self._repair_start(p0, components)
                if p0 is None:
                    continue
                result = sphere_maximize(
                    vg,
                    p0,
                    learning_rate=self.learning_rate,
                    max_iter=int(self.max_iter),
                    tol=self.tol,
                )
                if result is None:
                    continue
                if best is None or result[1] > best[1]:
                    best = result
            if best is None:
                raise NonConvergenceError(f"no feasible direction found at stage {k}")
            components = np.vstack([components, best[0][None, :]])
            traces.append(best[2])
            stage_converged.append(best[3])

        self.components_ = components
        self.base_point_ = np.zeros(d)
        self.objective_trace_ = traces
        self.converged_ = all(stage_converged)
        self.n_features_in_ = d
        comp_full = ComponentSet(components)
        self.explained_ = [
            distance_variance(horospherical_project(ComponentSet(components[:k]), X))
            for k in range(1, K + 1)
        ]
        if any(b < a - 1e-10 for a, b in zip(self.explained_, self.explained_[1:])):
            warnings.warn(
                "explained distance variance decreased when adding a direction",
                RuntimeWarning,
            )
        self._component_set = comp_full
        self.whiten_mean_ = None
        self.whiten_scale_ = None
        return self

    @staticmethod
    def _repair_start(p0: np.ndarray, frozen: np.ndarray):
        # A start whose light-like lift is nearly dependent on the frozen
        # ones is pushed away from their Euclidean span; hopeless starts
        # are dropped.
        norm = np.linalg.norm(p0)
        if norm < 1e-12:
            return None
        p = p0 / norm
        if frozen.shape[0] == 0:
            return p
        lifts = np.concatenate([np.ones((frozen.shape[0] + 1, 1)), np.vstack([frozen, p])], axis=1)
        lifts = lifts / np.linalg.norm(lifts, axis=1, keepdims=True)
        if np.linalg.svd(lifts, compute_uv=False)[-1] >= INDEPENDENCE_TOL:
            return p
        q = orthonormal_row_basis(frozen)
        p = p - q.T @ (q @ p)
        norm = np.linalg.norm(p)
        if norm < 1e-8:
            return None
        return p / norm

    # ------------------------------------------------------- fitted queries

    def _require_fitted(self):
        if not hasattr(self, "components_"):
            raise NotFittedError("model is not fitted")

    def _prepare(self, X) -> np.ndarray:
        self._require_fitted()
        X = poincare.check_ball(np.atleast_2d(np.asarray(X, dtype=float)), "X")
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected dimension {self.n_features_in_}, got {X.shape[1]}")
        if self.centering_ is not None and not self.centering_.is_identity:
            X = self.centering_.apply(X)
        return X

    def transform(self, X) -> np.ndarray:
        """Project onto the fitted hull and express in K ball coordinates.

        The basis change is a Euclidean isometry of the spanning subspace,
        so pairwise hyperbolic distances equal those of the ambient
        projections exactly.
        """
        X = self._prepare(X)
        projected = horospherical_project(self._component_set, X)
        basis = orthonormal_row_basis(self.components_)
        return projected @ basis.T

    def busemann_coordinates(self, X) -> np.ndarray:
        """Matrix of Busemann coordinates along the fitted directions."""
        X = self._prepare(X)
        return poincare.busemann_coordinates(self.components_, X)

    # ------------------------------------------------------------ whitening

    def fit_whitener(self, X):
        """Store per-direction mean and scale of the training coordinates."""
        coords = self.busemann_coordinates(X)
        mean = coords.mean(axis=0)
        scale = coords.std(axis=0)
        bad = np.flatnonzero(scale <= 1e-12)
        if bad.size:
            raise DegenerateDirectionError(
                f"direction {int(bad[0])} has zero variance on the training data"
            )
        self.whiten_mean_ = mean
        self.whiten_scale_ = scale
        return self

    def whiten(self, X) -> np.ndarray:
        """Normalize Busemann coordinates with the stored training statistics."""
        self._require_fitted()
        if self.whiten_mean_ is None:
            raise NotFittedError("whitener is not fitted; call fit_whitener first")
        return (self.busemann_coordinates(X) - self.whiten_mean_) / self.whiten_scale_
