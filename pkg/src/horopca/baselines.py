"""Comparison reducers: Euclidean PCA, tangent PCA, PGA, BSA and hMDS.

PGA and BSA search the same family of targets (linear subspaces through
the origin intersected with the ball) but optimize different objectives:
PGA maximizes squared distances from the origin to the projections, BSA
minimizes the squared residual distances. Their noise-perturbed variants
move the base point and conjugate with the reflection that restores it.
"""

from __future__ import annotations

import copy

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from ._linalg import svd_directions
from ._optim import sphere_maximize
from .errors import (
    InvalidComponentsError,
    InvalidMatrixError,
    NonConvergenceError,
    NotCenteredError,
    ZeroVarianceError,
)
from .geometry import minkowski, poincare
from .stats import frechet_mean

ORTHONORMAL_TOL = 1e-10
COSH_OVERFLOW = 700.0


def _check_fit_input(X, n_components: int) -> np.ndarray:
    X = poincare.check_ball(np.atleast_2d(np.asarray(X, dtype=float)), "X")
    if not 1 <= int(n_components) <= X.shape[1]:
        raise InvalidComponentsError(f"need 1 <= n_components <= {X.shape[1]}")
    if X.shape[0] < 2:
        raise ZeroVarianceError("need at least two points")
    return X


class _SubspaceReducer(BaseEstimator, TransformerMixin):
    """Shared plumbing for reducers whose model is an orthonormal basis."""

    method = "abstract"

    def _require_fitted(self):
        if not hasattr(self, "basis_"):
            raise NotFittedError("model is not fitted")

    def _validated(self, X) -> np.ndarray:
        self._require_fitted()
        X = poincare.check_ball(np.atleast_2d(np.asarray(X, dtype=float)), "X")
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected dimension {self.n_features_in_}, got {X.shape[1]}")
        return X


class EuclideanPCA(_SubspaceReducer):
    """Plain PCA on the raw ball coordinates (the naive baseline)."""

    method = "pca"

    def __init__(self, n_components: int = 2):
        self.n_components = n_components

    def fit(self, X, y=None):
        X = _check_fit_input(X, self.n_components)
        self.basis_ = svd_directions(X, int(self.n_components))
        self.base_point_ = np.zeros(X.shape[1])
        self.converged_ = True
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        # Orthogonal projection only; no mean shift, so norms cannot grow
        # and the outputs remain valid ball points.
        X = self._validated(X)
        return X @ self.basis_.T


class TangentPCA(_SubspaceReducer):
    """PCA in the tangent space at the origin (log map, SVD, exp map)."""

    method = "tpca"

    def __init__(self, n_components: int = 2, legacy_log: bool = False):
        self.n_components = n_components
        self.legacy_log = legacy_log

    def fit(self, X, y=None):
        X = _check_fit_input(X, self.n_components)
        tangents = poincare.log_origin(X, legacy=self.legacy_log)
        self.basis_ = svd_directions(tangents, int(self.n_components))
        self.base_point_ = np.zeros(X.shape[1])
        self.converged_ = True
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        X = self._validated(X)
        coords = poincare.log_origin(X, legacy=self.legacy_log) @ self.basis_.T
        return poincare.exp_origin(coords, legacy=self.legacy_log)


class _GreedyGeodesicReducer(_SubspaceReducer):
    """Greedy orthonormal ambient directions scored through the geodesic
    projection onto their span; subclasses define the per-point objective.

    For a subspace through the origin the projection has a closed form in
    the hyperboloid model, and both objectives depend on the input only
    through q = t^2 - |spatial coordinates in the span|^2: the projection
    lands at distance arccosh(sqrt(q)) from the input and arccosh(t /
    sqrt(q)) from the origin.
    """

    maximize_projected = True  # PGA; BSA flips to residual minimization

    def __init__(
        self,
        n_components: int = 2,
        restarts: int = 5,
        max_iter: int = 500,
        learning_rate: float = 0.05,
        tol: float = 1e-7,
        seed: int = 0,
        gradient: str = "analytic",
    ):
        self.n_components = n_components
        self.restarts = restarts
        self.max_iter = max_iter
        self.learning_rate = learning_rate
        self.tol = tol
        self.seed = seed
        self.gradient = gradient

    def _stage_objective(self, X0, Xs, frozen_sq):
        maximize = self.maximize_projected

        def value_and_grad(w, want_grad=True):
            s = Xs @ w
            span_sq = frozen_sq + s * s
            q = np.maximum(X0 * X0 - span_sq, 1.0)
            if maximize:
                arc = np.arccosh(np.maximum(X0 / np.sqrt(q), 1.0))
                value = float(np.sum(arc * arc))
                if not want_grad:
                    return value, None
                denom = np.sqrt(np.maximum(span_sq, 1e-300)) * q
                coef = 2.0 * arc * X0 * s / denom
                return value, coef @ Xs
            root = np.sqrt(q)
            arc = np.arccosh(root)
            value = -float(np.sum(arc * arc))
            if not want_grad:
                return value, None
            with np.errstate(divide="ignore", invalid="ignore"):
                fac = np.where(q - 1.0 < 1e-14, 1.0, arc / np.sqrt(np.maximum(q - 1.0, 1e-300)))
            coef = 2.0 * fac * s / root
            return value, coef @ Xs

        if self.gradient == "fd":
            def fd(w):
                value, _ = value_and_grad(w, want_grad=False)
                grad = np.empty_like(w)
                for i in range(w.size):
                    shift = np.zeros_like(w)
                    shift[i] = 1e-6
                    up, _ = value_and_grad(w + shift, want_grad=False)
                    dn, _ = value_and_grad(w - shift, want_grad=False)
                    grad[i] = (up - dn) / 2e-6
                return value, grad

            return fd
        return value_and_grad

    def fit(self, X, y=None):
        X = _check_fit_input(X, self.n_components)
        mean = frechet_mean(X).mean
        if float(np.linalg.norm(mean)) > 1e-4:
            raise NotCenteredError("data is not centered; center it before fitting")
        Xh = minkowski.to_hyperboloid(X)
        X0, Xs = Xh[:, 0], Xh[:, 1:]
        d = X.shape[1]
        basis = np.zeros((0, d))
        traces = []
        stage_converged = []
        frozen_sq = np.zeros(X.shape[0])
        for k in range(1, int(self.n_components) + 1):
            rng = np.random.default_rng([int(self.seed), k])
            objective = self._stage_objective(X0, Xs, frozen_sq)
            best = None
            for _ in range(int(self.restarts)):
                w0 = rng.standard_normal(d)
                result = sphere_maximize(
                    objective,
                    w0,
                    learning_rate=self.learning_rate,
                    max_iter=int(self.max_iter),
                    tol=self.tol,
                    orthogonal_to=basis,
                )
                if result is None:
                    continue
                if best is None or result[1] > best[1]:
                    best = result
            if best is None:
                raise NonConvergenceError(f"no feasible direction found at stage {k}")
            w = best[0]
            if basis.shape[0]:
                w = w - basis.T @ (basis @ w)
                w = w / np.linalg.norm(w)
            basis = np.vstack([basis, w[None, :]])
            traces.append(best[2])
            stage_converged.append(best[3])
            frozen_sq = frozen_sq + (Xs @ w) ** 2
        gram_err = float(np.max(np.abs(basis @ basis.T - np.eye(basis.shape[0]))))
        if gram_err > ORTHONORMAL_TOL:
            raise NonConvergenceError(f"basis drifted off orthonormality ({gram_err:.2e})")
        self.basis_ = basis
        self.base_point_ = np.zeros(d)
        self.objective_trace_ = traces
        self.converged_ = all(stage_converged)
        self.n_features_in_ = d
        return self

    def transform(self, X) -> np.ndarray:
        """Geodesic projection onto the fitted span, in K ball coordinates."""
        X = self._validated(X)
        if np.linalg.norm(self.base_point_) > 0.0:
            X = poincare.reflect_to_origin(self.base_point_, X)
            X = poincare.check_ball(X, "reflected X")
        Xh = minkowski.to_hyperboloid(X)
        coords = Xh[:, 1:] @ self.basis_.T
        q = np.maximum(Xh[:, 0] ** 2 - np.sum(coords * coords, axis=1), 1.0)
        lifted = np.concatenate([Xh[:, :1], coords], axis=1) / np.sqrt(q)[:, None]
        return minkowski.to_poincare(lifted)


class PrincipalGeodesicAnalysis(_GreedyGeodesicReducer):
    """Maximize squared distances from the origin to the projections."""

    method = "pga"
    maximize_projected = True


class BarycentricSubspaceAnalysis(_GreedyGeodesicReducer):
    """Minimize squared residual distances to the projections."""

    method = "bsa"
    maximize_projected = False


def perturb_base(model, sigma: float, seed: int = 0):
    """Copy of a fitted subspace model with a Gaussian-perturbed base point.

    The new base is the exponential at the origin of a tangent Gaussian
    with per-coordinate standard deviation sigma; transforms conjugate
    with the reflection that moves the base back to the origin. sigma = 0
    returns an identical model.
    """
    if not hasattr(model, "basis_"):
        raise NotFittedError("model is not fitted")
    perturbed = copy.deepcopy(model)
    if sigma != 0.0:
        rng = np.random.default_rng([int(seed), 0x6E])
        tangent = sigma * rng.standard_normal(model.basis_.shape[1])
        perturbed.base_point_ = poincare.exp_origin(tangent)
    return perturbed


class HyperbolicMDS(BaseEstimator):
    """Recover a point configuration from a hyperbolic distance matrix.

    Exact route: the pairing matrix cosh(D) of hyperboloid points equals
    t t^T - S where t are time coordinates and S the Euclidean Gram of the
    spatial parts. Time coordinates are read off the row of the most
    central point; S is then factored spectrally and the configuration
    re-projected onto the hyperboloid. Realizable matrices are recovered
    exactly (up to isometry); otherwise the truncation is a best-effort
    fit and the residual is reported.
    """

    method = "hmds"

    def __init__(self, n_components: int = 2):
        self.n_components = n_components

    def fit(self, D, y=None):
        D = self._check_matrix(D)
        n = D.shape[0]
        base = int(np.argmin(np.max(D, axis=1)))
        t = np.cosh(D[base])
        S = np.outer(t, t) - np.cosh(D)
        vals, vecs = np.linalg.eigh(S)
        order = np.argsort(vals)[::-1][: int(self.n_components)]
        lam = np.maximum(vals[order], 0.0)
        vecs = vecs[:, order]
        idx = np.argmax(np.abs(vecs), axis=0)
        signs = np.sign(vecs[idx, np.arange(vecs.shape[1])])
        signs[signs == 0.0] = 1.0
        spatial = (vecs * signs) * np.sqrt(lam)
        lifted = np.concatenate([np.sqrt(1.0 + np.sum(spatial**2, axis=1))[:, None], spatial], axis=1)
        self.embedding_ = minkowski.to_poincare(lifted)
        recovered = minkowski.distance(lifted[:, None, :], lifted[None, :, :])
        mask = ~np.eye(n, dtype=bool) & (D > 0.0)
        if np.any(mask):
            rel = np.abs(recovered[mask] - D[mask]) / D[mask]
            self.max_relative_error_ = float(np.max(rel))
            self.rms_error_ = float(np.sqrt(np.mean((recovered[mask] - D[mask]) ** 2)))
        else:
            self.max_relative_error_ = 0.0
            self.rms_error_ = 0.0
        self.converged_ = True
        self.n_features_in_ = n
        return self

    def fit_transform(self, D, y=None) -> np.ndarray:
        return self.fit(D).embedding_

    @staticmethod
    def _check_matrix(D) -> np.ndarray:
        D = np.atleast_2d(np.asarray(D, dtype=float))
        if D.ndim != 2 or D.shape[0] != D.shape[1]:
            raise InvalidMatrixError("distance matrix must be square")
        if not np.all(np.isfinite(D)):
            raise InvalidMatrixError("distance matrix must be finite")
        if np.any(D < 0.0):
            raise InvalidMatrixError("distance matrix must be nonnegative")
        if np.max(np.abs(D - D.T)) > 1e-12:
            raise InvalidMatrixError("distance matrix must be symmetric within 1e-12")
        if np.any(np.abs(np.diag(D)) > 0.0):
            raise InvalidMatrixError("distance matrix must have a zero diagonal")
        if np.max(D) > COSH_OVERFLOW:
            raise InvalidMatrixError("distances too large: cosh would overflow float64")
        return 0.5 * (D + D.T)
