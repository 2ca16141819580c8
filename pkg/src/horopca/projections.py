"""Projections onto geodesic submanifolds of hyperbolic space.

Provides Minkowski orthogonal projection, geodesic (closest-point)
projection, and the horospherical projection that slides points along
intersections of horospheres while preserving their Busemann coordinates.
All projection arithmetic runs in the hyperboloid model; ball coordinates
are converted at the boundaries of each call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    HyperbolicError,
    InvalidComponentsError,
    InvalidSubspaceError,
)
from .geometry import minkowski, poincare

GRAM_CONDITION_LIMIT = 1e10
INDEPENDENCE_TOL = 1e-8
SPINE_EPS = 1e-12


class GeodesicSubmanifold:
    """Geodesic submanifold cut out of the hyperboloid by a linear span.

    The basis rows span a subspace of R^{1,d}; the submanifold is its
    intersection with the hyperboloid and has dimension len(basis) - 1.
    The span must contain a time-like direction, which is equivalent to
    its Minkowski Gram matrix being nonsingular with one negative
    eigenvalue.
    """

    def __init__(self, basis):
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if not np.all(np.isfinite(basis)):
            raise InvalidSubspaceError("basis entries must be finite")
        gram = minkowski.gram(basis)
        svals = np.linalg.svd(gram, compute_uv=False)
        if svals[-1] <= 0.0 or svals[0] / svals[-1] > GRAM_CONDITION_LIMIT:
            raise InvalidSubspaceError(
                "basis Gram matrix is singular or badly conditioned; "
                "the span must contain a time-like vector and be independent"
            )
        if int(np.sum(np.linalg.eigvalsh(gram) < 0.0)) != 1:
            raise InvalidSubspaceError("span does not contain a time-like direction")
        self.basis = basis
        self._gram = gram

    @property
    def dim(self) -> int:
        return self.basis.shape[0] - 1

    @classmethod
    def from_ball_directions(cls, directions) -> "GeodesicSubmanifold":
        """Submanifold through the origin spanned by ball directions.

        An empty direction set yields the single point at the origin.
        """
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        d = directions.shape[1]
        rows = [np.concatenate([[1.0], np.zeros(d)])]
        for v in directions:
            rows.append(np.concatenate([[0.0], v]))
        return cls(np.array(rows))


def minkowski_project(sub: GeodesicSubmanifold, x) -> np.ndarray:
    """Orthogonal projection of ambient vectors onto the span of sub.

    Residuals are Minkowski-orthogonal to every basis vector; future-
    pointing time-like inputs keep both properties.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    C = minkowski.gram(X, sub.basis)
    coef = np.linalg.solve(sub._gram, C.T).T
    out = coef @ sub.basis
    return out[0] if single else out


def geodesic_project(sub: GeodesicSubmanifold, x) -> np.ndarray:
    """Closest-point projection of hyperboloid points onto the submanifold.

    Projects linearly onto the span, then rescales back to the
    hyperboloid: z / sqrt(-B(z, z)).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    z = minkowski_project(sub, X)
    nn = -minkowski.bilinear(z, z)
    if np.any(nn <= 0.0):
        raise HyperbolicError(
            "projected vector is not time-like; input was not a valid hyperboloid point"
        )
    out = z / np.sqrt(nn)[:, None]
    return out[0] if single else out


def geodesic_project_reflection_oracle(directions, x) -> np.ndarray:
    """Ball-model geodesic projection onto a linear subspace through 0.

    Independent route used to cross-check :func:`geodesic_project`:
    reflect x Euclidean-wise through the subspace (a hyperbolic isometry
    for subspaces through the origin) and return the hyperbolic midpoint
    of x and its reflection. An empty direction set projects to 0.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    directions = np.asarray(directions, dtype=float)
    if directions.size == 0:
        proj = np.zeros_like(X)
    else:
        directions = np.atleast_2d(directions)
        q, _ = np.linalg.qr(directions.T)
        proj = X @ q @ q.T
    reflected = 2.0 * proj - X
    out = poincare.geodesic_midpoint(X, reflected)
    return out[0] if single else out


def submanifold_distance(sub: GeodesicSubmanifold, x) -> np.ndarray:
    """Hyperbolic distance from hyperboloid points to the submanifold."""
    x = np.asarray(x, dtype=float)
    X = np.atleast_2d(x)
    d = minkowski.distance(X, geodesic_project(sub, X))
    return d[0] if x.ndim == 1 else d


class ComponentSet:
    """Ordered ideal directions plus a base point: a projection target.

    The geodesic hull of base and directions is the target submanifold M;
    the hull of the directions alone is the spine of the projection. The
    light-like lifts of the directions together with the base's
    hyperboloid image must be linearly independent.
    """

    def __init__(self, directions, base=None):
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        poincare.check_ideal(directions, "directions")
        K, d = directions.shape
        if not 1 <= K <= d:
            raise InvalidComponentsError(f"need 1 <= K <= d, got K={K}, d={d}")
        if base is None:
            base = np.zeros(d)
        base = poincare.check_ball(np.asarray(base, dtype=float), "base")
        if base.shape != (d,):
            raise InvalidComponentsError("base point dimension mismatch")
        self.directions = directions
        self.base = base
        self.lightlike = minkowski.ideal_to_lightlike(directions)
        self.base_hyperboloid = minkowski.to_hyperboloid(base)
        stacked = np.vstack([self.lightlike, self.base_hyperboloid[None, :]])
        stacked = stacked / np.linalg.norm(stacked, axis=1, keepdims=True)
        if np.linalg.svd(stacked, compute_uv=False)[-1] < INDEPENDENCE_TOL:
            raise InvalidComponentsError(
                "ideal directions and base point are not independent "
                f"(smallest singular value below {INDEPENDENCE_TOL:g})"
            )
        self._spine_gram = minkowski.gram(self.lightlike)

    @property
    def n_components(self) -> int:
        return self.lightlike.shape[0]

    @property
    def dim(self) -> int:
        return self.directions.shape[1]


def _k1_walk(comp: ComponentSet, Xh: np.ndarray) -> np.ndarray:
    # Closed form for a single direction: the Busemann coordinate changes
    # at unit rate along the geodesic toward p, so walking from the base by
    # B_p(base) - B_p(x) lands on the horosphere through x.
    q = comp.lightlike[0]
    bh = comp.base_hyperboloid
    t = minkowski.busemann(q, bh) - minkowski.busemann(q, Xh)
    u = -q / minkowski.bilinear(bh, q) - bh  # unit tangent at the base toward p
    return np.cosh(t)[:, None] * bh + np.sinh(t)[:, None] * u


def _spine_tangent(comp: ComponentSet) -> np.ndarray:
    # Algorithm step: u = (b - w) minus its span projection, normalized.
    # Since w and its projection cancel, u is one fixed vector per target.
    bh = comp.base_hyperboloid
    coef = np.linalg.solve(comp._spine_gram, minkowski.gram(bh[None, :], comp.lightlike)[0])
    u = bh - coef @ comp.lightlike
    sq = minkowski.bilinear(u, u)
    if sq <= 0.0:
        raise InvalidComponentsError("base point lies on the spine of the projection")
    return u / np.sqrt(sq)


def horospherical_project(comp: ComponentSet, x) -> np.ndarray:
    """Project ball points onto the hull of the components and base.

    Preserves every Busemann coordinate B_{p_j}; of the two candidate
    intersection points it returns the one on the base point's side of
    the spine. Points already on the target are fixed; points on the
    spine short-circuit to their own spine position.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = poincare.check_ball(np.atleast_2d(x), "x")
    Xh = minkowski.to_hyperboloid(X)
    if comp.n_components == 1:
        out = _k1_walk(comp, Xh)
    else:
        C = minkowski.gram(Xh, comp.lightlike)
        coef = np.linalg.solve(comp._spine_gram, C.T).T
        z = coef @ comp.lightlike
        nn = -minkowski.bilinear(z, z)
        if np.any(nn <= 0.0):
            raise HyperbolicError("spine projection lost time-likeness; invalid input")
        w = z / np.sqrt(nn)[:, None]
        u = _spine_tangent(comp)
        tangency = np.max(np.abs(minkowski.bilinear(u[None, :], w)))
        if tangency > 1e-8:
            raise HyperbolicError(f"spine tangent failed orthogonality check ({tangency:.3e})")
        t = minkowski.distance(Xh, w)
        out = np.where(
            (t < SPINE_EPS)[:, None],
            w,
            minkowski.exp_map(w, u, t),
        )
    ball = minkowski.to_poincare(out)
    return ball[0] if single else ball


def _gram_parts(comp: ComponentSet, Xh: np.ndarray):
    # Solve the Busemann-preservation equations in span(lightlike, base):
    # writing Y = sum_a alpha_a q_a + beta * b_h, the K pairings with the
    # q_a are fixed by the input point and B(Y, Y) = -1 pins beta^2.
    G = comp._spine_gram
    C = minkowski.gram(Xh, comp.lightlike)
    h = minkowski.gram(comp.base_hyperboloid[None, :], comp.lightlike)[0]
    V = np.linalg.solve(G, C.T).T
    wv = np.linalg.solve(G, h)
    tau = 1.0 + float(h @ wv)
    if tau >= 0.0:
        raise InvalidComponentsError("base point degenerates against the spine (tau >= 0)")
    e = np.sum(C * V, axis=1)
    beta = np.sqrt(np.maximum((1.0 + e) / tau, 0.0))
    return C, V, h, tau, e, beta


def horospherical_gram(comp: ComponentSet, x) -> np.ndarray:
    """Pairwise cosh-distance matrix of the projections, in closed form.

    Entry (i, j) is -B(Y_i, Y_j) = cosh d(Y_i, Y_j) where Y = projection.
    Independent of the walk-based route; needs K >= 2.
    """
    X = poincare.check_ball(np.atleast_2d(np.asarray(x, dtype=float)), "x")
    Xh = minkowski.to_hyperboloid(X)
    if comp.n_components < 2:
        raise InvalidComponentsError("closed-form Gram route needs K >= 2")
    C, V, _, tau, _, beta = _gram_parts(comp, Xh)
    M = -(V @ C.T) + tau * np.outer(beta, beta)
    return 0.5 * (M + M.T)


def horospherical_project_by_gram(comp: ComponentSet, x) -> np.ndarray:
    """Closed-form projection route (K >= 2), used to cross-check the walk."""
    X = poincare.check_ball(np.atleast_2d(np.asarray(x, dtype=float)), "x")
    Xh = minkowski.to_hyperboloid(X)
    if comp.n_components < 2:
        raise InvalidComponentsError("closed-form Gram route needs K >= 2")
    C, _, h, _, _, beta = _gram_parts(comp, Xh)
    alpha = np.linalg.solve(comp._spine_gram, (C - np.outer(beta, h)).T).T
    Y = alpha @ comp.lightlike + beta[:, None] * comp.base_hyperboloid
    return minkowski.to_poincare(Y)


def busemann_level_intersection(p, x, base=None, tol: float = 1e-13) -> np.ndarray:
    """Single-direction projection by root-finding the defining equation.

    Pure ball-model route, independent of the hyperboloid machinery:
    bisects B_p(gamma(t)) = B_p(x) along the Mobius-parameterized geodesic
    from the base toward p. Test oracle for the K=1 walk.
    """
    p = poincare.check_ideal(np.asarray(p, dtype=float))
    x = poincare.check_ball(np.asarray(x, dtype=float), "x")
    base = np.zeros_like(p) if base is None else np.asarray(base, dtype=float)
    target = float(poincare.busemann(p, x))

    def f(t):
        return float(poincare.busemann(p, poincare.geodesic_toward_ideal(base, p, t))) - target

    lo, hi = 0.0, 0.0
    f0 = f(0.0)
    if f0 == 0.0:
        return poincare.geodesic_toward_ideal(base, p, 0.0)
    step = 1.0
    if f0 > 0.0:  # f decreases in t, so the root lies at t > 0
        hi = step
        while f(hi) > 0.0:
            hi *= 2.0
            if hi > 1e3:
                raise HyperbolicError("bisection bracket grew unbounded")
        lo = hi / 2.0 if hi > step else 0.0
    else:
        lo = -step
        while f(lo) < 0.0:
            lo *= 2.0
            if lo < -1e3:
                raise HyperbolicError("bisection bracket grew unbounded")
        hi = lo / 2.0 if lo < -step else 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return poincare.geodesic_toward_ideal(base, p, 0.5 * (lo + hi))


@dataclass(frozen=True)
class Horocycle:
    """Euclidean circle representing a 2-D horocycle in the ball."""

    center: np.ndarray
    radius: float


def horocycle_oracle_2d(p, x) -> Horocycle:
    """Euclidean circle through x internally tangent to the disk at p.

    Only defined in two dimensions; this is the level set of B_p through
    x, so intersecting it with the diameter toward p must reproduce the
    single-direction horospherical projection.
    """
    p = poincare.check_ideal(np.asarray(p, dtype=float))
    x = poincare.check_ball(np.asarray(x, dtype=float), "x")
    if p.shape != (2,) or x.shape != (2,):
        raise InvalidComponentsError("horocycle oracle is only defined for d = 2")
    radius = float(np.sum((x - p) ** 2) / (2.0 * (1.0 - x @ p)))
    return Horocycle(center=(1.0 - radius) * p, radius=radius)


def horocycle_diameter_intersection(p, x) -> np.ndarray:
    """Interior intersection of the horocycle through x with the diameter toward p."""
    circle = horocycle_oracle_2d(p, x)
    return (1.0 - 2.0 * circle.radius) * np.asarray(p, dtype=float)


@dataclass(frozen=True)
class ShrinkBoundReport:
    """Observed distances for the geodesic-projection contraction bound."""

    distance: float
    projected_distance: float
    clearance: float
    satisfied: bool


def shrink_bound_check(sub: GeodesicSubmanifold, x, y, r: float, slack: float = 1e-9) -> ShrinkBoundReport:
    """Check sinh(d'/2) <= sinh(d/2) / cosh(r) for points r away from sub.

    Both points must be at distance >= r from the submanifold (caller's
    precondition; violations raise ValueError).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xh = minkowski.to_hyperboloid(poincare.check_ball(x, "x"))
    yh = minkowski.to_hyperboloid(poincare.check_ball(y, "y"))
    clear = min(float(submanifold_distance(sub, xh)), float(submanifold_distance(sub, yh)))
    if clear < r - 1e-9:
        raise ValueError(f"points are only {clear:.6f} away from the submanifold, need >= {r}")
    d = float(minkowski.distance(xh, yh))
    dp = float(minkowski.distance(geodesic_project(sub, xh), geodesic_project(sub, yh)))
    ok = np.sinh(dp / 2.0) <= np.sinh(d / 2.0) / np.cosh(r) + slack
    return ShrinkBoundReport(distance=d, projected_distance=dp, clearance=r, satisfied=bool(ok))
