"""Exception types shared across the package."""


class HyperbolicError(Exception):
    """Base class for every error raised by this package."""


class PointValidationError(HyperbolicError, ValueError):
    """Coordinates do not describe a valid point of the model."""


class BoundaryProximityError(PointValidationError):
    """Point sits too close to the ball boundary for stable arithmetic."""


class DegenerateDirectionError(HyperbolicError, ValueError):
    """A direction is numerically zero where a nonzero one is required."""


class InvalidSubspaceError(HyperbolicError, ValueError):
    """Basis does not span a valid geodesic submanifold."""


class InvalidComponentsError(HyperbolicError, ValueError):
    """Ideal directions and base point fail the independence requirement."""


class DegeneratePairError(HyperbolicError, ValueError):
    """Duplicate source points make a relative pairwise metric undefined."""


class ZeroVarianceError(HyperbolicError, ValueError):
    """Dataset carries no variance to explain."""


class NotCenteredError(HyperbolicError, ValueError):
    """Operation requires data whose Frechet mean sits at the origin."""


class NonConvergenceError(HyperbolicError, RuntimeError):
    """An iterative solver exhausted its budget without converging."""


class InvalidMatrixError(HyperbolicError, ValueError):
    """Distance matrix fails symmetry, diagonal or sign requirements."""


class EmbeddingFormatError(HyperbolicError, ValueError):
    """An embedding or graph file does not parse."""


class DisconnectedGraphError(HyperbolicError, ValueError):
    """Graph has several components; shortest-path distances are undefined."""
