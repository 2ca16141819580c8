"""Hyperbolic dimensionality reduction via horospherical projections."""

from .baselines import (
    BarycentricSubspaceAnalysis,
    EuclideanPCA,
    HyperbolicMDS,
    PrincipalGeodesicAnalysis,
    TangentPCA,
    perturb_base,
)
from .data import Dataset, distance_matrix, generate, graph_distances, load_embeddings, save_embeddings
from .geometry import minkowski, poincare
from .horopca import HoroPCA
from .projections import (
    ComponentSet,
    GeodesicSubmanifold,
    geodesic_project,
    horospherical_project,
    minkowski_project,
)
from .serialization import load_model, save_model
from .stats import (
    FrechetResult,
    average_distortion,
    center,
    distance_variance,
    frechet_mean,
    frechet_variance,
)

__version__ = "0.1.0"

__all__ = [
    "BarycentricSubspaceAnalysis",
    "ComponentSet",
    "Dataset",
    "EuclideanPCA",
    "FrechetResult",
    "GeodesicSubmanifold",
    "HoroPCA",
    "HyperbolicMDS",
    "PrincipalGeodesicAnalysis",
    "TangentPCA",
    "average_distortion",
    "center",
    "distance_matrix",
    "distance_variance",
    "frechet_mean",
    "frechet_variance",
    "generate",
    "geodesic_project",
    "graph_distances",
    "horospherical_project",
    "load_embeddings",
    "load_model",
    "minkowski",
    "minkowski_project",
    "perturb_base",
    "poincare",
    "save_embeddings",
    "save_model",
    "__version__",
]
