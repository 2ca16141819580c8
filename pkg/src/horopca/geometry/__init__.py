"""Hyperbolic geometry: Poincare ball and hyperboloid models."""

from . import minkowski, poincare
from .minkowski import (
    bilinear as minkowski_bilinear,
    exp_map,
    ideal_to_lightlike,
    lightlike_to_ideal,
    to_hyperboloid,
    to_poincare,
)
from .poincare import (
    busemann,
    busemann_coordinates,
    distance as poincare_distance,
    exp_origin,
    log_origin,
    pairwise_distances,
)

__all__ = [
    "busemann",
    "busemann_coordinates",
    "exp_map",
    "exp_origin",
    "ideal_to_lightlike",
    "lightlike_to_ideal",
    "log_origin",
    "minkowski",
    "minkowski_bilinear",
    "pairwise_distances",
    "poincare",
    "poincare_distance",
    "to_hyperboloid",
    "to_poincare",
]
