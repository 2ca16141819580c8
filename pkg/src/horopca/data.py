"""Dataset ingestion, synthetic generation and distance matrices.

Embedding files are CSV: one point per row, full round-trip decimal
precision on save, optional single header row. Graphs are whitespace-
separated edge lists `u v [w]` with '#' comments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import (
    DisconnectedGraphError,
    EmbeddingFormatError,
    InvalidMatrixError,
    PointValidationError,
)
from .geometry import poincare


@dataclass
class Dataset:
    """Ordered points of one dimension plus optional row labels."""

    points: np.ndarray
    labels: list[str] | None = None

    def __post_init__(self):
        self.points = poincare.check_ball(
            np.atleast_2d(np.asarray(self.points, dtype=float)), "dataset"
        )
        if self.points.shape[0] < 1:
            raise PointValidationError("dataset needs at least one point")
        if self.labels is not None and len(self.labels) != self.points.shape[0]:
            raise EmbeddingFormatError("label count does not match point count")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _format_row(row: np.ndarray) -> str:
    return ",".join(repr(float(v)) for v in row)


def save_embeddings(path, data, header: bool = False) -> None:
    """Write points as CSV with shortest round-trip decimal precision."""
    points = data.points if isinstance(data, Dataset) else np.atleast_2d(np.asarray(data, dtype=float))
    lines = []
    if header:
        lines.append(",".join(f"x{i}" for i in range(points.shape[1])))
    lines.extend(_format_row(row) for row in points)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_embeddings(path, header: bool = False) -> Dataset:
    """Parse a CSV embedding file, validating every row as a ball point."""
    rows = []
    dim = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if header and lineno == 1:
                continue
            parts = line.split(",")
            try:
                values = [float(v) for v in parts]
            except ValueError as exc:
                raise EmbeddingFormatError(f"{path}:{lineno}: cannot parse row") from exc
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise EmbeddingFormatError(
                    f"{path}:{lineno}: expected {dim} columns, found {len(values)}"
                )
            row = np.array(values)
            if np.sum(row * row) >= 1.0:
                raise PointValidationError(f"{path}:{lineno}: point norm is not < 1")
            rows.append(row)
    if not rows:
        raise EmbeddingFormatError(f"{path}: no points found")
    return Dataset(np.vstack(rows))


def save_distance_matrix(path, D) -> None:
    save_embeddings(path, np.asarray(D, dtype=float))


def load_distance_matrix(path) -> np.ndarray:
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as exc:
                raise EmbeddingFormatError(f"{path}:{lineno}: cannot parse row") from exc
    D = np.array(rows)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise InvalidMatrixError(f"{path}: matrix is not square")
    return D


def generate(kind: str, n: int, dim: int, covariance=None, seed: int = 0) -> Dataset:
    """Deterministic synthetic datasets.

    tangent-gaussian: tangent vectors from N(0, diag(covariance)) pushed
    through the exponential map at the origin.
    tree-like: the largest complete binary tree with at most n nodes, edge
    length sqrt(covariance[0]) (default 1), shortest-path metric embedded
    into `dim` dimensions by hyperbolic MDS and centered.
    """
    if n < 1 or dim < 1:
        raise ValueError("need n >= 1 and dim >= 1")
    if covariance is None:
        covariance = np.ones(dim)
    covariance = np.asarray(covariance, dtype=float)
    if covariance.ndim == 0:
        covariance = np.full(dim, float(covariance))
    if np.any(covariance <= 0.0):
        raise ValueError("covariance entries must be positive")
    if kind == "tangent-gaussian":
        if covariance.shape != (dim,):
            raise ValueError("covariance diagonal must have one entry per dimension")
        rng = np.random.default_rng(seed)
        tangents = rng.standard_normal((n, dim)) * np.sqrt(covariance)
        return Dataset(poincare.exp_origin(tangents))
    if kind == "tree-like":
        from .baselines import HyperbolicMDS
        from .stats import center

        depth = max(1, int(np.floor(np.log2(n + 1))))
        D = balanced_tree_distances(depth) * np.sqrt(covariance[0])
        points = HyperbolicMDS(n_components=dim).fit_transform(D)
        centered, _ = center(points)
        return Dataset(centered)
    raise ValueError(f"unknown generator kind: {kind!r}")


def balanced_tree_distances(depth: int, edge_weights=None) -> np.ndarray:
    """Shortest-path matrix of the complete binary tree with given depth.

    Edge i (from node i+1 up to its parent) gets weight edge_weights[i],
    default 1. Distinct weights break the sibling symmetry, which keeps
    low-rank spectral embeddings from collapsing leaves onto each other.
    """
    nodes = 2**depth - 1
    if edge_weights is None:
        edge_weights = np.ones(max(nodes - 1, 0))
    edge_weights = np.asarray(edge_weights, dtype=float)
    edges = [
        (child, (child - 1) // 2, float(edge_weights[child - 1]))
        for child in range(1, nodes)
    ]
    return shortest_path_matrix(edges, nodes)


def shortest_path_matrix(edges, n_vertices: int) -> np.ndarray:
    """All-pairs shortest paths of a weighted undirected edge list."""
    if not edges:
        raise DisconnectedGraphError("graph has no edges")
    u, v, w = zip(*edges)
    graph = coo_matrix((w, (u, v)), shape=(n_vertices, n_vertices)).tocsr()
    n_comp, assignment = connected_components(graph, directed=False)
    if n_comp > 1:
        groups = [np.flatnonzero(assignment == c).tolist() for c in range(n_comp)]
        raise DisconnectedGraphError(f"graph is disconnected; components: {groups}")
    D = shortest_path(graph, method="D", directed=False)
    return np.asarray(D)


def graph_distances(path) -> tuple[np.ndarray, list[str]]:
    """Shortest-path matrix of an edge-list file; returns (matrix, names).

    Vertices are indexed in order of first appearance; edge weights
    default to 1; '#' starts a comment.
    """
    names: dict[str, int] = {}
    edges = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise EmbeddingFormatError(f"{path}:{lineno}: expected 'u v [w]'")
            u, v = parts[0], parts[1]
            try:
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise EmbeddingFormatError(f"{path}:{lineno}: bad weight") from exc
            if w < 0.0:
                raise EmbeddingFormatError(f"{path}:{lineno}: negative weight")
            for name in (u, v):
                if name not in names:
                    names[name] = len(names)
            edges.append((names[u], names[v], w))
    ordered = [name for name, _ in sorted(names.items(), key=lambda kv: kv[1])]
    return shortest_path_matrix(edges, len(names)), ordered


def distance_matrix(data) -> np.ndarray:
    """Pairwise hyperbolic distances of a dataset (symmetric, zero diagonal)."""
    points = data.points if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    return poincare.pairwise_distances(points)
