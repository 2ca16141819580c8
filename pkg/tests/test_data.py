import numpy as np
import pytest

from horopca.data import (
    Dataset,
    balanced_tree_distances,
    distance_matrix,
    generate,
    graph_distances,
    load_distance_matrix,
    load_embeddings,
    save_distance_matrix,
    save_embeddings,
)
from horopca.errors import (
    DisconnectedGraphError,
    EmbeddingFormatError,
    PointValidationError,
)
from horopca.geometry import poincare
from horopca.stats import center, frechet_mean

from conftest import random_ball_points


def test_dataset_validation():
    with pytest.raises(PointValidationError):
        Dataset(np.array([[1.0, 0.0]]))
    with pytest.raises(EmbeddingFormatError):
        Dataset(np.array([[0.1, 0.0]]), labels=["a", "b"])


def test_save_load_round_trip(tmp_path, rng):
    X = random_ball_points(rng, 20, 3, spread=1.5)
    path = tmp_path / "emb.csv"
    save_embeddings(path, X)
    loaded = load_embeddings(path)
    assert np.array_equal(loaded.points, X)
    # bit-exact second write
    path2 = tmp_path / "emb2.csv"
    save_embeddings(path2, loaded.points)
    assert path.read_bytes() == path2.read_bytes()


def test_load_two_point_file(tmp_path):
    path = tmp_path / "two.csv"
    path.write_text("0.0,0.0\n0.5,0.0\n")
    loaded = load_embeddings(path)
    assert loaded.n == 2 and loaded.dim == 2


def test_load_header_flag(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("x0,x1\n0.1,0.2\n")
    assert load_embeddings(path, header=True).n == 1
    with pytest.raises(EmbeddingFormatError):
        load_embeddings(path)


def test_load_rejects_boundary_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0.0,0.0\n1.0,0.0\n")
    with pytest.raises(PointValidationError) as err:
        load_embeddings(path)
    assert ":2" in str(err.value)


def test_load_rejects_ragged_rows(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("0.0,0.0\n0.1,0.2,0.3\n")
    with pytest.raises(EmbeddingFormatError) as err:
        load_embeddings(path)
    assert ":2" in str(err.value)


def test_generate_tiny_covariance_near_origin():
    ds = generate("tangent-gaussian", 50, 3, covariance=1e-12 * np.ones(3), seed=1)
    assert np.max(np.linalg.norm(ds.points, axis=1)) < 1e-4


def test_generate_law_of_large_numbers():
    ds = generate("tangent-gaussian", 1000, 2, covariance=np.ones(2), seed=7)
    mean = frechet_mean(ds.points).mean
    assert np.linalg.norm(mean) < 0.1


def test_generate_deterministic():
    a = generate("tangent-gaussian", 40, 3, seed=11)
    b = generate("tangent-gaussian", 40, 3, seed=11)
    assert np.array_equal(a.points, b.points)
    c = generate("tree-like", 40, 4, seed=11)
    d = generate("tree-like", 40, 4, seed=11)
    assert np.array_equal(c.points, d.points)
    assert c.n == 31  # largest complete binary tree with <= 40 nodes


def test_generate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        generate("tangent-gaussian", 10, 2, covariance=np.array([1.0, -1.0]))
    with pytest.raises(ValueError):
        generate("unknown-kind", 10, 2)


def test_graph_distances_path(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# a path graph\n1 2\n2 3\n")
    D, names = graph_distances(path)
    assert names == ["1", "2", "3"]
    assert D[0, 2] == 2.0 and D[0, 1] == 1.0


def test_graph_distances_weighted(tmp_path):
    path = tmp_path / "w.txt"
    path.write_text("a b 0.5\n")
    D, names = graph_distances(path)
    assert D[0, 1] == 0.5


def test_graph_distances_disconnected(tmp_path):
    path = tmp_path / "d.txt"
    path.write_text("a b\nc d\n")
    with pytest.raises(DisconnectedGraphError) as err:
        graph_distances(path)
    assert "components" in str(err.value)


def test_balanced_tree_depth3_siblings():
    D = balanced_tree_distances(3)
    assert D.shape == (7, 7)
    # BFS oracle over the heap-indexed tree
    def bfs(start, n=7):
        from collections import deque

        adj = {i: [] for i in range(n)}
        for child in range(1, n):
            adj[child].append((child - 1) // 2)
            adj[(child - 1) // 2].append(child)
        dist = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    oracle = bfs(3)
    for j in range(7):
        assert D[3, j] == oracle[j]
    # sibling leaves share a parent: distance 2
    assert D[3, 4] == 2.0


def test_distance_matrix_matches_pointwise(rng):
    X = random_ball_points(rng, 12, 3)
    D = distance_matrix(X)
    assert np.array_equal(D, D.T)
    assert np.all(np.diag(D) == 0.0)
    assert abs(D[2, 9] - poincare.distance(X[2], X[9])) < 1e-12


def test_distance_matrix_centering_invariance(rng):
    X = random_ball_points(rng, 15, 3)
    centered, _ = center(X)
    assert np.max(np.abs(distance_matrix(X) - distance_matrix(centered))) <= 1e-9


def test_distance_matrix_file_round_trip(tmp_path, rng):
    X = random_ball_points(rng, 8, 2)
    D = distance_matrix(X)
    path = tmp_path / "D.csv"
    save_distance_matrix(path, D)
    assert np.array_equal(load_distance_matrix(path), D)
