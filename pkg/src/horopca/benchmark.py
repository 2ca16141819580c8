"""End-to-end reduction runs and the desk-scale comparison benchmark."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from .baselines import (
    BarycentricSubspaceAnalysis,
    EuclideanPCA,
    HyperbolicMDS,
    PrincipalGeodesicAnalysis,
    TangentPCA,
    perturb_base,
)
from .data import balanced_tree_distances, generate
from .horopca import HoroPCA
from .stats import average_distortion, center, distance_variance, frechet_variance

BASE_METHODS = ("pca", "tpca", "pga", "bsa", "horopca", "hmds")

# Anisotropic tangent covariance for the synthetic cloud: two dominant
# directions plus substantial residual mass, deep enough into the space
# that flat tangent approximations pay for the curvature.
CLOUD_STDS = np.array([2.4, 1.6, 1.0, 1.0, 0.9, 0.9, 0.8, 0.8, 0.8, 0.8])


@dataclass(frozen=True)
class ReductionReport:
    """Per-run metrics in the layout of the comparison tables."""

    method: str
    k: int
    average_distortion: float
    explained_frechet_variance: float
    explained_distance_variance: float
    runtime_seconds: float
    seed: int
    dataset: str = ""

    def __post_init__(self):
        if self.average_distortion < 0 or self.explained_frechet_variance < 0:
            raise ValueError("metrics must be nonnegative")


def make_reducer(
    method: str,
    k: int,
    seed: int,
    restarts: int = 5,
    max_iter: int = 500,
    learning_rate: float = 0.05,
    tol: float = 1e-7,
    legacy_log: bool = False,
    gradient: str = "analytic",
):
    """Instantiate the reducer behind a CLI method tag."""
    if method == "pca":
        return EuclideanPCA(n_components=k)
    if method == "tpca":
        return TangentPCA(n_components=k, legacy_log=legacy_log)
    if method in ("pga", "pga-noise"):
        cls = PrincipalGeodesicAnalysis
    elif method in ("bsa", "bsa-noise"):
        cls = BarycentricSubspaceAnalysis
    elif method == "horopca":
        return HoroPCA(
            n_components=k,
            restarts=restarts,
            max_iter=max_iter,
            learning_rate=learning_rate,
            tol=tol,
            seed=seed,
            gradient=gradient,
            auto_center=True,
        )
    elif method == "hmds":
        return HyperbolicMDS(n_components=k)
    else:
        raise ValueError(f"unknown method: {method!r}")
    return cls(
        n_components=k,
        restarts=restarts,
        max_iter=max_iter,
        learning_rate=learning_rate,
        tol=tol,
        seed=seed,
        gradient=gradient,
    )


def reduce_dataset(
    method: str,
    X: np.ndarray,
    k: int,
    seed: int,
    noise: float = 0.1,
    dataset: str = "",
    **reducer_kwargs,
):
    """Fit one method on centered data and report reduction metrics.

    Returns (report, model, reduced points). The *-noise variants fit the
    plain method, then perturb the base point with the given sigma.
    """
    from .data import distance_matrix

    start = time.perf_counter()
    model = make_reducer(method, k, seed, **reducer_kwargs)
    if method == "hmds":
        out = model.fit_transform(distance_matrix(X))
    else:
        model.fit(X)
        if method.endswith("-noise"):
            model = perturb_base(model, noise, seed)
        out = model.transform(X)
    runtime = time.perf_counter() - start
    report = ReductionReport(
        method=method,
        k=int(k),
        average_distortion=average_distortion(X, out),
        explained_frechet_variance=frechet_variance(out),
        explained_distance_variance=distance_variance(out),
        runtime_seconds=runtime,
        seed=int(seed),
        dataset=dataset,
    )
    return report, model, out


def benchmark_cloud(seed: int, n: int = 160, dim: int = 10) -> np.ndarray:
    """Centered anisotropic tangent-Gaussian cloud."""
    stds = CLOUD_STDS[:dim] if dim <= CLOUD_STDS.size else np.resize(CLOUD_STDS, dim)
    points = generate("tangent-gaussian", n, dim, stds**2, seed=seed).points
    centered, _ = center(points)
    return centered


def benchmark_tree(seed: int = 0, dim: int = 10, depth: int = 7, scale: float = 1.0) -> np.ndarray:
    """Tree shortest-path metric embedded into H^dim by hMDS, centered.

    Edge weights are jittered around 1 so that symmetric leaves stay
    distinguishable after the rank-dim spectral truncation.
    """
    rng = np.random.default_rng([int(seed), 0x7E])
    weights = rng.uniform(0.75, 1.25, size=2**depth - 2)
    D = balanced_tree_distances(depth, weights) * scale
    points = HyperbolicMDS(n_components=dim).fit_transform(D)
    centered, _ = center(points)
    return centered


def run_benchmark(
    methods,
    k: int = 2,
    seeds=range(5),
    noise: float = 0.0,
    datasets: dict[str, np.ndarray] | None = None,
    dataset_for_seed=None,
    **reducer_kwargs,
) -> list[ReductionReport]:
    """Run a method set over seeds and datasets, expanding noise variants.

    `datasets` maps names to fixed centered arrays; `dataset_for_seed`
    optionally maps (name, seed) -> array for per-seed regeneration.
    """
    methods = list(methods)
    if noise > 0.0:
        for tag in ("pga", "bsa"):
            if tag in methods and f"{tag}-noise" not in methods:
                methods.append(f"{tag}-noise")
    if datasets is None:
        datasets = {"cloud": None, "tree": None}
    reports = []
    for name, fixed in datasets.items():
        for seed in seeds:
            if dataset_for_seed is not None:
                X = dataset_for_seed(name, seed)
            elif fixed is None:
                X = benchmark_cloud(seed) if name != "tree" else benchmark_tree(seed)
            else:
                X = fixed
            for method in methods:
                report, _, _ = reduce_dataset(
                    method, X, k, seed, noise=noise, dataset=name, **reducer_kwargs
                )
                reports.append(report)
    return reports


def summarize(reports) -> dict:
    """Mean and standard deviation per (dataset, method) and metric."""
    metrics = ("average_distortion", "explained_frechet_variance", "explained_distance_variance")
    groups: dict[tuple[str, str], list[ReductionReport]] = {}
    for report in reports:
        groups.setdefault((report.dataset, report.method), []).append(report)
    summary = {}
    for key, rows in groups.items():
        entry = {}
        for metric in metrics:
            values = np.array([getattr(r, metric) for r in rows])
            entry[metric] = (float(values.mean()), float(values.std()))
        entry["runs"] = len(rows)
        summary[key] = entry
    return summary


def format_table(reports) -> str:
    """Plain-text table: one row per (dataset, method), mean +/- std."""
    summary = summarize(reports)
    header = (
        f"{'dataset':<10} {'method':<10} {'distortion':>22} "
        f"{'frechet_var':>22} {'distance_var':>22}"
    )
    rows = [header, "-" * len(header)]
    for (dataset, method) in sorted(summary):
        entry = summary[(dataset, method)]
        cells = [
            f"{entry[m][0]:.4f} +/- {entry[m][1]:.4f}"
            for m in (
                "average_distortion",
                "explained_frechet_variance",
                "explained_distance_variance",
            )
        ]
        rows.append(f"{dataset:<10} {method:<10} {cells[0]:>22} {cells[1]:>22} {cells[2]:>22}")
    return "\n".join(rows)


def report_to_dict(report: ReductionReport) -> dict:
    return asdict(report)
