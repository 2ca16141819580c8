"""Command-line front end.

Subcommands: generate, center, fit, transform, whiten, benchmark, plot,
distances. Reports are line-oriented `key=value` pairs (or JSON behind
--json) with frozen keys: method, k, distortion, frechet_variance,
distance_variance, seed, runtime_s. Exit codes: 0 success, 2 usage or
validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .benchmark import (
    BASE_METHODS,
    benchmark_cloud,
    benchmark_tree,
    format_table,
    make_reducer,
    reduce_dataset,
    report_to_dict,
    run_benchmark,
)
from .data import (
    Dataset,
    generate,
    graph_distances,
    load_distance_matrix,
    load_embeddings,
    save_distance_matrix,
    save_embeddings,
)
from .errors import HyperbolicError, NonConvergenceError
from .plotting import render_svg
from .serialization import load_model, save_model
from .stats import average_distortion, center, distance_variance, frechet_variance

REPORT_KEYS = ("method", "k", "distortion", "frechet_variance", "distance_variance", "seed", "runtime_s")


def _parse_value(text: str):
    lowered = text.strip()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(lowered)
        except ValueError:
            continue
    return lowered


def _read_config(path) -> dict:
    config = {}
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise HyperbolicError(f"config file: expected 'key = value' lines, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            config[key.replace("-", "_")] = _parse_value(value)
    return config


def _eff(args, config, name, default):
    """Effective option value: explicit flag > config file > default."""
    value = getattr(args, name, None)
    if value is None or value is False:
        if name in config:
            return config[name]
        if value is None:
            return default
    return value


def _emit_report(entries: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(entries, sort_keys=True))
        return
    for key in REPORT_KEYS:
        if key in entries:
            value = entries[key]
            print(f"{key}={repr(value) if isinstance(value, float) else value}")
    for key in sorted(set(entries) - set(REPORT_KEYS)):
        value = entries[key]
        print(f"{key}={repr(value) if isinstance(value, float) else value}")


def _report_entries(report) -> dict:
    raw = report_to_dict(report)
    return {
        "method": raw["method"],
        "k": raw["k"],
        "distortion": raw["average_distortion"],
        "frechet_variance": raw["explained_frechet_variance"],
        "distance_variance": raw["explained_distance_variance"],
        "seed": raw["seed"],
        "runtime_s": raw["runtime_seconds"],
    }


def _reducer_options(args, config) -> dict:
    return dict(
        restarts=int(_eff(args, config, "restarts", 5)),
        max_iter=int(_eff(args, config, "max_iter", 500)),
        learning_rate=float(_eff(args, config, "lr", 0.05)),
        tol=float(_eff(args, config, "tol", 1e-7)),
        legacy_log=bool(_eff(args, config, "legacy_log", False)),
    )


# --------------------------------------------------------------- commands


def cmd_generate(args, config) -> int:
    kind = _eff(args, config, "kind", "tangent-gaussian")
    n = int(_eff(args, config, "n", 100))
    dim = int(_eff(args, config, "dim", 2))
    seed = int(_eff(args, config, "seed", 0))
    cov_text = _eff(args, config, "cov", None)
    covariance = None
    if cov_text is not None:
        parts = [float(v) for v in str(cov_text).split(",")]
        covariance = parts[0] if len(parts) == 1 else np.array(parts)
    dataset = generate(kind, n, dim, covariance, seed=seed)
    save_embeddings(args.output, dataset)
    print(f"points={dataset.n}")
    print(f"dim={dataset.dim}")
    print(f"seed={seed}")
    return 0


def cmd_center(args, config) -> int:
    dataset = load_embeddings(args.input)
    centered, isometry = center(dataset.points)
    save_embeddings(args.output, Dataset(centered, dataset.labels))
    print(f"reflections={len(isometry.reflection_points)}")
    return 0


def cmd_distances(args, config) -> int:
    D, names = graph_distances(args.input)
    save_distance_matrix(args.output, D)
    print(f"vertices={len(names)}")
    return 0


def cmd_fit(args, config) -> int:
    method = _eff(args, config, "method", "horopca")
    k = int(_eff(args, config, "components", 2))
    seed = int(_eff(args, config, "seed", 0))
    noise = float(_eff(args, config, "noise", 0.0))
    options = _reducer_options(args, config)
    if args.distances:
        D = load_distance_matrix(args.input)
        if method != "hmds":
            raise HyperbolicError("--distances input is only supported with --method hmds")
        start = time.perf_counter()
        model = make_reducer("hmds", k, seed)
        out = model.fit_transform(D)
        runtime = time.perf_counter() - start
        entries = {
            "method": "hmds",
            "k": k,
            "distortion": model.max_relative_error_,
            "frechet_variance": frechet_variance(out),
            "distance_variance": distance_variance(out),
            "seed": seed,
            "runtime_s": runtime,
        }
    else:
        X = load_embeddings(args.input).points
        effective = f"{method}-noise" if noise > 0.0 and method in ("pga", "bsa") else method
        report, model, out = reduce_dataset(effective, X, k, seed, noise=noise, **options)
        entries = _report_entries(report)
    if bool(_eff(args, config, "strict", False)) and not getattr(model, "converged_", True):
        raise NonConvergenceError("fit did not converge and --strict was given")
    if args.output:
        save_model(args.output, model)
    if args.transformed:
        save_embeddings(args.transformed, out)
    _emit_report(entries, bool(_eff(args, config, "json", False)))
    return 0


def cmd_transform(args, config) -> int:
    model = load_model(args.model)
    if not hasattr(model, "transform"):
        raise HyperbolicError(f"{type(model).__name__} does not support out-of-sample transform")
    dataset = load_embeddings(args.input)
    start = time.perf_counter()
    out = model.transform(dataset.points)
    runtime = time.perf_counter() - start
    save_embeddings(args.output, Dataset(out, dataset.labels))
    entries = {
        "method": getattr(model, "method", type(model).__name__.lower()),
        "k": out.shape[1],
        "distortion": average_distortion(dataset.points, out),
        "seed": int(getattr(model, "seed", 0)),
        "runtime_s": runtime,
    }
    _emit_report(entries, bool(_eff(args, config, "json", False)))
    return 0


def cmd_whiten(args, config) -> int:
    model = load_model(args.model)
    if not hasattr(model, "fit_whitener"):
        raise HyperbolicError("whitening requires a horopca model")
    train = load_embeddings(args.train if args.train else args.input).points
    apply_to = load_embeddings(args.input).points
    model.fit_whitener(train)
    coords = model.whiten(apply_to)
    save_distance_matrix(args.output, coords)
    if args.save_model:
        save_model(args.save_model, model)
    print(f"rows={coords.shape[0]}")
    print(f"k={coords.shape[1]}")
    return 0


def cmd_benchmark(args, config) -> int:
    methods_text = _eff(args, config, "methods", ",".join(BASE_METHODS))
    methods = [m.strip() for m in str(methods_text).split(",") if m.strip()]
    k = int(_eff(args, config, "components", 2))
    n_seeds = int(_eff(args, config, "seeds", 5))
    base_seed = int(_eff(args, config, "seed", 0))
    noise = float(_eff(args, config, "noise", 0.0))
    n = int(_eff(args, config, "n", 160))
    which = _eff(args, config, "data", "both")
    options = _reducer_options(args, config)
    seeds = [base_seed + i for i in range(n_seeds)]
    if args.input:
        fixed, _ = center(load_embeddings(args.input).points)
        datasets = {"file": fixed}
        dataset_for_seed = None
    else:
        names = ("cloud", "tree") if which == "both" else (which,)
        datasets = {name: None for name in names}

        def dataset_for_seed(name, seed):
            return benchmark_cloud(seed, n=n) if name == "cloud" else benchmark_tree(seed)

    reports = run_benchmark(
        methods, k=k, seeds=seeds, noise=noise, datasets=datasets,
        dataset_for_seed=dataset_for_seed, **options,
    )
    if bool(_eff(args, config, "json", False)):
        print(json.dumps([report_to_dict(r) for r in reports], sort_keys=True))
    else:
        print(format_table(reports))
    return 0


def cmd_plot(args, config) -> int:
    dataset = load_embeddings(args.input)
    labels = dataset.labels
    if args.labels:
        with open(args.labels, "r", encoding="ascii") as fh:
            labels = [line.strip() for line in fh if line.strip()]
    points = dataset.points
    directions = None
    if args.model:
        model = load_model(args.model)
        if points.shape[1] != 2:
            if not hasattr(model, "transform"):
                raise HyperbolicError("model cannot transform; reduce the data first")
            points = model.transform(points)
        if hasattr(model, "components_"):
            comps = model.components_
            if comps.shape[1] == points.shape[1]:
                directions = comps
            else:
                from ._linalg import orthonormal_row_basis

                directions = comps @ orthonormal_row_basis(comps).T
    if points.shape[1] != 2:
        raise HyperbolicError("plotting needs 2-D points; pass a fitted K=2 model or reduce first")
    svg = render_svg(points, labels=labels, directions=directions,
                     size=int(_eff(args, config, "size", 480)))
    with open(args.output, "w", encoding="ascii") as fh:
        fh.write(svg)
    print(f"points={points.shape[0]}")
    return 0


# ----------------------------------------------------------------- parser


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horopca",
        description="Hyperbolic dimensionality reduction via horospherical projections.",
    )
    parser.add_argument("--config", default=None, help="key=value file with default options")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True)
        p.add_argument("--json", action="store_true")
        p.add_argument("--strict", action="store_true")
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("generate", help="write a synthetic dataset")
    p.add_argument("--kind", choices=("tangent-gaussian", "tree-like"), default=None)
    p.add_argument("-n", type=int, default=None)
    p.add_argument("-d", "--dim", type=int, default=None)
    p.add_argument("--cov", default=None, help="comma-separated covariance diagonal")
    p.add_argument("--output", required=True)
    common(p, needs_input=False)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("center", help="move the Frechet mean to the origin")
    p.add_argument("--output", required=True)
    common(p)
    p.set_defaults(func=cmd_center)

    p = sub.add_parser("distances", help="shortest-path matrix of an edge list")
    p.add_argument("--output", required=True)
    common(p)
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("fit", help="fit a reducer and write its model file")
    p.add_argument("--method", choices=BASE_METHODS, default=None)
    p.add_argument("-k", "--components", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--noise", type=float, default=None, metavar="SIGMA")
    p.add_argument("--legacy-log", action="store_true", dest="legacy_log")
    p.add_argument("--distances", action="store_true", help="input is a distance matrix (hmds)")
    p.add_argument("--output", default=None, help="model file")
    p.add_argument("--transformed", default=None, help="also write reduced points")
    common(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("transform", help="apply a fitted model to a dataset")
    p.add_argument("--model", required=True)
    p.add_argument("--output", required=True)
    common(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("whiten", help="normalized Busemann coordinates")
    p.add_argument("--model", required=True)
    p.add_argument("--train", default=None, help="training set (defaults to --input)")
    p.add_argument("--output", required=True)
    p.add_argument("--save-model", default=None, dest="save_model")
    common(p)
    p.set_defaults(func=cmd_whiten)

    p = sub.add_parser("benchmark", help="compare methods over seeds")
    p.add_argument("--methods", default=None)
    p.add_argument("-k", "--components", type=int, default=None)
    p.add_argument("--seeds", type=int, default=None, help="number of seeds")
    p.add_argument("--noise", type=float, default=None, metavar="SIGMA")
    p.add_argument("--data", choices=("cloud", "tree", "both"), default=None)
    p.add_argument("-n", type=int, default=None, help="cloud size")
    p.add_argument("--input", default=None, help="benchmark a dataset file instead")
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=None, dest="max_iter")
    p.add_argument("--lr", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--legacy-log", action="store_true", dest="legacy_log")
    p.add_argument("--json", action="store_true")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("plot", help="render a 2-D dataset as SVG")
    p.add_argument("--output", required=True)
    p.add_argument("--labels", default=None)
    p.add_argument("--model", default=None)
    p.add_argument("--size", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = _read_config(args.config) if args.config else {}
        return args.func(args, config)
    except NonConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except HyperbolicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
