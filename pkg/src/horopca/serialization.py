"""Plain-text model files with bit-exact round trips.

Key = value lines; floats are written with shortest round-trip decimal
precision (repr), arrays as comma-joined rows. The method tag selects the
estimator class on load.
"""

from __future__ import annotations

import numpy as np

from .baselines import (
    BarycentricSubspaceAnalysis,
    EuclideanPCA,
    HyperbolicMDS,
    PrincipalGeodesicAnalysis,
    TangentPCA,
)
from .errors import EmbeddingFormatError
from .horopca import HoroPCA
from .projections import ComponentSet
from .stats import CenteringIsometry

FORMAT_TAG = "hyperbolic-reduction-model/1"

_CLASSES = {
    "horopca": HoroPCA,
    "pca": EuclideanPCA,
    "tpca": TangentPCA,
    "pga": PrincipalGeodesicAnalysis,
    "bsa": BarycentricSubspaceAnalysis,
    "hmds": HyperbolicMDS,
}


def method_tag(model) -> str:
    for tag, cls in _CLASSES.items():
        if type(model) is cls:
            return tag
    raise EmbeddingFormatError(f"cannot serialize models of type {type(model).__name__}")


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _fmt_vector(vec) -> str:
    return ",".join(repr(float(v)) for v in np.asarray(vec, dtype=float))


def _parse_vector(text: str) -> np.ndarray:
    return np.array([float(v) for v in text.split(",")]) if text else np.array([])


def save_model(path, model) -> None:
    tag = method_tag(model)
    lines = [f"format = {FORMAT_TAG}", f"method = {tag}"]
    params = model.get_params()
    for key in sorted(params):
        lines.append(f"config.{key} = {_fmt(params[key])}")
    if tag == "hmds":
        if not hasattr(model, "embedding_"):
            raise EmbeddingFormatError("hmds model is not fitted")
        lines.append(f"dim = {model.embedding_.shape[1]}")
        lines.append(f"k = {int(model.n_components)}")
        lines.append(f"max_relative_error = {_fmt(model.max_relative_error_)}")
        lines.append(f"rms_error = {_fmt(model.rms_error_)}")
        for i, row in enumerate(model.embedding_):
            lines.append(f"point.{i} = {_fmt_vector(row)}")
    else:
        rows = model.components_ if tag == "horopca" else model.basis_
        lines.append(f"dim = {int(model.n_features_in_)}")
        lines.append(f"k = {rows.shape[0]}")
        lines.append(f"base = {_fmt_vector(model.base_point_)}")
        for i, row in enumerate(rows):
            lines.append(f"component.{i} = {_fmt_vector(row)}")
        if tag == "horopca":
            for i, value in enumerate(model.explained_):
                lines.append(f"explained.{i} = {_fmt(value)}")
            if getattr(model, "centering_", None) is not None and not model.centering_.is_identity:
                for i, mu in enumerate(model.centering_.reflection_points):
                    lines.append(f"centering.{i} = {_fmt_vector(mu)}")
            if model.whiten_mean_ is not None:
                lines.append(f"whiten.mean = {_fmt_vector(model.whiten_mean_)}")
                lines.append(f"whiten.scale = {_fmt_vector(model.whiten_scale_)}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_config(value: str):
    if value == "true":
        return True
    if value == "false":
        return False
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        return value


def load_model(path):
    entries: dict[str, str] = {}
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if "=" not in line:
                raise EmbeddingFormatError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            entries[key] = value
    if entries.get("format") != FORMAT_TAG:
        raise EmbeddingFormatError(f"{path}: unknown model format")
    tag = entries.get("method")
    if tag not in _CLASSES:
        raise EmbeddingFormatError(f"{path}: unknown method tag {tag!r}")
    params = {
        key[len("config."):]: _parse_config(value)
        for key, value in entries.items()
        if key.startswith("config.")
    }
    model = _CLASSES[tag](**params)
    k = int(entries["k"])
    if tag == "hmds":
        n_rows = sum(1 for key in entries if key.startswith("point."))
        model.embedding_ = np.vstack([_parse_vector(entries[f"point.{i}"]) for i in range(n_rows)])
        model.max_relative_error_ = float(entries["max_relative_error"])
        model.rms_error_ = float(entries["rms_error"])
        model.n_features_in_ = n_rows
        return model
    rows = np.vstack([_parse_vector(entries[f"component.{i}"]) for i in range(k)])
    model.n_features_in_ = int(entries["dim"])
    model.base_point_ = _parse_vector(entries["base"])
    if tag == "horopca":
        model.components_ = rows
        model.explained_ = [float(entries[f"explained.{i}"]) for i in range(k)]
        n_refl = sum(1 for key in entries if key.startswith("centering."))
        model.centering_ = None
        if n_refl:
            model.centering_ = CenteringIsometry(
                [_parse_vector(entries[f"centering.{i}"]) for i in range(n_refl)]
            )
        if "whiten.mean" in entries:
            model.whiten_mean_ = _parse_vector(entries["whiten.mean"])
            model.whiten_scale_ = _parse_vector(entries["whiten.scale"])
        else:
            model.whiten_mean_ = None
            model.whiten_scale_ = None
        model._component_set = ComponentSet(rows)
        model.objective_trace_ = []
    else:
        model.basis_ = rows
    return model
