"""Small shared linear-algebra helpers."""

from __future__ import annotations

import numpy as np


def svd_directions(V: np.ndarray, k: int) -> np.ndarray:
    """Top-k right singular directions of mean-centered rows, sign-fixed.

    Deterministic orientation: the largest-magnitude entry of each
    direction is made positive.
    """
    centered = V - V.mean(axis=0, keepdims=True)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    basis = vt[: min(k, vt.shape[0])]
    idx = np.argmax(np.abs(basis), axis=1)
    signs = np.sign(basis[np.arange(basis.shape[0]), idx])
    signs[signs == 0.0] = 1.0
    return basis * signs[:, None]


def orthonormal_row_basis(rows: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis (rows) of the row span via QR."""
    q, r = np.linalg.qr(rows.T)
    signs = np.sign(np.diag(r))
    signs[signs == 0.0] = 1.0
    return (q * signs).T
