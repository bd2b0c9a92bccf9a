"""PCA compression of scattering feature vectors."""
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, InvalidKError

DEFAULT_K = 30


def as_feature_matrix(X, name="X"):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
        raise InvalidInputError(f"{name} must be a non-empty 2D matrix, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError(f"{name} contains non-finite values")
    return X


@dataclass(frozen=True, eq=False)
class PcaModel:
    """Mean vector, ``k x d`` orthonormal component rows and their variances."""

    mean: np.ndarray
    components: np.ndarray
    explained: np.ndarray

    @property
    def k(self):
        return self.components.shape[0]

    @property
    def d(self):
        return self.components.shape[1]


def _orient(components):
    # Largest-magnitude entry positive; argmax picks the lowest index on ties.
    idx = np.argmax(np.abs(components), axis=1)
    signs = np.sign(components[np.arange(len(components)), idx])
    signs[signs == 0] = 1.0
    return components * signs[:, None]


def _complete(basis, d, k):
    """Extend orthonormal rows ``basis`` to ``k`` rows with Gram-Schmidt."""
    rows = list(basis)
    for e in range(d):
        if len(rows) == k:
            break
        v = np.zeros(d)
        v[e] = 1.0
        for _ in range(2):
            for r in rows:
                v -= (r @ v) * r
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            rows.append(v / norm)
    return np.array(rows)


def pca_fit(X, k=DEFAULT_K):
    """Fit the top-``k`` principal subspace of ``X`` (rows are samples).

    Variances use the ``n - 1`` normalization.  When ``d > n`` the
    decomposition runs on the ``n x n`` Gram matrix of the centered data and
    the directions are mapped back to feature space; directions with zero
    variance are completed to an orthonormal set.

    Raises
    ------
    InvalidKError
        Unless ``1 <= k <= min(n - 1, d)``.
    """
    X = as_feature_matrix(X)
    n, d = X.shape
    if n < 2:
        raise InvalidKError(f"PCA needs at least 2 samples, got {n}")
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool) or not 1 <= k <= min(n - 1, d):
        raise InvalidKError(f"k={k!r} outside 1..{min(n - 1, d)}")

    mean = X.mean(axis=0)
    Xc = X - mean
    if d <= n:
        _, sv, vt = np.linalg.svd(Xc, full_matrices=True)
        sv = np.concatenate([sv, np.zeros(d - len(sv))])
        components = vt[:k]
        variances = sv[:k] ** 2 / (n - 1)
    else:
        gram = Xc @ Xc.T
        evals, evecs = np.linalg.eigh(gram)
        order = np.argsort(evals)[::-1][:k]
        evals = np.clip(evals[order], 0.0, None)
        evecs = evecs[:, order]
        tiny = max(evals[0], 0.0) * n * np.finfo(float).eps * 10
        good = evals > tiny
        dirs = np.empty((0, d))
        if good.any():
            dirs = (Xc.T @ evecs[:, good]).T
            dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
            # re-orthonormalize against rounding in the back-mapping
            q, r = np.linalg.qr(dirs.T)
            dirs = (q * np.where(np.diag(r) < 0, -1.0, 1.0)).T
        components = _complete(dirs, d, k)
        variances = np.where(good, evals, 0.0) / (n - 1)

    return PcaModel(
        mean=mean,
        components=np.ascontiguousarray(_orient(components)),
        explained=np.asarray(variances, dtype=np.float64),
    )


def pca_transform(model, X):
    """Project rows of ``X`` onto the model: ``(X - mean) @ components.T``."""
    X = as_feature_matrix(X)
    if X.shape[1] != model.d:
        raise InvalidInputError(f"X has {X.shape[1]} columns, model expects {model.d}")
    return (X - model.mean) @ model.components.T


def pca_inverse(model, Z):
    """Map PCA coordinates back to feature space."""
    Z = np.asarray(Z, dtype=np.float64)
    if Z.ndim != 2 or Z.shape[1] != model.k:
        raise InvalidInputError(f"coordinates must have {model.k} columns, got shape {Z.shape}")
    return Z @ model.components + model.mean
