"""One-vs-rest linear SVM and the repeated stratified cross-validation harness.

A degree-1 polynomial kernel ``(x.z + c)`` gives an affine decision
function, so a primal linear model with a bias is all that is needed.  Each
binary problem is solved by dual coordinate descent on the hinge loss (see
:mod:`mwsn._core`), with the bias learned as the weight of a constant
feature.
"""
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import DegenerateLabelsError, InvalidInputError, StratificationError
from .features import DEFAULT_K, pca_fit, pca_transform

_MASK64 = (1 << 64) - 1


class ConvergenceWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SvmParams:
    C: float = 1.0
    max_iter: int = 10_000
    tol: float = 1e-6
    seed: int = 0
    bias_scale: float = 1.0


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Per-class weights ``W`` (``n_classes x k``) and biases ``b``."""

    classes: tuple
    W: np.ndarray
    b: np.ndarray
    params: SvmParams = field(default_factory=SvmParams)

    def decision_function(self, X):
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.W.shape[1]:
            raise InvalidInputError(
                f"X must have {self.W.shape[1]} columns, got shape {X.shape}"
            )
        return X @ self.W.T + self.b


def _class_seed(seed, index):
    return (int(seed) * 0x9E3779B1 + index + 1) & _MASK64


def train(X, y, params=None, **kwargs):
    """Train a one-vs-rest linear SVM.

    Parameters
    ----------
    X : (n, k) array_like
    y : sequence of labels
        At least two distinct values.  Classes are ordered by ``sorted``.
    params : SvmParams, optional
        Keyword arguments override individual fields.

    Returns
    -------
    LinearModel
    """
    params = params or SvmParams()
    if kwargs:
        params = SvmParams(**{**params.__dict__, **kwargs})
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise InvalidInputError(f"X must be 2D with at least 2 rows, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise InvalidInputError("X contains non-finite values")
    y = list(y)
    if len(y) != X.shape[0]:
        raise InvalidInputError(f"{len(y)} labels for {X.shape[0]} rows")
    classes = tuple(sorted(set(y)))
    if len(classes) < 2:
        raise DegenerateLabelsError(f"need at least two classes, got {classes}")

    Xa = np.hstack([X, np.full((X.shape[0], 1), params.bias_scale)])
    Xa = np.ascontiguousarray(Xa)
    labels = np.asarray([classes.index(v) for v in y])
    W = np.zeros((len(classes), X.shape[1]))
    b = np.zeros(len(classes))
    for c in range(len(classes)):
        target = np.where(labels == c, 1.0, -1.0)
        w, _, n_iter = _core.dcd_hinge(
            Xa, target, float(params.C), float(params.tol),
            int(params.max_iter), _class_seed(params.seed, c),
        )
        if n_iter >= params.max_iter:
            warnings.warn(
                f"solver hit max_iter={params.max_iter} for class {classes[c]!r}",
                ConvergenceWarning,
                stacklevel=2,
            )
        W[c] = w[:-1]
        b[c] = w[-1] * params.bias_scale
    return LinearModel(classes=classes, W=W, b=b, params=params)


def predict(model, X):
    """Arg-max class per row; ties go to the earliest class."""
    scores = model.decision_function(X)
    idx = np.argmax(scores, axis=1)
    return [model.classes[i] for i in idx]


def accuracy(y_true, y_pred):
    y_true = list(y_true)
    if not y_true:
        raise InvalidInputError("cannot score an empty set")
    return sum(a == b for a, b in zip(y_true, y_pred)) / len(y_true)


@dataclass(frozen=True)
class CvReport:
    """Accuracy per repeat (averaged over folds) plus per-fold detail."""

    accuracies: tuple
    fold_accuracies: tuple
    mean: float
    std: float
    seed: int

    def rows(self):
        """``(repeat, fold, accuracy)`` triples, 1-based indices."""
        return [
            (r + 1, f + 1, acc)
            for r, per_fold in enumerate(self.fold_accuracies)
            for f, acc in enumerate(per_fold)
        ]

    def summary(self):
        return (
            f"accuracy {self.mean:.4f} +/- {self.std:.4f} "
            f"over {len(self.accuracies)} repeats of {len(self.fold_accuracies[0])}-fold CV"
        )


def stratified_folds(y, folds, rng):
    """Split indices into ``folds`` groups, shuffling within each class."""
    y = list(y)
    by_class = {}
    for i, v in enumerate(y):
        by_class.setdefault(v, []).append(i)
    for label, idx in by_class.items():
        if len(idx) < folds:
            raise StratificationError(
                f"class {label!r} has {len(idx)} samples, fewer than {folds} folds"
            )
    parts = [[] for _ in range(folds)]
    for label in sorted(by_class):
        idx = np.asarray(by_class[label])
        idx = idx[rng.permutation(len(idx))]
        for f, chunk in enumerate(np.array_split(idx, folds)):
            parts[f].extend(chunk.tolist())
    return [np.sort(np.asarray(p, dtype=np.intp)) for p in parts]


def fit_and_score(X_train, y_train, X_test, y_test, pca_k=DEFAULT_K, params=None):
    """Fit PCA and the classifier on the training rows only; score the test rows."""
    if pca_k:
        pca = pca_fit(X_train, pca_k)
        X_train = pca_transform(pca, X_train)
        X_test = pca_transform(pca, X_test)
    model = train(X_train, y_train, params)
    return accuracy(y_test, predict(model, X_test))


def cross_validate(X, y, folds=2, repeats=10, pca_k=DEFAULT_K, seed=0, params=None):
    """Repeated stratified k-fold cross-validation.

    Every fold in turn is held out; PCA (``pca_k`` components, or none when
    falsy) and the classifier are fit on the remaining folds.  A repeat's
    accuracy is the mean over its folds.
    """
    X = np.asarray(X, dtype=np.float64)
    y = list(y)
    if X.ndim != 2 or len(y) != X.shape[0]:
        raise InvalidInputError(f"{len(y)} labels for feature matrix of shape {X.shape}")
    if folds < 2:
        raise StratificationError(f"folds must be >= 2, got {folds}")
    if len(set(y)) < 2:
        raise DegenerateLabelsError("need at least two classes")
    params = params or SvmParams(seed=seed)
    y_arr = np.asarray(y, dtype=object)

    per_repeat, per_fold = [], []
    for r in range(repeats):
        rng = np.random.default_rng([int(seed), r])
        parts = stratified_folds(y, folds, rng)
        accs = []
        for f, test_idx in enumerate(parts):
            train_idx = np.sort(np.concatenate([p for g, p in enumerate(parts) if g != f]))
            accs.append(
                fit_and_score(
                    X[train_idx], y_arr[train_idx].tolist(),
                    X[test_idx], y_arr[test_idx].tolist(),
                    pca_k=pca_k, params=params,
                )
            )
        per_fold.append(tuple(accs))
        per_repeat.append(float(np.mean(accs)))

    acc = np.asarray(per_repeat)
    std = float(acc.std(ddof=1)) if len(acc) > 1 else 0.0
    return CvReport(
        accuracies=tuple(per_repeat),
        fold_accuracies=tuple(per_fold),
        mean=float(acc.mean()),
        std=std,
        seed=int(seed),
    )
