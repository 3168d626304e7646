"""Classifiers and regressors: ridge multinomial logistic regression, ridge
linear regression, and the majority baseline.

Training is deterministic: identical inputs and options produce bit-identical
models. The logistic loss is the negative log-likelihood plus a ridge penalty
on non-intercept weights; the last class's weight row is pinned to zero to
remove the softmax gauge freedom. Optimization is damped Newton with
backtracking line search, stopped when the gradient sup-norm drops below the
tolerance.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .levels import CefrLevel

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Scaler:
    """Per-dimension z-score standardizer (population std; zero std -> 1)."""

    means: np.ndarray
    stds: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray) -> "Scaler":
        X = np.asarray(X, dtype=np.float64)
        means = X.mean(axis=0)
        stds = X.std(axis=0)
        stds = np.where(stds == 0.0, 1.0, stds)
        return cls(means=means, stds=stds)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=np.float64) - self.means) / self.stds


@dataclass(frozen=True)
class TrainingInfo:
    iterations: int
    converged: bool
    final_nll: float


def _check_training_input(X: np.ndarray, y: list) -> None:
    if X.ndim != 2 or X.shape[0] != len(y):
        raise ValueError(f"feature matrix shape {X.shape} does not match {len(y)} labels")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 training instances")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature matrix contains non-finite values")


def _with_intercept(X: np.ndarray) -> np.ndarray:
    return np.hstack([X, np.ones((X.shape[0], 1))])


def nll_and_gradient(
    free_weights: np.ndarray,
    X1: np.ndarray,
    y_idx: np.ndarray,
    ridge: float,
) -> tuple[float, np.ndarray]:
    """Penalized NLL and its gradient for the free (K-1 x D+1) weight block.

    ``X1`` carries the intercept column last; the intercept is unpenalized.
    Exposed so the gradient can be checked against finite differences.
    """
    n, d1 = X1.shape
    W = free_weights.reshape(-1, d1)
    scores = X1 @ W.T                          # (n, K-1)
    logits = np.hstack([scores, np.zeros((n, 1))])
    m = logits.max(axis=1, keepdims=True)
    lse = m[:, 0] + np.log(np.exp(logits - m).sum(axis=1))
    nll = float(np.sum(lse - logits[np.arange(n), y_idx]))
    nll += ridge * float(np.sum(W[:, :-1] ** 2))
    P = np.exp(logits - lse[:, None])          # (n, K)
    Y = np.zeros_like(P)
    Y[np.arange(n), y_idx] = 1.0
    G = (P[:, :-1] - Y[:, :-1]).T @ X1         # (K-1, D+1)
    G[:, :-1] += 2.0 * ridge * W[:, :-1]
    return nll, G.ravel()


def _hessian(free_weights: np.ndarray, X1: np.ndarray, y_idx: np.ndarray, ridge: float) -> np.ndarray:
    n, d1 = X1.shape
    W = free_weights.reshape(-1, d1)
    k1 = W.shape[0]
    scores = X1 @ W.T
    logits = np.hstack([scores, np.zeros((n, 1))])
    m = logits.max(axis=1, keepdims=True)
    P = np.exp(logits - m)
    P /= P.sum(axis=1, keepdims=True)
    H = np.empty((k1, d1, k1, d1))
    for a in range(k1):
        for b in range(k1):
            w = P[:, a] * ((1.0 if a == b else 0.0) - P[:, b])
            H[a, :, b, :] = X1.T @ (X1 * w[:, None])
    H = H.reshape(k1 * d1, k1 * d1)
    penalty = np.zeros(k1 * d1)
    for a in range(k1):
        penalty[a * d1 : (a + 1) * d1 - 1] = 2.0 * ridge
    H[np.diag_indices_from(H)] += penalty
    return H


@dataclass(frozen=True)
class MlrModel:
    """Multinomial logistic regression with a built-in standardizer.

    ``weights`` is K x (D+1), one row per label in ``labels`` order, last
    column the intercept; the final row is identically zero.
    """

    labels: tuple[CefrLevel, ...]
    weights: np.ndarray
    ridge: float
    scaler: Scaler
    feature_names: tuple[str, ...]
    training: TrainingInfo
    format_version: int = FORMAT_VERSION

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        """Label probabilities for one vector or a matrix of rows."""
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X = x[None, :] if single else x
        if X.shape[1] != self.n_features:
            raise ValueError(
                f"expected {self.n_features} features, got {X.shape[1]}"
            )
        X1 = _with_intercept(self.scaler.transform(X))
        scores = X1 @ self.weights.T
        scores -= scores.max(axis=1, keepdims=True)
        P = np.exp(scores)
        P /= P.sum(axis=1, keepdims=True)
        return P[0] if single else P

    def predict_label(self, x: np.ndarray) -> CefrLevel:
        """Most probable label; exact ties resolve to the lower level."""
        probs = self.predict_proba(np.asarray(x, dtype=np.float64))
        if probs.ndim != 1:
            raise ValueError("predict_label takes a single feature vector")
        return self.labels[int(np.argmax(probs))]


def train_mlr(
    X: np.ndarray,
    y: list[CefrLevel],
    ridge: float = 1e-8,
    tol: float = 1e-6,
    max_iter: int = 500,
    feature_names: tuple[str, ...] | None = None,
) -> MlrModel:
    """Fit the ridge-penalized multinomial logistic regression.

    Converges when the gradient sup-norm falls below ``tol``; hitting
    ``max_iter`` first issues a warning and flags the model as
    non-converged.
    """
    X = np.asarray(X, dtype=np.float64)
    _check_training_input(X, y)
    labels = tuple(sorted(set(y)))
    if len(labels) < 2:
        raise ValueError("training data must contain at least 2 distinct labels")
    if ridge < 0:
        raise ValueError("ridge coefficient must be >= 0")
    label_pos = {label: i for i, label in enumerate(labels)}
    y_idx = np.array([label_pos[label] for label in y], dtype=np.intp)
    scaler = Scaler.fit(X)
    X1 = _with_intercept(scaler.transform(X))
    n, d1 = X1.shape
    k1 = len(labels) - 1

    w = np.zeros(k1 * d1)
    value, grad = nll_and_gradient(w, X1, y_idx, ridge)
    iterations = 0
    converged = np.max(np.abs(grad)) < tol
    while not converged and iterations < max_iter:
        iterations += 1
        H = _hessian(w, X1, y_idx, ridge)
        try:
            step = np.linalg.solve(H, -grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, -grad, rcond=None)[0]
        if not np.all(np.isfinite(step)) or grad @ step >= 0:
            step = -grad  # fall back to steepest descent on a bad system
        # Backtracking line search (Armijo).
        t = 1.0
        slope = grad @ step
        while t > 1e-12:
            new_value, new_grad = nll_and_gradient(w + t * step, X1, y_idx, ridge)
            if new_value <= value + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            break  # no progress possible at float resolution
        w = w + t * step
        value, grad = new_value, new_grad
        converged = np.max(np.abs(grad)) < tol
    if not converged:
        warnings.warn(
            f"logistic training stopped after {iterations} iterations without "
            f"reaching gradient tolerance {tol}",
            RuntimeWarning,
            stacklevel=2,
        )
    weights = np.vstack([w.reshape(k1, d1), np.zeros((1, d1))])
    if feature_names is None:
        feature_names = tuple(f"x{i + 1}" for i in range(X.shape[1]))
    if len(feature_names) != X.shape[1]:
        raise ValueError("feature_names length does not match feature dimension")
    return MlrModel(
        labels=labels,
        weights=weights,
        ridge=float(ridge),
        scaler=scaler,
        feature_names=tuple(feature_names),
        training=TrainingInfo(iterations=iterations, converged=bool(converged), final_nll=value),
    )


@dataclass(frozen=True)
class LinRegModel:
    """Ridge linear regression on the ordinal level encoding (A1=1 .. C1=5)."""

    weights: np.ndarray  # D coefficients + intercept, on standardized inputs
    scaler: Scaler

    def predict(self, x: np.ndarray) -> np.ndarray | float:
        x = np.asarray(x, dtype=np.float64)
        single = x.ndim == 1
        X1 = _with_intercept(self.scaler.transform(x[None, :] if single else x))
        pred = X1 @ self.weights
        return float(pred[0]) if single else pred


def train_linreg(X: np.ndarray, y: list[CefrLevel], ridge: float = 0.0) -> LinRegModel:
    """Closed-form ridge least squares; the intercept is unpenalized."""
    X = np.asarray(X, dtype=np.float64)
    _check_training_input(X, y)
    if ridge < 0:
        raise ValueError("ridge coefficient must be >= 0")
    targets = np.array([float(int(level)) for level in y])
    scaler = Scaler.fit(X)
    X1 = _with_intercept(scaler.transform(X))
    d1 = X1.shape[1]
    penalty = np.eye(d1) * (2.0 * ridge)
    penalty[-1, -1] = 0.0
    weights = np.linalg.solve(X1.T @ X1 + penalty, X1.T @ targets)
    return LinRegModel(weights=weights, scaler=scaler)


@dataclass(frozen=True)
class MajorityModel:
    """Predicts the most frequent training label, ties to the lower level."""

    majority: CefrLevel
    labels: tuple[CefrLevel, ...]

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        onehot = np.zeros(len(self.labels))
        onehot[self.labels.index(self.majority)] = 1.0
        if x.ndim <= 1:
            return onehot
        return np.tile(onehot, (x.shape[0], 1))

    def predict_label(self, x: np.ndarray) -> CefrLevel:
        return self.majority


def train_majority(y: list[CefrLevel]) -> MajorityModel:
    if len(y) == 0:
        raise ValueError("cannot take the majority of zero labels")
    labels = tuple(sorted(set(y)))
    counts = {label: 0 for label in labels}
    for label in y:
        counts[label] += 1
    best = labels[0]
    for label in labels[1:]:
        if counts[label] > counts[best]:
            best = label
    return MajorityModel(majority=best, labels=labels)


def save_model(model: MlrModel, sink: str | Path) -> None:
    """Write the model as a versioned JSON document (full float precision)."""
    doc = {
        "format_version": model.format_version,
        "labels": [str(label) for label in model.labels],
        "feature_names": list(model.feature_names),
        "ridge": model.ridge,
        "scaler": {
            "means": model.scaler.means.tolist(),
            "stds": model.scaler.stds.tolist(),
        },
        "weights": model.weights.tolist(),
        "training": {
            "iterations": model.training.iterations,
            "converged": model.training.converged,
            "final_nll": model.training.final_nll,
        },
    }
    Path(sink).write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def load_model(source: str | Path) -> MlrModel:
    """Read a model file; the stored numbers are the source of truth."""
    try:
        doc = json.loads(Path(source).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"unreadable model file: {exc}") from None
    try:
        version = doc["format_version"]
        if version != FORMAT_VERSION:
            raise ModelFormatError(
                f"unsupported format_version {version} (this build reads {FORMAT_VERSION})"
            )
        labels = tuple(CefrLevel[name] for name in doc["labels"])
        training = doc["training"]
        model = MlrModel(
            labels=labels,
            weights=np.asarray(doc["weights"], dtype=np.float64),
            ridge=float(doc["ridge"]),
            scaler=Scaler(
                means=np.asarray(doc["scaler"]["means"], dtype=np.float64),
                stds=np.asarray(doc["scaler"]["stds"], dtype=np.float64),
            ),
            feature_names=tuple(doc["feature_names"]),
            training=TrainingInfo(
                iterations=int(training["iterations"]),
                converged=bool(training["converged"]),
                final_nll=float(training["final_nll"]),
            ),
            format_version=int(version),
        )
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"model file is missing fields: {exc}") from None
    if model.weights.ndim != 2 or model.weights.shape[0] != len(labels):
        raise ModelFormatError("weight matrix shape does not match the label list")
    return model
