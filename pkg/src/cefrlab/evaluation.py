"""Cross-validation, confusion analysis, metrics, and distribution tables.

All evaluation here pools held-out predictions from every fold into a single
confusion matrix and report, so k-fold results are directly comparable to a
one-shot evaluation. Adjacent accuracy treats a miss by one proficiency
level as correct, which matters for an ordinal scale.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .corpus import Document
from .features import extract_sentence_features, select_feature_group
from .levels import CLASSIFICATION_LEVELS, CefrLevel


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with gold labels on rows and predictions on columns."""

    labels: tuple[CefrLevel, ...]
    counts: np.ndarray

    @classmethod
    def from_pairs(
        cls,
        golds: Sequence[CefrLevel],
        preds: Sequence[CefrLevel],
        labels: Sequence[CefrLevel] | None = None,
    ) -> "ConfusionMatrix":
        if len(golds) != len(preds):
            raise ValueError("golds and predictions differ in length")
        if labels is None:
            labels = sorted(set(golds) | set(preds))
        labels = tuple(labels)
        pos = {label: i for i, label in enumerate(labels)}
        counts = np.zeros((len(labels), len(labels)), dtype=np.int64)
        for gold, pred in zip(golds, preds):
            counts[pos[gold], pos[pred]] += 1
        return cls(labels=labels, counts=counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f_score: float
    support: int


@dataclass(frozen=True)
class MetricsReport:
    n: int
    accuracy: float
    adjacent_accuracy: float
    per_class: dict[CefrLevel, ClassScores]
    weighted_f: float
    macro_f: float
    rmse: float | None = None  # probability-based; absent for matrix-only reports


def matrix_metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Accuracy, adjacent accuracy and F-scores from a confusion matrix.

    Undefined precision/recall (zero denominators) score 0; the headline F
    is support-weighted, with the macro mean alongside.
    """
    counts = cm.counts
    total = int(counts.sum())
    if total == 0:
        raise ValueError("empty confusion matrix")
    ordinals = np.array([int(label) for label in cm.labels])
    adjacent_mask = np.abs(ordinals[:, None] - ordinals[None, :]) <= 1
    accuracy = float(np.trace(counts) / total)
    adjacent = float(counts[adjacent_mask].sum() / total)
    per_class: dict[CefrLevel, ClassScores] = {}
    weighted = 0.0
    macro = 0.0
    for i, label in enumerate(cm.labels):
        support = int(counts[i].sum())
        predicted = int(counts[:, i].sum())
        tp = int(counts[i, i])
        precision = tp / predicted if predicted else 0.0
        recall = tp / support if support else 0.0
        f_score = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        per_class[label] = ClassScores(precision, recall, f_score, support)
        weighted += support * f_score
        macro += f_score
    return MetricsReport(
        n=total,
        accuracy=accuracy,
        adjacent_accuracy=adjacent,
        per_class=per_class,
        weighted_f=weighted / total,
        macro_f=macro / len(cm.labels),
    )


def rmse_prob(probs: np.ndarray, gold_onehot: np.ndarray) -> float:
    """Root mean squared error over probability vectors vs one-hot golds.

    The mean runs over all N x K cells, so a perfect one-hot prediction set
    scores 0 and uniform five-class predictions score 0.4.
    """
    probs = np.asarray(probs, dtype=np.float64)
    gold_onehot = np.asarray(gold_onehot, dtype=np.float64)
    if probs.shape != gold_onehot.shape:
        raise ValueError("probability and gold matrices differ in shape")
    return float(np.sqrt(np.mean((probs - gold_onehot) ** 2)))


def pearson(predictions: Sequence[float], golds: Sequence[float]) -> float:
    """Sample Pearson correlation; 0 (with a warning) on zero variance."""
    a = np.asarray(predictions, dtype=np.float64)
    b = np.asarray(golds, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("prediction and gold sequences differ in length")
    if a.size < 2:
        raise ValueError("need at least 2 points for a correlation")
    da = a - a.mean()
    db = b - b.mean()
    denom = np.sqrt(np.sum(da**2) * np.sum(db**2))
    if denom == 0.0:
        warnings.warn("zero variance in correlation input; reporting r = 0", RuntimeWarning, stacklevel=2)
        return 0.0
    return float(np.sum(da * db) / denom)


@dataclass(frozen=True)
class FoldPlan:
    """Stratified fold assignment: ``assignment[i]`` is instance i's fold."""

    k: int
    seed: int
    assignment: np.ndarray

    def folds(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.assignment == j) for j in range(self.k)]


def stratified_folds(labels: Sequence[CefrLevel], k: int, seed: int = 42) -> FoldPlan:
    """Deterministic stratified k-fold plan.

    Within each class the (seeded) shuffled instances are split as evenly as
    possible, so per-class fold counts differ by at most one.
    """
    n = len(labels)
    if k < 2:
        raise ValueError("k must be >= 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} instances")
    rng = np.random.default_rng(seed)
    assignment = np.empty(n, dtype=np.intp)
    for label in sorted(set(labels)):
        indices = np.flatnonzero(np.array([lab == label for lab in labels]))
        rng.shuffle(indices)
        for fold_id, chunk in enumerate(np.array_split(indices, k)):
            assignment[chunk] = fold_id
    return FoldPlan(k=k, seed=seed, assignment=assignment)


@dataclass(frozen=True)
class PredictionRecord:
    index: int
    unit_id: str
    gold: CefrLevel
    predicted: CefrLevel
    probs: np.ndarray  # aligned to the result's label order


@dataclass(frozen=True)
class CvResult:
    confusion: ConfusionMatrix
    report: MetricsReport
    records: tuple[PredictionRecord, ...]


FitFunction = Callable[[np.ndarray, list[CefrLevel]], object]


def cross_validate(
    X: np.ndarray,
    labels: Sequence[CefrLevel],
    fit: FitFunction,
    plan: FoldPlan,
    unit_ids: Sequence[str] | None = None,
) -> CvResult:
    """Train on k-1 folds, predict the held-out fold, pool everything.

    ``fit(X_train, y_train)`` must return a model exposing ``labels`` and
    ``predict_proba``; probabilities are re-aligned to the global label set
    (missing classes get probability 0). Ties pick the lower level.
    """
    X = np.asarray(X, dtype=np.float64)
    n = X.shape[0]
    if len(labels) != n:
        raise ValueError("feature matrix and labels differ in length")
    if unit_ids is None:
        unit_ids = [f"u{i + 1}" for i in range(n)]
    all_labels = tuple(sorted(set(labels)))
    pos = {label: i for i, label in enumerate(all_labels)}
    records: list[PredictionRecord | None] = [None] * n
    for fold_id, test_idx in enumerate(plan.folds()):
        train_mask = np.ones(n, dtype=bool)
        train_mask[test_idx] = False
        y_train = [labels[i] for i in np.flatnonzero(train_mask)]
        if len(set(y_train)) < 2:
            raise ValueError(
                f"fold {fold_id}: training part has fewer than 2 classes"
            )
        model = fit(X[train_mask], y_train)
        probs = np.atleast_2d(model.predict_proba(X[test_idx]))
        model_pos = [pos[label] for label in model.labels]
        for row, i in enumerate(test_idx):
            aligned = np.zeros(len(all_labels))
            aligned[model_pos] = probs[row]
            best = int(np.argmax(aligned))  # first max = lower level on ties
            records[int(i)] = PredictionRecord(
                index=int(i),
                unit_id=unit_ids[int(i)],
                gold=labels[int(i)],
                predicted=all_labels[best],
                probs=aligned,
            )
    done = [r for r in records if r is not None]
    assert len(done) == n, "fold plan did not cover every instance"
    confusion = ConfusionMatrix.from_pairs(
        [r.gold for r in done], [r.predicted for r in done], labels=all_labels
    )
    report = matrix_metrics(confusion)
    prob_matrix = np.vstack([r.probs for r in done])
    onehot = np.zeros_like(prob_matrix)
    for i, r in enumerate(done):
        onehot[i, pos[r.gold]] = 1.0
    report = MetricsReport(
        n=report.n,
        accuracy=report.accuracy,
        adjacent_accuracy=report.adjacent_accuracy,
        per_class=report.per_class,
        weighted_f=report.weighted_f,
        macro_f=report.macro_f,
        rmse=rmse_prob(prob_matrix, onehot),
    )
    return CvResult(confusion=confusion, report=report, records=tuple(done))


@dataclass(frozen=True)
class BinaryCollapse:
    """2x2 view of an ordinal matrix split into <=split vs >split."""

    split: CefrLevel
    counts: np.ndarray  # rows gold (low, high), columns predicted
    accuracy: float
    precision_low: float
    precision_high: float


def collapse_binary(
    source: ConfusionMatrix | tuple[Sequence[CefrLevel], Sequence[CefrLevel]],
    split: CefrLevel = CefrLevel.B1,
) -> BinaryCollapse:
    """Collapse labels through the binary split and recompute counts."""
    if isinstance(source, ConfusionMatrix):
        cm = source
    else:
        golds, preds = source
        cm = ConfusionMatrix.from_pairs(golds, preds)
    counts = np.zeros((2, 2), dtype=np.int64)
    for i, gold in enumerate(cm.labels):
        for j, pred in enumerate(cm.labels):
            counts[int(gold > split), int(pred > split)] += cm.counts[i, j]
    total = counts.sum()
    accuracy = float((counts[0, 0] + counts[1, 1]) / total) if total else 0.0
    pred_low = counts[:, 0].sum()
    pred_high = counts[:, 1].sum()
    return BinaryCollapse(
        split=split,
        counts=counts,
        accuracy=accuracy,
        precision_low=float(counts[0, 0] / pred_low) if pred_low else 0.0,
        precision_high=float(counts[1, 1] / pred_high) if pred_high else 0.0,
    )


@dataclass(frozen=True)
class DistributionTable:
    """Row per document level: how its sentences distribute over predicted levels."""

    levels: tuple[CefrLevel, ...]
    proportions: np.ndarray  # rows document gold level, columns predicted level
    sentence_counts: np.ndarray  # per-row sentence totals


def sentence_distribution(
    model,
    documents: Sequence[Document],
    ctx,
    group: str = "All",
    gold_reference: bool = True,
) -> DistributionTable:
    """Classify every sentence of every document with a sentence-level model.

    With ``gold_reference`` (and a "use-reference" context) the document's
    gold level anchors the difficult-word features, matching how labeled
    data is featurized elsewhere. Rows are normalized to sum to 1; a level
    with no documents keeps an all-zero row.
    """
    levels = CLASSIFICATION_LEVELS
    row_pos = {level: i for i, level in enumerate(levels)}
    counts = np.zeros((len(levels), len(levels)), dtype=np.int64)
    for doc in documents:
        doc_ctx = ctx
        if gold_reference and ctx.level_dependent_mode == "use-reference":
            doc_ctx = ctx.with_reference(doc.level)
        for sentence in doc.sentences:
            vector = select_feature_group(extract_sentence_features(sentence, doc_ctx), group)
            predicted = model.predict_label(vector)
            counts[row_pos[doc.level], row_pos[predicted]] += 1
    totals = counts.sum(axis=1)
    proportions = np.zeros(counts.shape, dtype=np.float64)
    nonzero = totals > 0
    proportions[nonzero] = counts[nonzero] / totals[nonzero, None]
    return DistributionTable(levels=levels, proportions=proportions, sentence_counts=totals)
