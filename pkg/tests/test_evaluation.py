import numpy as np
import pytest

from cefrlab import (
    CefrLevel,
    ConfusionMatrix,
    collapse_binary,
    cross_validate,
    matrix_metrics,
    pearson,
    rmse_prob,
    sentence_distribution,
    stratified_folds,
    train_majority,
    train_mlr,
)
from cefrlab.corpus import AnnotatedToken, Document, Sentence
from cefrlab.evaluation import FoldPlan

A1, A2, B1, B2, C1 = (CefrLevel.A1, CefrLevel.A2, CefrLevel.B1, CefrLevel.B2, CefrLevel.C1)
ALL5 = (A1, A2, B1, B2, C1)

# Published document-level confusion matrix (gold rows, predicted columns).
TABLE_DOC = np.array([
    [37, 12, 0, 0, 0],
    [12, 121, 18, 5, 1],
    [4, 11, 206, 24, 13],
    [0, 5, 21, 238, 24],
    [0, 0, 0, 12, 103],
])

# Published sentence-level confusion matrix.
TABLE_SENT = np.array([
    [371, 123, 9, 2, 0],
    [120, 541, 78, 11, 4],
    [27, 136, 212, 23, 10],
    [8, 34, 39, 30, 13],
    [0, 18, 21, 9, 35],
])


def cm(counts):
    return ConfusionMatrix(labels=ALL5, counts=np.asarray(counts, dtype=np.int64))


class TestMatrixMetrics:
    def test_document_matrix_fixture(self):
        report = matrix_metrics(cm(TABLE_DOC))
        assert report.n == 867
        assert report.accuracy == pytest.approx(705 / 867)
        assert report.adjacent_accuracy == pytest.approx(839 / 867)

    def test_sentence_matrix_fixture(self):
        report = matrix_metrics(cm(TABLE_SENT))
        assert report.accuracy == pytest.approx(1189 / 1874)
        assert report.adjacent_accuracy == pytest.approx(1730 / 1874)

    def test_per_level_error_rates(self):
        report = matrix_metrics(cm(TABLE_DOC))
        assert 1 - report.per_class[A2].recall == pytest.approx(36 / 157)
        assert 1 - report.per_class[B1].recall == pytest.approx(52 / 258)
        assert 1 - report.per_class[B2].recall == pytest.approx(50 / 288)

    def test_empty_matrix_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            matrix_metrics(cm(np.zeros((5, 5))))

    def test_accuracy_never_exceeds_adjacent(self):
        rng = np.random.default_rng(17)
        for _ in range(30):
            counts = rng.integers(0, 20, size=(5, 5))
            if counts.sum() == 0:
                continue
            report = matrix_metrics(cm(counts))
            assert report.accuracy <= report.adjacent_accuracy + 1e-12

    def test_equality_iff_no_far_misses(self):
        near = np.zeros((5, 5), dtype=int)
        near[0, 1] = 3
        near[2, 2] = 4
        report = matrix_metrics(cm(near))
        assert report.accuracy < report.adjacent_accuracy == 1.0
        far = near.copy()
        far[0, 4] = 1
        report = matrix_metrics(cm(far))
        assert report.adjacent_accuracy < 1.0

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(23)
        counts = rng.integers(0, 30, size=(5, 5))
        base = matrix_metrics(cm(counts))
        perm = [3, 0, 4, 1, 2]
        permuted = ConfusionMatrix(
            labels=tuple(ALL5[i] for i in perm),
            counts=counts[np.ix_(perm, perm)],
        )
        report = matrix_metrics(permuted)
        assert report.accuracy == pytest.approx(base.accuracy)
        assert report.adjacent_accuracy == pytest.approx(base.adjacent_accuracy)
        assert report.weighted_f == pytest.approx(base.weighted_f)
        for label in ALL5:
            assert report.per_class[label] == base.per_class[label]

    def test_weighted_f_on_degenerate_columns(self):
        counts = np.zeros((5, 5), dtype=int)
        counts[:, 3] = [10, 20, 30, 40, 10]  # everything predicted B2
        report = matrix_metrics(cm(counts))
        assert report.per_class[A1].f_score == 0.0
        assert report.per_class[B2].precision == pytest.approx(40 / 110)


class TestRmseProb:
    def test_perfect_one_hot(self):
        Y = np.eye(5)[[0, 2, 4, 1]]
        assert rmse_prob(Y, Y) == 0.0

    def test_uniform_five_class(self):
        P = np.full((12, 5), 0.2)
        Y = np.eye(5)[np.arange(12) % 5]
        assert rmse_prob(P, Y) == pytest.approx(0.4, abs=1e-15)

    def test_uniform_two_class(self):
        P = np.full((6, 2), 0.5)
        Y = np.eye(2)[np.arange(6) % 2]
        assert rmse_prob(P, Y) == 0.5

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            rmse_prob(np.zeros((2, 5)), np.zeros((3, 5)))


class TestPearson:
    def test_identity(self):
        assert pearson([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == pytest.approx(1.0)

    def test_negation(self):
        assert pearson([1.0, 2.0, 3.0], [-1.0, -2.0, -3.0]) == pytest.approx(-1.0)

    def test_hand_three_point_fit(self):
        # Least-squares fit of (0,1),(1,2),(2,2) is 0.5x + 7/6; r^2 = SSR/SST = 0.75.
        preds = [7 / 6, 5 / 3, 13 / 6]
        golds = [1.0, 2.0, 2.0]
        assert pearson(preds, golds) == pytest.approx(np.sqrt(0.75))

    def test_zero_variance_warns(self):
        with pytest.warns(RuntimeWarning, match="zero variance"):
            assert pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pearson([1.0, 2.0], [1.0])


class TestStratifiedFolds:
    def test_balanced_exact_stratification(self):
        labels = [A1] * 5 + [A2] * 5
        plan = stratified_folds(labels, k=5, seed=1)
        for fold in plan.folds():
            fold_labels = [labels[i] for i in fold]
            assert sorted(fold_labels) == [A1, A2]

    def test_same_seed_same_assignment(self):
        labels = [ALL5[i % 5] for i in range(37)]
        a = stratified_folds(labels, k=10, seed=7)
        b = stratified_folds(labels, k=10, seed=7)
        assert np.array_equal(a.assignment, b.assignment)

    def test_seven_instances_three_folds(self):
        labels = [B1] * 7
        plan = stratified_folds(labels, k=3, seed=0)
        sizes = sorted((plan.assignment == j).sum() for j in range(3))
        assert sizes == [2, 2, 3]

    def test_counts_differ_by_at_most_one_per_class(self):
        rng = np.random.default_rng(31)
        labels = [ALL5[int(i)] for i in rng.integers(0, 5, size=83)]
        plan = stratified_folds(labels, k=10, seed=3)
        for label in ALL5:
            per_fold = [
                sum(1 for i in fold if labels[i] == label) for fold in plan.folds()
            ]
            assert max(per_fold) - min(per_fold) <= 1

    def test_k_larger_than_n_rejected(self):
        with pytest.raises(ValueError, match="folds"):
            stratified_folds([A1, A2], k=3)

    def test_covers_every_instance_once(self):
        labels = [ALL5[i % 5] for i in range(23)]
        plan = stratified_folds(labels, k=4, seed=9)
        seen = np.concatenate(plan.folds())
        assert sorted(seen.tolist()) == list(range(23))


def blobs_5class(n_per_class=20, seed=0, spread=0.25):
    """Well-separated gaussian blobs, one per level, 3 features."""
    rng = np.random.default_rng(seed)
    X, y = [], []
    for i, level in enumerate(ALL5):
        center = np.array([i, -i, i * 0.5], dtype=np.float64)
        X.append(center + rng.normal(scale=spread, size=(n_per_class, 3)))
        y.extend([level] * n_per_class)
    return np.vstack(X), y


class TestCrossValidate:
    def test_pooled_total_equals_n(self):
        X, y = blobs_5class()
        plan = stratified_folds(y, k=5, seed=2)
        result = cross_validate(X, y, lambda Xt, yt: train_mlr(Xt, yt), plan)
        assert result.confusion.total == len(y)
        assert len(result.records) == len(y)

    def test_separable_high_accuracy(self):
        X, y = blobs_5class()
        plan = stratified_folds(y, k=10, seed=4)
        result = cross_validate(X, y, lambda Xt, yt: train_mlr(Xt, yt), plan)
        assert result.report.accuracy >= 0.95

    def test_same_seed_identical_report(self):
        X, y = blobs_5class()
        run = lambda: cross_validate(
            X, y, lambda Xt, yt: train_mlr(Xt, yt), stratified_folds(y, k=5, seed=11)
        )
        a, b = run(), run()
        assert a.report == b.report
        assert np.array_equal(a.confusion.counts, b.confusion.counts)
        for ra, rb in zip(a.records, b.records):
            assert np.array_equal(ra.probs, rb.probs)

    def test_majority_spec_reproduces_class_share(self):
        rng = np.random.default_rng(13)
        y = [A1] * 12 + [A2] * 30 + [B1] * 18
        X = rng.normal(size=(len(y), 2))
        plan = stratified_folds(y, k=5, seed=1)
        result = cross_validate(X, y, lambda Xt, yt: train_majority(yt), plan)
        assert result.report.accuracy == pytest.approx(30 / 60)

    def test_fold_with_single_class_training_rejected(self):
        y = [A1, A1, A2]
        X = np.zeros((3, 1))
        plan = FoldPlan(k=2, seed=0, assignment=np.array([1, 1, 0]))
        # fold 1's training part is only the A2 instance
        with pytest.raises(ValueError, match="fewer than 2 classes"):
            cross_validate(X, y, lambda Xt, yt: train_majority(yt), plan)

    def test_probability_records_align_to_global_labels(self):
        X, y = blobs_5class(n_per_class=8)
        plan = stratified_folds(y, k=4, seed=5)
        result = cross_validate(X, y, lambda Xt, yt: train_mlr(Xt, yt), plan)
        for record in result.records:
            assert record.probs.shape == (5,)
            assert record.probs.sum() == pytest.approx(1.0, abs=1e-9)


class TestCollapseBinary:
    def test_all_predicted_lowest(self):
        counts = np.zeros((5, 5), dtype=int)
        counts[:, 0] = [4, 3, 2, 1, 1]
        result = collapse_binary(cm(counts))
        assert result.counts[:, 1].sum() == 0
        assert result.counts[0, 0] == 9
        assert result.counts[1, 0] == 2

    def test_published_sentence_matrix_collapse(self):
        result = collapse_binary(cm(TABLE_SENT))
        assert result.counts.tolist() == [[1617, 50], [120, 87]]
        assert result.accuracy == pytest.approx(1704 / 1874)
        assert result.precision_low == pytest.approx(1617 / 1737)
        assert result.precision_high == pytest.approx(87 / 137)

    def test_identity_matrix_collapses_clean(self):
        result = collapse_binary(cm(np.eye(5, dtype=int) * 7))
        assert result.counts.tolist() == [[21, 0], [0, 14]]
        assert result.accuracy == 1.0

    def test_totals_preserved(self):
        rng = np.random.default_rng(20)
        counts = rng.integers(0, 50, size=(5, 5))
        result = collapse_binary(cm(counts))
        assert result.counts.sum() == counts.sum()

    def test_from_prediction_pairs(self):
        golds = [A1, B2, C1, B1]
        preds = [A2, B1, C1, B2]
        result = collapse_binary((golds, preds))
        assert result.counts.tolist() == [[1, 1], [1, 1]]


class _FixedModel:
    """Stub sentence classifier keyed on sentence length."""

    labels = ALL5

    def __init__(self, cut=3):
        self.cut = cut

    def predict_label(self, vector):
        return A1 if vector[0] <= self.cut else B1


def doc_of_lengths(doc_id, level, lengths):
    sentences = []
    for j, n in enumerate(lengths):
        tokens = tuple(
            AnnotatedToken(i + 1, "w", "w", "NN", frozenset(), 0 if i == 0 else 1, "X")
            for i in range(n)
        )
        sentences.append(Sentence(id=f"{doc_id}-s{j}", tokens=tokens))
    return Document(id=doc_id, level=level, sentences=tuple(sentences))


class TestSentenceDistribution:
    def test_single_level_document(self, golden_ctx):
        # every sentence of the B1 document classifies as B1
        doc = doc_of_lengths("d", B1, [2, 3, 2])
        table = sentence_distribution(_FixedModel(cut=1), [doc], golden_ctx)
        assert table.proportions[2].tolist() == [0.0, 0.0, 1.0, 0.0, 0.0]

    def test_injected_mixture_recovered(self, golden_ctx):
        # 6 short + 2 long sentences: expect 75% A1, 25% B1 in the B2 row.
        doc = doc_of_lengths("d", B2, [2, 2, 2, 5, 2, 2, 5, 2])
        table = sentence_distribution(_FixedModel(cut=3), [doc], golden_ctx)
        row = table.proportions[3]
        assert row[0] == pytest.approx(0.75)
        assert row[2] == pytest.approx(0.25)

    def test_rows_sum_to_one_or_zero(self, golden_ctx):
        docs = [
            doc_of_lengths("a", A1, [2, 2]),
            doc_of_lengths("b", B2, [5, 2, 5]),
        ]
        table = sentence_distribution(_FixedModel(), docs, golden_ctx)
        sums = table.proportions.sum(axis=1)
        for level_idx, total in enumerate(table.sentence_counts):
            assert sums[level_idx] == pytest.approx(1.0 if total else 0.0)
