import numpy as np
import pytest

from embedgeo import (
    ArgumentError,
    DegenerateLabels,
    SkippedCategory,
    build_task,
    cross_validate,
    probe_categories,
    train_logreg,
)
from embedgeo.probe import ProbeTask, _loss_grad, standardize
from oracles import numeric_gradient


def separated_clusters(n_per_class, d, gap, seed):
    """Two unit-variance Gaussians with means `gap` sigmas apart on axis 0."""
    rng = np.random.default_rng(seed)
    pos = rng.normal(size=(n_per_class, d))
    neg = rng.normal(size=(n_per_class, d))
    pos[:, 0] += gap / 2
    neg[:, 0] -= gap / 2
    X = np.vstack([pos, neg]).astype(np.float32)
    task = ProbeTask(
        "SYN", np.arange(n_per_class), np.arange(n_per_class, 2 * n_per_class), seed=0
    )
    return X, task


class TestBuildTask:
    def test_balanced_by_construction(self):
        cats = ["LATIN"] * 100 + ["N"] * 900
        task = build_task(cats, "LATIN", seed=1)
        assert len(task.positives) == 100
        assert len(task.negatives) == 100
        assert set(task.positives).isdisjoint(task.negatives)

    def test_small_category_skipped(self):
        cats = ["LATIN"] * 5 + ["N"] * 100
        with pytest.raises(SkippedCategory):
            build_task(cats, "LATIN")

    def test_absent_category(self):
        with pytest.raises(ArgumentError):
            build_task(["N"] * 50, "LATIN")

    def test_seeded_determinism(self):
        cats = ["LATIN"] * 50 + ["N"] * 500
        t1 = build_task(cats, "LATIN", seed=7)
        t2 = build_task(cats, "LATIN", seed=7)
        assert np.array_equal(t1.negatives, t2.negatives)
        t3 = build_task(cats, "LATIN", seed=8)
        assert not np.array_equal(t1.negatives, t3.negatives)

    def test_negatives_all_from_complement(self):
        cats = ["A"] * 30 + ["B"] * 30 + ["C"] * 30
        task = build_task(cats, "B", seed=0)
        labels = np.asarray(cats, dtype=object)
        assert np.all(labels[task.negatives] != "B")


class TestTrainLogreg:
    def test_symmetric_1d_boundary_at_zero(self):
        X = np.array([[1.0], [-1.0], [1.0], [-1.0]])
        y = np.array([1.0, 0.0, 1.0, 0.0])
        w, b = train_logreg(X, y)
        assert w[0] > 0
        assert abs(b) < 1e-6
        assert np.mean(((X @ w + b) >= 0) == (y > 0.5)) == 1.0

    def test_single_class_rejected(self):
        with pytest.raises(DegenerateLabels):
            train_logreg(np.ones((4, 2)), np.ones(4))

    def test_gradient_matches_finite_differences(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            X = rng.standard_normal((20, 8))
            y = (rng.random(20) > 0.5).astype(float)
            if y.min() == y.max():
                y[0] = 1 - y[0]
            w = rng.standard_normal(8)
            b = float(rng.standard_normal())
            l2 = float(10 ** rng.uniform(-5, -1))
            _, gw, gb = _loss_grad(X, y, w, b, l2)
            analytic = np.concatenate([gw, [gb]])
            theta = np.concatenate([w, [b]])
            numeric = numeric_gradient(
                lambda t: _loss_grad(X, y, t[:8], t[8], l2)[0], theta
            )
            rel = np.linalg.norm(numeric - analytic) / np.linalg.norm(numeric)
            assert rel < 1e-5

    def test_final_loss_not_above_initial(self):
        rng = np.random.default_rng(1)
        for seed in range(5):
            X = rng.standard_normal((30, 6))
            y = (rng.random(30) > 0.5).astype(float)
            if y.min() == y.max():
                y[0] = 1 - y[0]
            w, b = train_logreg(X, y, l2=1e-4)
            loss_at_zero = _loss_grad(X, y, np.zeros(6), 0.0, 1e-4)[0]
            loss_final = _loss_grad(X, y, w, b, 1e-4)[0]
            assert loss_final <= loss_at_zero + 1e-12


class TestStandardize:
    def test_params_from_train_only(self):
        rng = np.random.default_rng(2)
        train = rng.standard_normal((50, 4))
        test = rng.standard_normal((10, 4))
        tr1, te1 = standardize(train, test)
        # shifting held-out rows must not change the training transform
        tr2, te2 = standardize(train, test + 100.0)
        assert np.array_equal(tr1, tr2)
        assert np.allclose(te2 - te1, 100.0 / train.std(axis=0), atol=1e-9)

    def test_zero_variance_column_safe(self):
        train = np.ones((5, 2))
        train[:, 1] = np.arange(5)
        tr, _ = standardize(train, train)
        assert np.all(np.isfinite(tr))


class TestCrossValidate:
    def test_well_separated_clusters(self):
        X, task = separated_clusters(100, 16, gap=6.0, seed=100)
        res = cross_validate(task, X)
        assert len(res.fold_accuracies) == 10
        assert res.mean_accuracy >= 0.99

    def test_permuted_labels_at_chance(self):
        accs = []
        for seed in range(3):
            rng = np.random.default_rng(1000 + seed)
            X = np.vstack(
                [rng.normal(+2, 1, size=(500, 8)), rng.normal(-2, 1, size=(500, 8))]
            ).astype(np.float32)
            perm = rng.permutation(1000)
            task = ProbeTask("C", perm[:500], perm[500:], seed=seed)
            accs.append(cross_validate(task, X).mean_accuracy)
        assert abs(float(np.mean(accs)) - 0.5) <= 0.05

    def test_seeded_fold_determinism(self):
        X, task = separated_clusters(40, 8, gap=2.0, seed=3)
        r1 = cross_validate(task, X)
        r2 = cross_validate(task, X)
        assert r1.fold_accuracies == r2.fold_accuracies

    def test_mean_is_arithmetic_mean(self):
        X, task = separated_clusters(40, 8, gap=2.0, seed=4)
        res = cross_validate(task, X)
        assert res.mean_accuracy == pytest.approx(np.mean(res.fold_accuracies))

    def test_folds_are_stratified(self):
        from embedgeo.probe import _stratified_folds
        from embedgeo.rng import stream_rng

        y = np.array([1.0] * 50 + [0.0] * 50)
        folds = _stratified_folds(y, 10, stream_rng(0, "t"))
        for f in folds:
            assert y[f].sum() == 5
            assert len(f) == 10

    def test_too_few_folds(self):
        X, task = separated_clusters(30, 4, gap=2.0, seed=5)
        with pytest.raises(ArgumentError):
            cross_validate(task, X, folds=1)


class TestProbeCategories:
    def test_skips_and_results(self):
        rng = np.random.default_rng(6)
        cats = ["A"] * 50 + ["B"] * 50 + ["RARE"] * 3
        X = rng.standard_normal((103, 8)).astype(np.float32)
        X[:50, 0] += 6
        results, skipped = probe_categories(X, cats, seed=0)
        assert skipped == ["RARE"]
        by_cat = {r.category: r for r in results}
        assert by_cat["A"].mean_accuracy > 0.9
