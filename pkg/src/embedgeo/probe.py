"""Linear-separability probes: one-vs-rest logistic regression.

For a chosen token category, a balanced binary dataset (category rows
vs an equal-size seeded sample of everything else) is scored with
stratified 10-fold cross-validation. The trainer is plain full-batch
gradient descent with Armijo backtracking on the L2-regularized mean
logistic loss; the objective is convex, so the simple method is both
reliable and easy to verify against finite differences.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import expit

from .errors import ArgumentError, DegenerateLabels, SkippedCategory
from .rng import stream_rng

MIN_CATEGORY_TOKENS = 20


@dataclass
class ProbeTask:
    """Balanced positives/negatives for one category."""

    category: str
    positives: np.ndarray
    negatives: np.ndarray
    seed: int

    @property
    def rows(self) -> np.ndarray:
        return np.concatenate([self.positives, self.negatives])

    @property
    def labels(self) -> np.ndarray:
        return np.concatenate(
            [np.ones(len(self.positives)), np.zeros(len(self.negatives))]
        )


@dataclass
class ProbeResult:
    """Cross-validation outcome for one category."""

    category: str
    fold_accuracies: list[float]
    hyperparameters: dict = field(default_factory=dict)

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))


def build_task(
    categories: Sequence[str], category: str, seed: int = 0
) -> ProbeTask:
    """Balanced task: all rows of `category` vs an equal-count sample.

    Negatives are drawn uniformly without replacement from the
    complement, from the (seed, category) random stream. Categories
    with fewer than MIN_CATEGORY_TOKENS rows raise SkippedCategory.
    """
    cats = np.asarray(categories, dtype=object)
    pos = np.nonzero(cats == category)[0]
    if pos.size == 0:
        raise ArgumentError(f"category {category!r} has no tokens")
    if pos.size < MIN_CATEGORY_TOKENS:
        raise SkippedCategory(
            f"category {category!r} has {pos.size} tokens; "
            f"need at least {MIN_CATEGORY_TOKENS}"
        )
    comp = np.nonzero(cats != category)[0]
    if comp.size < pos.size:
        raise SkippedCategory(
            f"complement of {category!r} has only {comp.size} tokens"
        )
    rng = stream_rng(seed, "probe-negatives", category)
    neg = np.sort(rng.choice(comp, size=pos.size, replace=False))
    return ProbeTask(category, pos.astype(np.int64), neg.astype(np.int64), seed)


def _loss_grad(
    X: np.ndarray, y: np.ndarray, w: np.ndarray, b: float, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean logistic loss + l2*|w|^2/2 and its gradient."""
    z = X @ w + b
    # log(1 + exp(-m)) with m = z for y=1, -z for y=0, stably via logaddexp
    margins = np.where(y > 0.5, z, -z)
    loss = float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * l2 * float(w @ w)
    resid = (expit(z) - y) / len(y)
    grad_w = X.T @ resid + l2 * w
    grad_b = float(resid.sum())
    return loss, grad_w, grad_b


def train_logreg(
    X: np.ndarray,
    y: np.ndarray,
    l2: float = 1e-4,
    max_iter: int = 1000,
    tol: float = 1e-6,
) -> tuple[np.ndarray, float]:
    """Fit w, b by gradient descent with Armijo backtracking.

    Stops when the gradient infinity norm drops below tol or after
    max_iter accepted steps. Both classes must be present.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.shape[0] < 2:
        raise ArgumentError("need at least two samples")
    if y.min() == y.max():
        raise DegenerateLabels("training labels contain a single class")

    w = np.zeros(X.shape[1])
    b = 0.0
    step = 1.0
    loss, gw, gb = _loss_grad(X, y, w, b, l2)
    for _ in range(max_iter):
        gnorm = max(float(np.abs(gw).max()), abs(gb))
        if gnorm < tol:
            break
        g2 = float(gw @ gw) + gb * gb
        # Backtrack until the Armijo sufficient-decrease condition holds.
        accepted = False
        while step >= 1e-16:
            w_new = w - step * gw
            b_new = b - step * gb
            loss_new, gw_new, gb_new = _loss_grad(X, y, w_new, b_new, l2)
            if loss_new <= loss - 1e-4 * step * g2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        w, b, loss, gw, gb = w_new, b_new, loss_new, gw_new, gb_new
        step = min(step * 2.0, 1e6)
    return w, b


def standardize(
    train: np.ndarray, other: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Z-score both matrices using statistics of the training rows only."""
    mu = train.mean(axis=0)
    sd = train.std(axis=0)
    sd = np.where(sd == 0.0, 1.0, sd)
    return (train - mu) / sd, (other - mu) / sd


def _stratified_folds(
    labels: np.ndarray, folds: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Seeded class-balanced fold assignment (round-robin after shuffle)."""
    assignment = np.empty(len(labels), dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.nonzero(labels == cls)[0]
        idx = rng.permutation(idx)
        assignment[idx] = np.arange(idx.size) % folds
    return [np.nonzero(assignment == f)[0] for f in range(folds)]


def cross_validate(
    task: ProbeTask,
    matrix: np.ndarray,
    folds: int = 10,
    l2: float = 1e-4,
    max_iter: int = 1000,
    tol: float = 1e-6,
) -> ProbeResult:
    """Stratified k-fold accuracy of the category probe.

    Features are standardized inside each split with training-fold
    statistics only, so no information about held-out rows leaks into
    the fit.
    """
    if folds < 2:
        raise ArgumentError("folds must be at least 2")
    rows = task.rows
    y = task.labels
    X = np.asarray(matrix, dtype=np.float64)[rows]

    rng = stream_rng(task.seed, "probe-folds", task.category)
    fold_idx = _stratified_folds(y, folds, rng)

    accuracies = []
    for f in range(folds):
        test = fold_idx[f]
        train = np.concatenate([fold_idx[g] for g in range(folds) if g != f])
        X_tr, X_te = standardize(X[train], X[test])
        w, b = train_logreg(X_tr, y[train], l2=l2, max_iter=max_iter, tol=tol)
        pred = (X_te @ w + b) >= 0.0
        accuracies.append(float(np.mean(pred == (y[test] > 0.5))))
    return ProbeResult(
        task.category,
        accuracies,
        hyperparameters={
            "l2": l2,
            "max_iter": max_iter,
            "tol": tol,
            "folds": folds,
            "seed": task.seed,
        },
    )


def probe_categories(
    matrix: np.ndarray,
    categories: Sequence[str],
    which: Optional[Sequence[str]] = None,
    seed: int = 0,
    folds: int = 10,
    l2: float = 1e-4,
    max_iter: int = 1000,
    tol: float = 1e-6,
) -> tuple[list[ProbeResult], list[str]]:
    """Probe every requested category, skipping the too-small ones.

    Returns (results, skipped category names). The macro average over
    categories and the per-sample average generally differ; both can be
    derived from the fold accuracies and task sizes.
    """
    if which is None:
        which = sorted(set(categories))
    results = []
    skipped = []
    for cat in which:
        try:
            task = build_task(categories, cat, seed=seed)
        except SkippedCategory:
            skipped.append(cat)
            continue
        results.append(
            cross_validate(task, matrix, folds=folds, l2=l2, max_iter=max_iter, tol=tol)
        )
    return results, skipped
