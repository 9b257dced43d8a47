"""Learning algorithms as scikit-learn style estimators.

Every estimator takes ``X``, a sequence of opaque input identifiers, and
``Y``, an ``(m, l)`` array of binary labels. After ``fit``, ``predict(X)``
returns an ``(n, l)`` integer array and ``predictor_`` is a plain callable
``x -> labeling`` usable with :mod:`minimax_lab.risk`.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .risk import TablePredictor, as_predictor


def check_xy(X, Y):
    """Validate a training sample and return ``(list_of_inputs, int_array)``."""
    X = list(X)
    Y = np.asarray(Y)
    if Y.ndim != 2:
        raise ValueError(f"Y must be 2-dimensional (m, l), got shape {Y.shape}")
    if len(X) != Y.shape[0]:
        raise ValueError(f"X has {len(X)} inputs but Y has {Y.shape[0]} rows")
    if len(X) < 1:
        raise ValueError("at least one sample is required")
    if not np.isin(Y, (0, 1)).all():
        raise ValueError("Y must contain only 0/1 labels")
    return X, Y.astype(int)


def check_fitted(est, attr="predictor_"):
    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")


class _LabelingPredictor(BaseEstimator):
    # permutation-invariant learners let the exact runner group datasets by multiset
    permutation_invariant = True

    def predict(self, X):
        check_fitted(self)
        f = self.predictor_
        return np.array([f(x) for x in X], dtype=int).reshape(len(X), self.n_labels_)

    def needs_truth(self):
        return False


class ERMClassifier(_LabelingPredictor):
    """Empirical Hamming-risk minimizer over a finite list of hypotheses.

    Ties go to the hypothesis listed first.

    Parameters
    ----------
    hypotheses : sequence
        Predictors ``x -> labeling`` (callables, lookup tables or
        :class:`~minimax_lab.scoring.TabularScoring` objects).
    """

    def __init__(self, hypotheses=()):
        self.hypotheses = hypotheses

    def fit(self, X, Y):
        X, Y = check_xy(X, Y)
        hyps = [as_predictor(h) for h in self.hypotheses]
        if not hyps:
            raise ValueError("ERMClassifier needs a nonempty hypothesis list")
        best, best_loss = None, None
        for k, h in enumerate(hyps):
            P = np.array([h(x) for x in X], dtype=int)
            loss = int((P != Y).sum())
            if best_loss is None or loss < best_loss:
                best, best_loss = k, loss
        self.best_index_ = best
        self.empirical_risk_ = best_loss / len(X)
        self.predictor_ = hyps[best]
        self.n_labels_ = Y.shape[1]
        return self


class PluginClassifier(_LabelingPredictor):
    """Thresholds per-input empirical label frequencies at 1/2 (ties predict 1).

    Inputs never seen during ``fit`` get the all-zeros labeling.
    """

    def fit(self, X, Y):
        X, Y = check_xy(X, Y)
        counts, ones = {}, {}
        for x, y in zip(X, Y):
            counts[x] = counts.get(x, 0) + 1
            ones[x] = ones.get(x, 0) + y
        l = Y.shape[1]
        table = {x: tuple(int(v) for v in (2 * ones[x] >= counts[x])) for x in counts}
        self.table_ = table
        self.n_labels_ = l
        self.predictor_ = TablePredictor(table, l=l, default=(0,) * l)
        return self


class ConstantZeroClassifier(_LabelingPredictor):
    """Baseline that always predicts the all-zeros labeling."""

    def fit(self, X, Y):
        _, Y = check_xy(X, Y)
        self.n_labels_ = Y.shape[1]
        self.predictor_ = TablePredictor({}, l=self.n_labels_, default=(0,) * self.n_labels_)
        return self


class OracleClassifier(_LabelingPredictor):
    """Ignores the sample and returns ``predictor``.

    With ``predictor=None`` the game runner supplies the Bayes predictor of
    whichever distribution is being played, so the estimator is not a real
    learning algorithm and is excluded from bound checks.
    """

    def __init__(self, predictor=None):
        self.predictor = predictor

    def needs_truth(self):
        return self.predictor is None

    def fit(self, X, Y):
        _, Y = check_xy(X, Y)
        if self.predictor is None:
            raise ValueError("OracleClassifier has no predictor; set one with set_params")
        self.n_labels_ = Y.shape[1]
        self.predictor_ = as_predictor(self.predictor)
        return self


def erm(hypotheses):
    return ERMClassifier(hypotheses=list(hypotheses))


def plugin():
    return PluginClassifier()


def constant_zero():
    return ConstantZeroClassifier()
