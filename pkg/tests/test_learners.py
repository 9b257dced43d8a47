from fractions import Fraction

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from minimax_lab import adversarial as adv
from minimax_lab.graph import new_chain
from minimax_lab.learners import (ConstantZeroClassifier, ERMClassifier, OracleClassifier,
                                  PluginClassifier, constant_zero, erm, plugin)
from minimax_lab.risk import (TablePredictor, empirical_risk, excess_risk, random_distribution,
                              sample)
from minimax_lab.scoring import random_class


def fitted_table(est, xs):
    return {x: tuple(est.predict([x])[0]) for x in xs}


def test_erm_matches_exhaustive_scan():
    rng = np.random.default_rng(0)
    domain = ["a", "b", "c"]
    for trial in range(20):
        F = list(random_class(domain, new_chain(3), 15, seed=trial))
        D = random_distribution(3, 3, rng)
        S = sample(D, 12, rng)
        X = [domain[int(x[1:])] for x in S.X]
        data = list(zip(X, map(tuple, S.Y)))
        est = erm(F).fit(X, S.Y)
        risks = [empirical_risk(f, data) for f in F]
        best = min(risks)
        assert est.best_index_ == risks.index(best)
        assert est.empirical_risk_ == pytest.approx(best)
        assert fitted_table(est, domain) == {x: F[risks.index(best)].predict(x) for x in domain}


def test_erm_returns_consistent_member():
    truth = TablePredictor({"a": (1, 0), "b": (0, 1)})
    other = TablePredictor({"a": (0, 0), "b": (0, 0)})
    est = ERMClassifier([other, truth]).fit(["a", "b", "a"], [[1, 0], [0, 1], [1, 0]])
    assert est.best_index_ == 1 and est.empirical_risk_ == 0


def test_erm_singleton_and_ties():
    only = TablePredictor({"a": (1, 1)})
    assert ERMClassifier([only]).fit(["a"], [[0, 0]]).best_index_ == 0
    h1, h2 = TablePredictor({"a": (1, 0)}), TablePredictor({"a": (0, 1)})
    assert ERMClassifier([h1, h2]).fit(["a"], [[1, 1]]).best_index_ == 0
    with pytest.raises(ValueError):
        ERMClassifier([]).fit(["a"], [[0]])


def test_plugin_rules():
    est = plugin().fit(["a", "a", "b", "b"], [[1, 0], [1, 0], [1, 0], [0, 1]])
    assert tuple(est.predict(["a"])[0]) == (1, 0)
    assert tuple(est.predict(["b"])[0]) == (1, 1)  # ties predict 1
    assert tuple(est.predict(["unseen"])[0]) == (0, 0)


def test_plugin_is_consistent():
    D = random_distribution(3, 2, seed=17)
    means = []
    for m in (10, 100, 1000):
        vals = [excess_risk(as_fn(plugin().fit(*xy(sample(D, m, s)))), D) for s in range(20)]
        means.append(np.mean(vals))
    assert means[0] >= means[1] >= means[2]
    assert means[2] < 0.02


def as_fn(est):
    return lambda x: tuple(est.predict([x])[0])


def xy(S):
    return S.X, S.Y


def test_constant_zero_excess_on_family():
    f = adv.AdversarialFamily.create(2, Fraction(1, 5), Fraction(1, 4), graph=new_chain(2))
    est = constant_zero().fit(["x1"], [[1, 1]])
    assert {tuple(r) for r in est.predict(f.points)} == {(0, 0)}
    zero = as_fn(est)
    assert excess_risk(zero, adv.build_distribution(f, ((0, 0),))) == 0
    assert excess_risk(zero, adv.build_distribution(f, ((1, 1),))) == 2 * f.p * f.gamma


def test_oracle_requires_predictor():
    est = OracleClassifier()
    assert est.needs_truth()
    with pytest.raises(ValueError):
        est.fit(["a"], [[0]])
    est.set_params(predictor=TablePredictor({"a": (1,)}))
    assert not est.needs_truth()
    assert est.fit(["a"], [[0]]).predict(["a"]).tolist() == [[1]]


def test_estimator_protocol():
    assert set(ERMClassifier().get_params()) == {"hypotheses"}
    assert OracleClassifier().get_params() == {"predictor": None}
    assert PluginClassifier().get_params() == {}
    est = clone(ERMClassifier([TablePredictor({"a": (0,)})]))
    with pytest.raises(NotFittedError):
        est.predict(["a"])
    with pytest.raises(NotFittedError):
        ConstantZeroClassifier().predict(["a"])


def test_fit_is_pure():
    D = random_distribution(3, 2, seed=5)
    S = sample(D, 30, seed=1)
    for est in (plugin(), constant_zero()):
        a = est.fit(S.X, S.Y).predict(D.support)
        b = clone(est).fit(S.X, S.Y).predict(D.support)
        assert (a == b).all()


def test_input_validation():
    with pytest.raises(ValueError):
        plugin().fit(["a", "b"], [[0, 1]])
    with pytest.raises(ValueError):
        plugin().fit([], np.zeros((0, 2)))
    with pytest.raises(ValueError):
        plugin().fit(["a"], [[2]])
