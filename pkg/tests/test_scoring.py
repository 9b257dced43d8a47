import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minimax_lab._config import CapacityError
from minimax_lab.graph import from_edges, new_chain
from minimax_lab.scoring import (DomainError, InputDomain, TabularProductClass,
                                 TabularScoring, all_tabular_classes, random_class,
                                 random_scoring)


def brute_score(f, x, y):
    total = 0
    for u in f.graph.unary:
        total += f.unary[u][x][y[u - 1]]
    for u, v in f.graph.pairwise:
        total += f.pairwise[(u, v)][x][y[u - 1]][y[v - 1]]
    return total


def brute_argmax(f, x):
    best = None
    for y in itertools.product((0, 1), repeat=f.graph.l):
        s = brute_score(f, x, y)
        if best is None or s > best[1]:
            best = (y, s)
    return best[0]


def test_zero_tables_score_zero_and_predict_zeros():
    f = TabularScoring.zeros(new_chain(3), ["a", "b"])
    assert f.score("a", (1, 0, 1)) == 0
    assert f.predict("b") == (0, 0, 0)
    assert f.restrict_pair(1, 2) == {"a": (0, 0), "b": (0, 0)}


def test_two_term_sum():
    g = new_chain(2)
    f = TabularScoring(g, ["x"], {1: {"x": (0, 2)}, 2: {"x": (0, 0)}},
                       {(1, 2): {"x": ((0, 0), (0, 3))}})
    assert f.score("x", (1, 1)) == 5


def test_figure_graph_score_is_sum_of_factor_tables(rng):
    g = from_edges(5, [(1, 2), (2, 3), (2, 4), (3, 4), (4, 5)], [1, 4])
    f = random_scoring(["x"], g, rng)
    for y in itertools.product((0, 1), repeat=5):
        expect = (f.unary[1]["x"][y[0]] + f.unary[4]["x"][y[3]]
                  + f.pairwise[(1, 2)]["x"][y[0]][y[1]] + f.pairwise[(2, 3)]["x"][y[1]][y[2]]
                  + f.pairwise[(2, 4)]["x"][y[1]][y[3]] + f.pairwise[(3, 4)]["x"][y[2]][y[3]]
                  + f.pairwise[(4, 5)]["x"][y[3]][y[4]])
        assert f.score("x", y) == expect


def test_unique_argmax():
    g = new_chain(2)
    f = TabularScoring(g, ["x"], {1: {"x": (0, 1)}, 2: {"x": (1, 0)}},
                       {(1, 2): {"x": ((0, 0), (0, 0))}})
    assert f.predict("x") == (1, 0)
    assert f("x") == (1, 0)


@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_predict_matches_brute_force(l, rng):
    g = new_chain(l)
    for _ in range(25):
        f = random_scoring(["p", "q"], g, rng, value_set=[0, 1, 2])
        for x in ("p", "q"):
            assert f.predict(x) == brute_argmax(f, x)


def test_predict_is_a_maximizer(rng):
    g = from_edges(4, [(1, 2), (2, 3), (3, 4), (1, 4)], [2])
    for _ in range(20):
        f = random_scoring(["x"], g, rng)
        top = f.score("x", f.predict("x"))
        assert all(top >= f.score("x", y) for y in itertools.product((0, 1), repeat=4))


def test_restrict_pair_dominant_labeling():
    g = new_chain(3)
    f = TabularScoring.zeros(g, ["x1", "x2"])
    pw = {uv: dict(t) for uv, t in f.pairwise.items()}
    pw[(1, 2)]["x1"] = ((0, 0), (0, 5))
    f = TabularScoring(g, f.domain, f.unary, pw)
    assert f.restrict_pair(1, 2) == {"x1": (1, 1), "x2": (0, 0)}


def test_restrict_pair_matches_zero_padded_enumeration(rng):
    g = new_chain(4)
    for _ in range(30):
        f = random_scoring(["a", "b", "c"], g, rng, value_set=[-1, 0, 1])
        for u, v in ((1, 2), (2, 3), (3, 4)):
            got = f.restrict_pair(u, v)
            for x in f.domain:
                best = None
                for a, b in itertools.product((0, 1), repeat=2):
                    y = [0] * 4
                    y[u - 1], y[v - 1] = a, b
                    s = brute_score(f, x, y)
                    if best is None or s > best[1]:
                        best = ((a, b), s)
                assert got[x] == best[0]


def test_restrict_pair_rejects_non_factor_pair():
    f = TabularScoring.zeros(new_chain(3), ["x"])
    with pytest.raises(DomainError):
        f.restrict_pair(1, 3)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), c=st.integers(-5, 5), k=st.integers(0, 4))
def test_argmax_invariant_under_factor_shift(seed, c, k):
    g = new_chain(3)
    f = random_scoring(["x", "y"], g, np.random.default_rng(seed), value_set=[0, 1, 2, 3])
    factor = [(1,), (2,), (3,), (1, 2), (2, 3)][k]
    h = f.shifted(factor, c)
    for x in f.domain:
        assert h.predict(x) == f.predict(x)
    assert h.restrict_pair(1, 2) == f.restrict_pair(1, 2)
    assert h.restrict_pair(2, 3) == f.restrict_pair(2, 3)


def test_unknown_input_and_bad_lengths():
    f = TabularScoring.zeros(new_chain(2), ["x"])
    with pytest.raises(DomainError):
        f.score("nope", (0, 0))
    with pytest.raises(DomainError):
        f.score("x", (0, 0, 0))


def test_tables_must_be_complete_and_finite():
    g = new_chain(2)
    with pytest.raises(DomainError):
        TabularScoring(g, ["x"], {1: {"x": (0, 0)}}, {(1, 2): {"x": ((0, 0), (0, 0))}})
    with pytest.raises(DomainError):
        TabularScoring(g, ["x"], {1: {"x": (0, float("nan"))}, 2: {"x": (0, 0)}},
                       {(1, 2): {"x": ((0, 0), (0, 0))}})


def test_domain_validation():
    with pytest.raises(DomainError):
        InputDomain(())
    with pytest.raises(DomainError):
        InputDomain(("a", "a"))


def test_capacity_limit_on_predict():
    from minimax_lab.graph import FactorGraph
    g = FactorGraph(13, [(i, i + 1) for i in range(1, 13)])
    f = TabularScoring.zeros(g, ["x"])
    with pytest.raises(CapacityError):
        f.predict("x")


def test_json_round_trip(rng):
    f = random_scoring(["a", "b"], new_chain(3), rng)
    doc = json.loads(f.to_json())
    assert set(doc) == {"graph", "unary", "pairwise"}
    assert set(doc["pairwise"]) == {"1-2", "2-3"}
    back = TabularScoring.from_json(f.to_json())
    assert back.domain.points == ("a", "b")
    for x in ("a", "b"):
        for y in itertools.product((0, 1), repeat=3):
            assert back.score(x, y) == f.score(x, y)


def test_class_builders():
    g = new_chain(2)
    zero = all_tabular_classes(["a", "b"], g, [0])
    members = list(zero)
    assert len(zero) == 1 and len(members) == 1
    assert members[0].predict("a") == (0, 0)
    assert isinstance(all_tabular_classes(["a"], g, [0, 1]), TabularProductClass)
    assert len(all_tabular_classes(["a"], g, [0, 1])) == 2 ** 8
    with pytest.raises(DomainError):
        all_tabular_classes(["a"], g, [])
    with pytest.raises(DomainError):
        random_class(["a"], g, 0, seed=1)


def test_random_class_is_deterministic():
    g = new_chain(3)
    a = random_class(["a", "b"], g, 5, seed=7)
    b = random_class(["a", "b"], g, 5, seed=7)
    assert [f.to_dict() for f in a] == [f.to_dict() for f in b]
    c = random_class(["a", "b"], g, 5, seed=8)
    assert [f.to_dict() for f in a] != [f.to_dict() for f in c]


def test_random_class_predictions_match_enumeration():
    g = new_chain(2)
    for f in random_class(["a", "b"], g, 30, seed=3):
        for x in ("a", "b"):
            assert f.predict(x) == brute_argmax(f, x)
