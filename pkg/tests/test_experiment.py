import csv
import io
import math
import random
from fractions import Fraction

import pytest

from minimax_lab import adversarial as adv
from minimax_lab._config import CapacityError
from minimax_lab.experiment import (CSV_COLUMNS, GameConfig, expand_configs,
                                    expected_excess_exact, expected_excess_mc, make_learner,
                                    rows_to_csv, sweep, worst_case)
from minimax_lab.graph import new_chain
from minimax_lab.learners import OracleClassifier, PluginClassifier
from minimax_lab.risk import excess_risk

THIRD = Fraction(1, 3)


def family(d=2, gamma=THIRD, p=Fraction(1, 12)):
    return adv.AdversarialFamily.create(d, gamma, p, graph=new_chain(2))


class OrderedPlugin(PluginClassifier):
    permutation_invariant = False


def test_truth_oracle_has_zero_excess():
    f = family()
    for B in adv.hypercube(2):
        assert expected_excess_exact(OracleClassifier(), f, B, 3) == 0
        assert expected_excess_mc(OracleClassifier(), f, B, 3, reps=20, seed=1) == (0, 0)


def test_constant_zero_at_one_sample():
    f = family()
    value = expected_excess_exact(make_learner("constant_zero", f), f, ((1, 1),), 1)
    assert value == 2 * f.p * f.gamma
    assert value == excess_risk(lambda x: (0, 0), adv.build_distribution(f, ((1, 1),)))


def test_constant_zero_worst_case_closed_form():
    f = family(3, Fraction(1, 5), Fraction(1, 4))
    r = worst_case(make_learner("constant_zero", f), f, 3)
    assert r.worst == 2 * f.p * f.gamma * (f.d - 1)
    assert r.argmax == "1111"
    for bits, v in r.per_B.items():
        assert v == f.p * f.gamma * bits.count("1")


@pytest.mark.parametrize("m", [1, 2, 4])
def test_multiset_and_ordered_enumeration_agree(m):
    f = family(3, Fraction(1, 5), Fraction(1, 4))
    B = ((1, 0), (1, 1))
    assert expected_excess_exact(PluginClassifier(), f, B, m) == \
        expected_excess_exact(OrderedPlugin(), f, B, m)


def test_exact_is_exact():
    f = family()
    v = expected_excess_exact(make_learner("erm", f), f, ((1, 0),), 4)
    assert isinstance(v, Fraction) and v > 0


def test_budget_gate():
    f = family()
    with pytest.raises(CapacityError, match="monte_carlo"):
        expected_excess_exact(PluginClassifier(), f, ((1, 1),), 8, budget=1000)


@pytest.mark.slow
def test_erm_monte_carlo_agrees_with_exact():
    f = family(gamma=Fraction(1, 4), p=Fraction(1, 5))
    B = ((0, 1),)
    est = make_learner("erm", f)
    exact = expected_excess_exact(est, f, B, 4)
    mean, se = expected_excess_mc(est, f, B, 4, reps=100_000, seed=3)
    assert abs(mean - exact) <= 3 * se


def test_monte_carlo_within_four_standard_errors():
    f = family()
    est = make_learner("plugin", f)
    for B in adv.hypercube(2):
        exact = expected_excess_exact(est, f, B, 5)
        mean, se = expected_excess_mc(est, f, B, 5, reps=2000, seed=11)
        assert abs(mean - exact) <= 4 * se


def test_monte_carlo_is_seeded():
    f = family()
    est = make_learner("plugin", f)
    a = expected_excess_mc(est, f, ((1, 1),), 6, reps=50, seed=4)
    assert a == expected_excess_mc(est, f, ((1, 1),), 6, reps=50, seed=4)
    assert a != expected_excess_mc(est, f, ((1, 1),), 6, reps=50, seed=5)
    assert a[1] >= 0


def test_committed_oracle_is_exploited():
    f = family(3, Fraction(1, 5), Fraction(1, 4))
    B0 = ((0, 1), (1, 0))
    r = worst_case(make_learner({"name": "oracle", "B": "0110"}, f), f, 3)
    assert r.per_B["0110"] == 0
    assert r.argmax != "0110" and r.worst > 0
    assert not r.truth_based and r.bound_checked


def test_worst_case_is_order_free():
    f = family()
    r = worst_case(make_learner("plugin", f), f, 3)
    values = list(r.per_B.items())
    random.Random(0).shuffle(values)
    assert max(v for _, v in values) == r.worst
    assert r.argmax == min(b for b, v in values if v == r.worst)


def test_default_family_meets_intermediate_bound():
    f = family()
    for name in ("erm", "plugin", "constant_zero"):
        r = worst_case(make_learner(name, f), f, 4)
        assert r.worst >= adv.intermediate_bound(2, 4, THIRD, f.p)
        assert not r.violates_bound


def test_configs():
    cfg = GameConfig.from_dict({"d": 2, "m": 8, "gamma": "1/3", "learner": {"name": "erm"},
                                "mode": {"monte_carlo": {"reps": 10, "seed": 7}}})
    assert cfg.gamma == THIRD and cfg.mode == "monte_carlo" and cfg.reps == 10 and cfg.seed == 7
    assert cfg.family().p == Fraction(1, 12)
    docs = expand_configs({"configs": [{"d": 2, "learner": "plugin", "grid": {"m": [4, 8],
                                                                              "gamma": [0.2, 0.3]}}]})
    assert [(c["m"], c["gamma"]) for c in docs] == [(4, 0.2), (4, 0.3), (8, 0.2), (8, 0.3)]
    with pytest.raises(Exception):
        make_learner("nope", cfg.family())


def parse(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_empty_sweep_is_header_only():
    rows, reports = sweep([])
    assert rows_to_csv(rows) == ",".join(CSV_COLUMNS) + "\n"


def test_identical_configs_give_identical_rows():
    cfg = {"d": 2, "m": 5, "gamma": 0.3, "learner": "plugin",
           "mode": {"monte_carlo": {"reps": 30, "seed": 2}}}
    rows, _ = sweep([cfg, cfg, {**cfg, "mode": "exact"}, {**cfg, "mode": "exact"}])
    strip = lambda r: {k: v for k, v in r.items() if k not in ("run_id", "wall_ms")}
    assert [strip(r) for r in rows[:5]] == [strip(r) for r in rows[5:10]]
    assert [strip(r) for r in rows[10:15]] == [strip(r) for r in rows[15:]]
    assert rows[4]["B"] == "max" and rows[4]["seed"] == 2


def test_crossover_sweep_rows():
    cfgs = expand_configs({"d": 2, "gamma": "crossover", "learner": "constant_zero",
                           "mode": {"monte_carlo": {"reps": 5, "seed": 0}},
                           "grid": {"m": [8, 16, 32]}})
    rows, reports = sweep(cfgs)
    assert reports[0] is None and "gamma" in rows[0]["errors"]
    for m in (16, 32):
        maxrow = [r for r in rows if r["m"] == m and r["B"] == "max"][0]
        assert abs(float(maxrow["theorem1_bound"]) - math.sqrt(1 / m) / 81) < 1e-15
        assert abs(float(maxrow["gamma"]) - math.sqrt(1 / m)) < 1e-15


def test_sweep_records_errors_and_continues():
    rows, reports = sweep([{"d": 2, "m": 8, "learner": "erm"},
                           {"d": 2, "m": 4, "gamma": 0.3, "learner": "plugin"},
                           {"d": 2, "m": 9, "gamma": 0.2, "learner": "plugin"}], budget=10_000)
    assert "missing field" in rows[0]["errors"]
    assert reports[1] is not None
    assert "CapacityError" in rows[-1]["errors"]


def test_truth_oracle_skips_bound_check():
    rows, reports = sweep([{"d": 2, "m": 3, "gamma": 0.3, "learner": "oracle"}])
    assert reports[0].truth_based and not reports[0].violates_bound
    assert rows[-1]["errors"].startswith("bound check skipped")
