"""Minimax game runner: worst-case expected excess risk of a learner over the hypercube family."""

from __future__ import annotations

import csv
import io
import itertools
import math
import statistics
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from sklearn.base import clone

from ._config import CapacityError, enumeration_budget
from .adversarial import (AdversarialFamily, B_to_bits, bayes_of_B, bits_to_B,
                          build_distribution, hypercube, intermediate_bound,
                          assouad_bound, parse_number)
from .graph import FactorGraph, new_chain
from .learners import (ConstantZeroClassifier, ERMClassifier, OracleClassifier,
                       PluginClassifier)
from .risk import TablePredictor, bayes_risk, expected_risk, sample
from .scoring import DomainError

CSV_COLUMNS = ("run_id", "d", "m", "gamma", "p", "learner", "mode", "B", "excess", "se",
               "intermediate_bound", "theorem1_bound", "seed", "wall_ms", "errors")

LEARNER_NAMES = ("erm", "plugin", "constant_zero", "oracle")


def make_learner(spec, fam):
    """Instantiate a learner from ``{"name": ..., **params}``.

    ``erm`` defaults to the class of Bayes predictors of every family member;
    ``oracle`` with a ``"B"`` bit string commits to that member, without one it
    is handed the true member by the runner.
    """
    if isinstance(spec, str):
        spec = {"name": spec}
    name = spec.get("name")
    if name == "erm":
        hyp = spec.get("class", "family")
        if hyp != "family":
            raise DomainError(f"unknown ERM class {hyp!r}; only 'family' is supported")
        return ERMClassifier([bayes_of_B(fam, B) for B in hypercube(fam.d)])
    if name == "plugin":
        return PluginClassifier()
    if name == "constant_zero":
        return ConstantZeroClassifier()
    if name == "oracle":
        if "B" in spec:
            return OracleClassifier(bayes_of_B(fam, bits_to_B(str(spec["B"]), fam.d)))
        return OracleClassifier()
    raise DomainError(f"unknown learner {name!r}; expected one of {', '.join(LEARNER_NAMES)}")


class _Evaluator:
    """Excess risk of fitted learners under one family member, memoized on behaviour."""

    def __init__(self, learner, fam, B):
        self.fam = fam
        self.D = build_distribution(fam, B)
        self.bayes = bayes_risk(self.D)
        self.learner = clone(learner)
        if self.learner.needs_truth():
            self.learner.set_params(predictor=bayes_of_B(fam, B))
        self.support = self.D.support
        self._cache = {}

    def __call__(self, X, Y):
        est = self.learner.fit(X, Y)
        sig = tuple(map(tuple, est.predict(self.support)))
        hit = self._cache.get(sig)
        if hit is None:
            pred = TablePredictor(dict(zip(self.support, sig)), l=self.fam.l)
            hit = self._cache[sig] = expected_risk(pred, self.D) - self.bayes
        return hit


def _to_xy(samples, l):
    return [x for x, _ in samples], np.array([y for _, y in samples], dtype=int).reshape(-1, l)


def _weight(atoms, idx):
    w = 1
    for i in idx:
        w *= atoms[i][2]
    return w


def expected_excess_exact(learner, fam, B, m, budget=None):
    """Exact ``E_{S ~ D_B^m}[excess risk of learner(S)]`` by enumerating datasets.

    Ordered datasets are enumerated unless the learner declares itself
    permutation invariant, in which case multisets are weighted by their
    multinomial counts (same value, fewer learner calls).
    """
    budget = enumeration_budget() if budget is None else budget
    ev = _Evaluator(learner, fam, B)
    atoms = [a for a in ev.D.atoms if a[2] > 0]
    n = len(atoms)
    if n ** m > budget:
        raise CapacityError(f"exact mode would enumerate {n}^{m} = {n ** m} datasets "
                            f"(budget {budget}); use monte_carlo mode")
    total = 0
    if getattr(ev.learner, "permutation_invariant", False):
        m_fact = math.factorial(m)
        for idx in itertools.combinations_with_replacement(range(n), m):
            mult = m_fact
            for c in Counter(idx).values():
                mult //= math.factorial(c)
            X, Y = _to_xy([atoms[i][:2] for i in idx], fam.l)
            total += mult * _weight(atoms, idx) * ev(X, Y)
    else:
        for idx in itertools.product(range(n), repeat=m):
            X, Y = _to_xy([atoms[i][:2] for i in idx], fam.l)
            total += _weight(atoms, idx) * ev(X, Y)
    return total


def expected_excess_mc(learner, fam, B, m, reps, seed=0):
    """Monte Carlo ``(mean, standard error)`` of the excess risk over ``reps`` datasets.

    Replicate ``r`` draws from its own generator seeded with ``(seed, r)``.
    """
    if reps < 2:
        raise DomainError("monte carlo needs reps >= 2")
    ev = _Evaluator(learner, fam, B)
    values = []
    for r in range(reps):
        S = sample(ev.D, m, np.random.default_rng([seed, r]))
        values.append(ev(S.X, S.Y))
    mean = sum(values) / reps
    se = statistics.stdev(float(v) for v in values) / math.sqrt(reps)
    return mean, se


@dataclass
class GameReport:
    d: int
    m: int
    gamma: object
    p: object
    learner: str
    mode: str
    per_B: dict = field(default_factory=dict)
    se: dict = field(default_factory=dict)
    worst: object = None
    argmax: str = ""
    intermediate_bound: object = None
    theorem1_bound: object = None
    truth_based: bool = False
    seed: object = None

    @property
    def bound_checked(self):
        return self.mode == "exact" and not self.truth_based

    @property
    def violates_bound(self):
        return self.bound_checked and self.worst < self.intermediate_bound

    def to_dict(self):
        f = lambda q: float(q) if q is not None else None
        return {"d": self.d, "m": self.m, "gamma": f(self.gamma), "p": f(self.p),
                "learner": self.learner, "mode": self.mode,
                "per_B": {b: f(v) for b, v in self.per_B.items()},
                "se": {b: f(v) for b, v in self.se.items()},
                "worst": f(self.worst), "argmax": self.argmax,
                "intermediate_bound": f(self.intermediate_bound),
                "theorem1_bound": f(self.theorem1_bound),
                "bound_checked": self.bound_checked, "violates_bound": self.violates_bound}


def worst_case(learner, fam, m, mode="exact", reps=1000, seed=0, learner_name=None, budget=None):
    """Evaluate every hypercube index and report the worst expected excess risk.

    ``argmax`` is the lexicographically first index attaining the maximum.
    """
    if mode not in ("exact", "monte_carlo"):
        raise DomainError(f"unknown mode {mode!r}")
    report = GameReport(fam.d, m, fam.gamma, fam.p, learner_name or type(learner).__name__,
                        mode, truth_based=learner.needs_truth(),
                        seed=seed if mode == "monte_carlo" else None)
    for B in hypercube(fam.d):
        key = B_to_bits(B)
        if mode == "exact":
            value = expected_excess_exact(learner, fam, B, m, budget=budget)
            report.se[key] = 0
        else:
            value, report.se[key] = expected_excess_mc(learner, fam, B, m, reps, seed)
        report.per_B[key] = value
        if report.worst is None or value > report.worst:
            report.worst, report.argmax = value, key
    report.intermediate_bound = intermediate_bound(fam.d, m, fam.gamma, fam.p)
    report.theorem1_bound = assouad_bound(fam.d, m, fam.gamma)
    return report


# --------------------------------------------------------------------------
# configs and sweeps


@dataclass
class GameConfig:
    d: int
    gamma: object
    m: int
    learner: dict
    p: object = "default"
    mode: str = "exact"
    reps: int = 1000
    seed: int = 0
    graph: FactorGraph = None
    u: int = 1
    v: int = 2
    run_id: str = None

    def __post_init__(self):
        if self.m < 1:
            raise DomainError("m must be at least 1")
        if isinstance(self.learner, str):
            self.learner = {"name": self.learner}
        if self.graph is None:
            self.graph = new_chain(max(2, self.v))

    @classmethod
    def from_dict(cls, doc):
        doc = dict(doc)
        try:
            d, m = int(doc["d"]), int(doc["m"])
            gamma = doc["gamma"]
            learner = doc["learner"]
        except KeyError as exc:
            raise DomainError(f"config is missing field {exc}") from None
        if gamma == "crossover":
            gamma = math.sqrt((d - 1) / m)
        gamma = parse_number(gamma)
        mode = doc.get("mode", "exact")
        reps, seed = doc.get("reps", 1000), doc.get("seed", 0)
        if isinstance(mode, dict):
            (mode, opts), = mode.items()
            reps, seed = opts.get("reps", reps), opts.get("seed", seed)
        graph = FactorGraph.from_dict(doc["graph"]) if "graph" in doc else None
        return cls(d=d, gamma=gamma, m=m, learner=learner, p=doc.get("p", "default"),
                   mode=mode, reps=int(reps), seed=int(seed), graph=graph,
                   u=int(doc.get("u", 1)), v=int(doc.get("v", 2)), run_id=doc.get("run_id"))

    def family(self):
        return AdversarialFamily.create(self.d, self.gamma, self.p, graph=self.graph,
                                        u=self.u, v=self.v, m=self.m)

    @property
    def learner_label(self):
        extra = [f"{k}={v}" for k, v in sorted(self.learner.items()) if k != "name"]
        return self.learner["name"] + (f"[{','.join(extra)}]" if extra else "")

    def run(self, budget=None):
        fam = self.family()
        est = make_learner(self.learner, fam)
        return worst_case(est, fam, self.m, self.mode, self.reps, self.seed,
                          learner_name=self.learner_label, budget=budget)


def expand_configs(doc):
    """Turn a config document into a flat list of config dicts.

    Accepts a single config, a list of configs, or ``{"configs": [...]}``;
    any config may carry ``"grid": {field: [values...]}`` which is expanded
    as a cartesian product in the listed order.
    """
    if isinstance(doc, dict) and "configs" in doc:
        items = doc["configs"]
    elif isinstance(doc, list):
        items = doc
    else:
        items = [doc]
    out = []
    for item in items:
        grid = item.get("grid") if isinstance(item, dict) else None
        if not grid:
            out.append(item)
            continue
        base = {k: v for k, v in item.items() if k != "grid"}
        keys = list(grid)
        for combo in itertools.product(*(grid[k] for k in keys)):
            out.append({**base, **dict(zip(keys, combo))})
    return out


def _num(q):
    if q is None or q == "":
        return ""
    return repr(float(q))


def sweep(configs, budget=None):
    """Run each config and return CSV rows (dicts), one per index ``B`` plus a ``max`` row.

    Failures are captured in the ``errors`` column of a single row and the
    sweep moves on.
    """
    rows, reports = [], []
    for k, raw in enumerate(configs):
        start = time.perf_counter()
        base = {c: "" for c in CSV_COLUMNS}
        base["run_id"] = f"run{k:04d}"
        try:
            cfg = raw if isinstance(raw, GameConfig) else GameConfig.from_dict(raw)
            if cfg.run_id:
                base["run_id"] = cfg.run_id
            base.update(d=cfg.d, m=cfg.m, gamma=_num(cfg.gamma), learner=cfg.learner_label,
                        mode=cfg.mode, seed=cfg.seed if cfg.mode == "monte_carlo" else "")
            fam = cfg.family()
            base["p"] = _num(fam.p)
            report = cfg.run(budget=budget)
        except (DomainError, CapacityError, ValueError, TypeError, KeyError) as exc:
            base["wall_ms"] = f"{(time.perf_counter() - start) * 1000:.1f}"
            base["errors"] = f"{type(exc).__name__}: {exc}"
            if isinstance(raw, dict):
                for c in ("d", "m", "gamma", "p", "mode"):
                    if base[c] == "" and c in raw and not isinstance(raw[c], (dict, list)):
                        base[c] = raw[c]
            rows.append(base)
            reports.append(None)
            continue
        wall = f"{(time.perf_counter() - start) * 1000:.1f}"
        common = dict(base, intermediate_bound=_num(report.intermediate_bound),
                      theorem1_bound=_num(report.theorem1_bound), wall_ms=wall)
        for b, value in report.per_B.items():
            rows.append(dict(common, B=b, excess=_num(value), se=_num(report.se[b])))
        note = ""
        if report.truth_based:
            note = "bound check skipped: learner is handed the true distribution"
        elif report.violates_bound:
            note = "BOUND VIOLATION: worst case below intermediate bound"
        rows.append(dict(common, B="max", excess=_num(report.worst),
                         se=_num(report.se[report.argmax]), errors=note))
        reports.append(report)
    return rows, reports


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({c: r.get(c, "") for c in CSV_COLUMNS})
    return buf.getvalue()
