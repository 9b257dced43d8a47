"""Deterministic identity checks run by ``minimax-lab selftest``."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from . import adversarial as adv
from .dimension import random_pair_class, theorem2_check
from .graph import new_chain
from .risk import (TablePredictor, bayes_predictor, bayes_risk, expected_risk,
                   random_distribution, risk_via_marginals)

TOL = 1e-12
GAMMAS = (0.05, 0.1, 0.2, Fraction(1, 3))


def _all_predictors(support, l):
    labels = list(itertools.product((0, 1), repeat=l))
    for combo in itertools.product(labels, repeat=len(support)):
        yield TablePredictor(dict(zip(support, combo)), l=l)


def check_bayes_optimality(seed=0, n=30):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        D = random_distribution(int(rng.integers(1, 4)), int(rng.integers(1, 4)), rng)
        best = min(expected_risk(f, D) for f in _all_predictors(D.support, D.l))
        if abs(expected_risk(bayes_predictor(D), D) - best) > TOL:
            return False, "Bayes predictor is not optimal"
    return True, f"{n} distributions"


def check_marginal_identity(seed=1, n=200):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        D = random_distribution(int(rng.integers(1, 5)), int(rng.integers(1, 5)), rng)
        f = TablePredictor({x: tuple(rng.integers(0, 2, D.l)) for x in D.support}, l=D.l)
        worst = max(worst, abs(risk_via_marginals(f, D) - expected_risk(f, D)))
    return worst <= TOL, f"max deviation {worst:.2e} over {n} pairs"


def _families():
    g = new_chain(3)
    for d in (2, 3, 4):
        for gamma in GAMMAS:
            for p in (Fraction(1, 2 * (d - 1)), Fraction(1, d - 1), 0.07):
                yield adv.AdversarialFamily(g, 1, 2, [f"x{i}" for i in range(d)], gamma, p)


def check_construction(corrupt=False):
    count = 0
    for fam in _families():
        for B in adv.hypercube(fam.d):
            D = adv.build_distribution(fam, B)
            closed = adv.eta(fam, B)
            for x, e in D.eta.items():
                shift = 1e-6 if corrupt else 0
                if max(abs(a - b - shift) for a, b in zip(e, closed[x])) > TOL:
                    return False, f"eta mismatch at d={fam.d} gamma={fam.gamma} B={adv.B_to_bits(B)}"
            bp, fb = bayes_predictor(D), adv.bayes_of_B(fam, B)
            if any(bp(x) != fb(x) for x in D.support):
                return False, "closed-form Bayes predictor differs"
            target = fam.p * (fam.d - 1) * (1 - fam.gamma)
            if abs(bayes_risk(D) - target) > TOL:
                return False, "Bayes risk differs from p(d-1)(1-gamma)"
            count += 1
    return True, f"{count} (family, B) cases"


def check_geometry():
    count = 0
    for fam in _families():
        cube = list(adv.hypercube(fam.d))
        preds = {B: adv.bayes_of_B(fam, B) for B in cube}
        dists = {B: adv.build_distribution(fam, B) for B in cube}
        cap = 6 * fam.p * fam.gamma ** 2
        closed = adv.hellinger_closed_form(fam)
        for B, B2 in itertools.product(cube, repeat=2):
            dist = sum(a != b for r, r2 in zip(B, B2) for a, b in zip(r, r2))
            if adv.l11_distance(preds[B], preds[B2], fam) != fam.p * dist:
                return False, "L11 distance is not p times the Hamming distance"
            if dist == 1:
                h = adv.hellinger_sq(dists[B], dists[B2])
                if abs(h - closed) > TOL or h > cap + TOL:
                    return False, f"Hellinger mismatch: {h} vs {closed} (cap {cap})"
            count += 1
    for d, m in ((2, 9), (3, 50), (5, 100), (6, 400)):
        a, b = adv.assouad_branches(d, m, math.sqrt((d - 1) / m))
        if abs(a - b) > TOL:
            return False, f"branches differ at crossover d={d} m={m}"
    return True, f"{count} index pairs"


def check_default_p_bound():
    for d, m, gamma in ((2, 8, Fraction(1, 3)), (3, 20, Fraction(1, 4)), (5, 100, Fraction(3, 10))):
        p = adv.default_p(gamma, m)
        if adv.intermediate_bound(d, m, gamma, p) != Fraction(d - 1) / (81 * gamma * m):
            return False, f"default p bound differs at d={d} m={m}"
    return True, "exact rational agreement"


def check_theorem2(seed=2, n=100):
    rng = np.random.default_rng(seed)
    equal = 0
    for _ in range(n):
        r = theorem2_check(random_pair_class(rng))
        if r.dim_pairs > r.min_vc:
            return False, "pair dimension exceeds a VC dimension", None
        equal += r.equal
    return True, f"dim <= min VC on {n} classes", f"equality held on {equal}/{n} classes"


CHECKS = {
    "bayes_optimality": check_bayes_optimality,
    "marginal_risk_identity": check_marginal_identity,
    "construction": check_construction,
    "geometry": check_geometry,
    "default_p_bound": check_default_p_bound,
    "theorem2_upper": check_theorem2,
}


def run(corrupt=None):
    """Yield ``(name, passed, detail, info)`` for every check."""
    for name, fn in CHECKS.items():
        out = fn(corrupt=True) if name == corrupt else fn()
        passed, detail = out[0], out[1]
        info = out[2] if len(out) > 2 else None
        yield name, passed, detail, info
