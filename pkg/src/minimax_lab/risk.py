"""Hamming loss, risks and the Bayes-Hamming predictor over finite distributions.

Every expectation here is an exact finite sum. Probabilities may be floats or
:class:`fractions.Fraction`; with fractions all risks come back exact.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scoring import DomainError

PROB_TOL = 1e-12


def hamming_loss(y, y_prime):
    """Number of coordinates on which two labelings disagree."""
    if len(y) != len(y_prime):
        raise DomainError(f"labelings differ in length: {len(y)} vs {len(y_prime)}")
    return sum(1 for a, b in zip(y, y_prime) if a != b)


def _bits(y):
    y = tuple(int(b) for b in y)
    if any(b not in (0, 1) for b in y):
        raise DomainError(f"labeling entries must be 0/1, got {y}")
    return y


class TablePredictor:
    """Predictor backed by a lookup table ``{x: labeling}``.

    Inputs missing from the table map to ``default`` when one is given,
    otherwise they raise :class:`DomainError`.
    """

    def __init__(self, table, l=None, default=None):
        self.table = {x: _bits(y) for x, y in dict(table).items()}
        if l is None:
            lengths = {len(y) for y in self.table.values()}
            if len(lengths) != 1:
                raise DomainError("cannot infer labeling length from table")
            l = lengths.pop()
        self.l = l
        self.default = None if default is None else _bits(default)

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            if self.default is None:
                raise DomainError(f"predictor is undefined at {x!r}") from None
            return self.default

    def __eq__(self, other):
        return isinstance(other, TablePredictor) and self.table == other.table \
            and self.default == other.default

    def __hash__(self):
        return hash((frozenset(self.table.items()), self.default))

    def __repr__(self):
        return f"TablePredictor({self.table!r})"


def constant_predictor(l, value=0):
    return TablePredictor({}, l=l, default=(value,) * l)


def as_predictor(obj):
    """Coerce a callable, a mapping or a fitted estimator into ``x -> labeling``."""
    if isinstance(obj, Mapping):
        return TablePredictor(obj)
    if hasattr(obj, "predict") and not callable(obj):
        return lambda x: tuple(int(b) for b in obj.predict([x])[0])
    if callable(obj):
        return obj
    raise TypeError(f"cannot use {type(obj).__name__} as a predictor")


def _apply(pred, x):
    try:
        return tuple(pred(x))
    except (KeyError, IndexError) as exc:
        raise DomainError(f"predictor is undefined at {x!r}") from exc


@dataclass(frozen=True)
class Dataset:
    """Ordered sample ``((x_1, y_1), ..., (x_m, y_m))``."""

    samples: tuple

    def __post_init__(self):
        samples = tuple((x, _bits(y)) for x, y in self.samples)
        if not samples:
            raise DomainError("dataset must contain at least one sample")
        if len({len(y) for _, y in samples}) != 1:
            raise DomainError("all labelings in a dataset must share one length")
        object.__setattr__(self, "samples", samples)

    def __iter__(self):
        return iter(self.samples)

    def __len__(self):
        return len(self.samples)

    @property
    def l(self):
        return len(self.samples[0][1])

    @property
    def X(self):
        return [x for x, _ in self.samples]

    @property
    def Y(self):
        return np.array([y for _, y in self.samples], dtype=int)

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x"] + [f"y_{i}" for i in range(1, self.l + 1)])
        for x, y in self.samples:
            w.writerow([x, *y])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or rows[0][:1] != ["x"]:
            raise DomainError("dataset CSV must start with header 'x,y_1,...'")
        return cls(tuple((r[0], tuple(int(b) for b in r[1:])) for r in rows[1:] if r))


class FiniteDistribution:
    """Joint distribution over ``(input, labeling)`` pairs with finite support.

    ``atoms`` is a sequence of ``(x, y, p)``. Masses must be non-negative and
    sum to one within ``1e-12``; small deviations are normalized away.
    """

    def __init__(self, atoms):
        atoms = [(x, _bits(y), p) for x, y, p in atoms]
        if not atoms:
            raise DomainError("distribution needs at least one atom")
        keys = [(x, y) for x, y, _ in atoms]
        if len(set(keys)) != len(keys):
            raise DomainError("distribution atoms must be distinct")
        if len({len(y) for _, y, _ in atoms}) != 1:
            raise DomainError("all labelings must share one length")
        for x, y, p in atoms:
            if p < 0:
                raise DomainError(f"negative mass {p} at ({x!r}, {y})")
        total = sum(p for _, _, p in atoms)
        if abs(total - 1) > PROB_TOL:
            raise DomainError(f"masses sum to {total}, not 1")
        if total != 1:
            atoms = [(x, y, p / total) for x, y, p in atoms]
        self.atoms = tuple(atoms)
        self.l = len(atoms[0][1])

        marginal = {}
        ones = {}
        for x, y, p in self.atoms:
            marginal[x] = marginal.get(x, 0) + p
            acc = ones.setdefault(x, [0] * self.l)
            for i, b in enumerate(y):
                if b:
                    acc[i] += p
        self.marginal = marginal
        self.eta = {x: tuple(c / marginal[x] for c in ones[x])
                    for x in marginal if marginal[x] > 0}

    @property
    def support(self):
        """Inputs with positive marginal mass, in first-appearance order."""
        return tuple(self.eta)

    def __repr__(self):
        return f"FiniteDistribution({len(self.atoms)} atoms, l={self.l})"

    def __eq__(self, other):
        return isinstance(other, FiniteDistribution) and \
            sorted(map(repr, self.atoms)) == sorted(map(repr, other.atoms))

    def to_dict(self):
        return {"atoms": [{"x": x, "y": list(y), "p": _json_number(p)}
                          for x, y, p in self.atoms]}

    @classmethod
    def from_dict(cls, doc):
        try:
            return cls([(a["x"], a["y"], _parse_number(a["p"])) for a in doc["atoms"]])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed distribution document: {exc}") from exc

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _json_number(p):
    if isinstance(p, Fraction):
        return str(p) if p.denominator != 1 else int(p)
    return p


def _parse_number(p):
    if isinstance(p, str):
        return Fraction(p)
    return p


def empirical_risk(pred, S):
    """Average Hamming loss of ``pred`` on the samples of ``S``."""
    samples = S.samples if isinstance(S, Dataset) else tuple(S)
    if not samples:
        raise DomainError("empirical risk needs at least one sample")
    pred = as_predictor(pred)
    total = sum(hamming_loss(_apply(pred, x), y) for x, y in samples)
    return total / len(samples)


def expected_risk(pred, D):
    pred = as_predictor(pred)
    return sum(p * hamming_loss(_apply(pred, x), y) for x, y, p in D.atoms if p)


def bayes_predictor(D):
    """Coordinatewise threshold of the conditional marginals at 1/2 (ties predict 1).

    Inputs outside the support map to the all-zeros labeling.
    """
    table = {x: tuple(1 if 2 * e >= 1 else 0 for e in eta) for x, eta in D.eta.items()}
    return TablePredictor(table, l=D.l, default=(0,) * D.l)


def bayes_risk(D):
    return sum(D.marginal[x] * sum(min(e, 1 - e) for e in eta) for x, eta in D.eta.items())


def risk_via_marginals(pred, D):
    """Expected risk written through the conditional marginals.

    Sum over coordinates of ``E_x[eta_i (1 - f_i) + (1 - eta_i) f_i]``; agrees
    with :func:`expected_risk` up to rounding.
    """
    pred = as_predictor(pred)
    total = 0
    for x, eta in D.eta.items():
        f = _apply(pred, x)
        total += D.marginal[x] * sum(e * (1 - b) + (1 - e) * b for e, b in zip(eta, f))
    return total


def excess_risk(pred, D):
    return expected_risk(pred, D) - bayes_risk(D)


def sample(D, m, seed=0):
    """Draw ``m`` i.i.d. samples from ``D`` by inverse CDF over its atom list.

    ``seed`` may be an int or a :class:`numpy.random.Generator`.
    """
    if m < 1:
        raise DomainError("sample size must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    cdf = np.cumsum([float(p) for _, _, p in D.atoms])
    idx = np.searchsorted(cdf, rng.random(m) * cdf[-1], side="right")
    idx = np.minimum(idx, len(cdf) - 1)
    return Dataset(tuple((D.atoms[i][0], D.atoms[i][1]) for i in idx))


def random_distribution(n_inputs, l, seed, max_atoms_per_input=None, exact=False):
    """Seeded random distribution over ``n_inputs`` inputs named ``"x0", "x1", ...``.

    Each input gets a random nonempty set of labelings with Dirichlet masses.
    With ``exact=True`` masses are fractions with denominator 1000 or so.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    all_y = [tuple((k >> (l - 1 - i)) & 1 for i in range(l)) for k in range(2 ** l)]
    cap = max_atoms_per_input or len(all_y)
    keys = []
    for j in range(n_inputs):
        k = int(rng.integers(1, min(cap, len(all_y)) + 1))
        for i in sorted(rng.choice(len(all_y), size=k, replace=False)):
            keys.append((f"x{j}", all_y[i]))
    w = rng.dirichlet(np.ones(len(keys)))
    if exact:
        ints = np.maximum(1, np.round(w * 1000)).astype(int)
        total = int(ints.sum())
        probs = [Fraction(int(c), total) for c in ints]
    else:
        probs = (w / w.sum()).tolist()
    return FiniteDistribution([(x, y, p) for (x, y), p in zip(keys, probs)])
